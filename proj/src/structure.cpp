#include "frankl/structure.hpp"

#include <algorithm>
#include <thread>

#include "frankl/lp.hpp"

namespace frankl {

namespace {

SetFamily powerset_without(const GroundSet& g, int j) {
    std::vector<Mask> sets;
    const Mask bit = 1u << (j - 1);
    for (Mask m = 0; m < (1u << g.n); ++m)
        if (!(m & bit)) sets.push_back(m);
    return SetFamily(g, std::move(sets));
}

std::vector<Rat> z_row(const SetFamily& b, int n) {
    auto f = frequencies(b);
    std::vector<Rat> c(n);
    const long size = static_cast<long>(b.size());
    for (int i = 0; i < n; ++i) c[i] = Rat(2 * f[i] - size);
    return c;
}

}  // namespace

SetFamily build_bj(const SetFamily& a, int j) {
    if (!a.contains(0)) throw error("build_bj: empty set must belong to the family");
    if (j < 1 || j > a.n()) throw error("build_bj: element out of range");
    return uplus(powerset_without(a.ground(), j), a);
}

RelaxationSystem morris_system(const SetFamily& a) {
    const int n = a.n();
    RelaxationSystem out;
    out.kind = RelaxKind::morris_z;
    for (int i = 1; i <= n; ++i) out.rows.vars.push_back("z" + std::to_string(i));
    out.rows.nonneg.assign(n, true);
    out.rows.add_row("norm", std::vector<Rat>(n, Rat(1)), Rel::ge, Rat(1));
    for (int j = 1; j <= n; ++j) {
        SetFamily b = build_bj(a, j);
        out.rows.add_row("z:" + std::to_string(j), z_row(b, n), Rel::ge, Rat(0));
        out.provenance.emplace_back(j, std::move(b));
    }
    return out;
}

RelaxationSystem smaller_G_system(const SetFamily& a) {
    const int n = a.n();
    RelaxationSystem out;
    out.kind = RelaxKind::smaller_g;
    for (int i = 1; i <= n; ++i) out.rows.vars.push_back("z" + std::to_string(i));
    out.rows.nonneg.assign(n, true);
    out.rows.add_row("norm", std::vector<Rat>(n, Rat(1)), Rel::ge, Rat(1));
    for (int j = 1; j <= n; ++j) {
        SetFamily b = build_bj(a, j);
        const Mask bit = 1u << (j - 1);
        std::vector<Mask> g_sets;
        for (Mask m : b.sets())
            if (m & bit) g_sets.push_back(m);  // members outside P([n] \ {j})
        SetFamily g(a.ground(), std::move(g_sets));
        out.rows.add_row("g:" + std::to_string(j), z_row(g, n), Rel::ge, Rat(0));
        out.provenance.emplace_back(j, std::move(g));
    }
    return out;
}

RelaxationSystem vaughan_system(const SetFamily& a) {
    const int n = a.n();
    RelaxationSystem out;
    out.kind = RelaxKind::vaughan_eq;
    for (int i = 1; i <= n; ++i) out.rows.vars.push_back("y" + std::to_string(i));
    out.rows.nonneg.assign(n, true);
    for (int j = 1; j <= n; ++j) {
        SetFamily b = build_bj(a, j);
        auto f = frequencies(b);
        std::vector<Rat> c(n);
        for (int i = 0; i < n; ++i) c[i] = Rat(2 * f[i]);
        out.rows.add_row("eq:" + std::to_string(j), std::move(c), Rel::eq,
                         Rat(static_cast<long>(b.size())));
        out.provenance.emplace_back(j, std::move(b));
    }
    out.rows.add_row("l1", std::vector<Rat>(n, Rat(1)), Rel::le, Rat(1));
    return out;
}

MorrisOutcome morris_Z_nonempty(const SetFamily& a) {
    RelaxationSystem sys = morris_system(a);
    LpOutcome lp = solve_feasibility(sys.rows);
    if (auto* feas = std::get_if<LpFeasible>(&lp))
        return MorrisFeasible{lcm_scale(feas->point)};
    return RelaxEmpty{std::move(sys.rows), std::get<LpInfeasible>(lp).duals};
}

VaughanOutcome vaughan_solve(const SetFamily& a) {
    RelaxationSystem sys = vaughan_system(a);
    LpOutcome lp = solve_feasibility(sys.rows);
    if (auto* feas = std::get_if<LpFeasible>(&lp)) {
        VaughanSolution sol;
        sol.point = feas->point;
        sol.l1 = 0;
        for (const auto& v : sol.point) sol.l1 += v;
        sol.strictly_below_one = sol.l1 < 1;
        return sol;
    }
    return RelaxEmpty{std::move(sys.rows), std::get<LpInfeasible>(lp).duals};
}

RegularityReport regularity_check(const SetFamily& s, const ClassifyOptions& opts, int jobs) {
    RegularityReport report;
    report.generator = s;
    const int n = s.n();
    const Mask everything = static_cast<Mask>((1u << n) - 1);
    if (s.union_of_all() != everything)
        throw error("regularity_check: generator does not cover its ground set");
    SetFamily closure = union_closure(s);
    if (!(minimal_generator(closure) == s))
        throw error("regularity_check: input is not the minimal generator of its closure");
    if (is_fc(classify(closure, opts)))
        throw error("regularity_check: closure is an FC-family; regularity is vacuous");

    struct Task {
        Mask removed;
        int element;
        SetFamily family;
    };
    std::vector<Task> tasks;
    for (Mask a : s.sets()) {
        if (a == 0) continue;
        for (int i = 1; i <= n; ++i) {
            const Mask bit = 1u << (i - 1);
            if (a & bit) {
                report.skipped.emplace_back(a, i);  // enlargement is a no-op
                continue;
            }
            std::vector<Mask> members;
            for (Mask m : s.sets())
                if (m != a) members.push_back(m);
            Mask grown = a | bit;
            if (std::find(members.begin(), members.end(), grown) == members.end())
                members.push_back(grown);
            tasks.push_back({a, i, union_closure(SetFamily(s.ground(), std::move(members)))});
        }
    }

    std::vector<std::optional<ClassificationCertificate>> results(tasks.size());
    if (jobs <= 1) {
        for (std::size_t k = 0; k < tasks.size(); ++k)
            results[k] = classify(tasks[k].family, opts);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t k = next.fetch_add(1);
                if (k >= tasks.size()) return;
                results[k] = classify(tasks[k].family, opts);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    report.regular = true;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        bool fc = is_fc(*results[k]);
        if (fc) {
            report.regular = false;
            if (!report.witness) report.witness = {tasks[k].removed, tasks[k].element};
        }
        report.perturbations.push_back({tasks[k].removed, tasks[k].element,
                                        std::move(*results[k])});
    }
    return report;
}

}  // namespace frankl
