#include "frankl/driver.hpp"

#include <algorithm>

#include "frankl/lp.hpp"

namespace frankl {

namespace {

SetFamily prepare(const SetFamily& a) {
    if (a.empty()) throw error("classify: empty family");
    if (!is_union_closed(a)) throw error("classify: family is not union-closed");
    SetFamily full = add_empty(a);
    if (full.size() == 1) throw error("classify: the family {empty} is excluded");
    const Mask everything = static_cast<Mask>((1u << full.n()) - 1);
    if (full.union_of_all() != everything)
        throw error("classify: family does not cover its ground set");
    full.set_uc_status(UcStatus::yes);
    return full;
}

std::string witness_row_name(std::size_t k) { return "poonen:" + std::to_string(k); }

// y-form master: sum y = 1, frequencies(B) . y >= |B|/2 per witness, y >= 0.
LinearSystem master_lp_system(const SetFamily& a, const std::vector<SetFamily>& witnesses) {
    const int n = a.n();
    LinearSystem sys;
    for (int i = 1; i <= n; ++i) sys.vars.push_back("y" + std::to_string(i));
    sys.nonneg.assign(n, true);
    sys.add_row("norm", std::vector<Rat>(n, Rat(1)), Rel::eq, Rat(1));
    for (std::size_t k = 0; k < witnesses.size(); ++k) {
        LinearConstraint row = poonen_row(witnesses[k]);
        row.name = witness_row_name(k);
        sys.rows.push_back(std::move(row));
    }
    return sys;
}

// z-form master rows: sum_i (2|B_i| - |B|) z_i >= 0 per witness, sum z >= 1.
LinearSystem master_ip_system(const SetFamily& a, const std::vector<SetFamily>& witnesses,
                              bool with_caps) {
    const int n = a.n();
    LinearSystem sys;
    for (int i = 1; i <= n; ++i) sys.vars.push_back("z" + std::to_string(i));
    sys.nonneg.assign(n, true);
    sys.add_row("norm", std::vector<Rat>(n, Rat(1)), Rel::ge, Rat(1));
    for (std::size_t k = 0; k < witnesses.size(); ++k) {
        auto f = frequencies(witnesses[k]);
        Rat size(static_cast<long>(witnesses[k].size()));
        std::vector<Rat> c(n);
        for (int i = 0; i < n; ++i) c[i] = Rat(2 * f[i]) - size;
        sys.add_row(witness_row_name(k), std::move(c), Rel::ge, Rat(0));
    }
    if (with_caps) {
        const long cap = 1L << 20;
        for (int i = 0; i < n; ++i) {
            std::vector<Rat> c(n, Rat(0));
            c[i] = 1;
            sys.add_row("cap:" + std::to_string(i + 1), std::move(c), Rel::le, Rat(cap));
        }
    }
    return sys;
}

struct MasterOutcome {
    bool feasible = false;
    std::vector<Rat> y;                // lp mode: normalized point
    std::vector<Int> z;                // ip mode: integer point
    LinearSystem system;               // on infeasibility
    std::map<std::string, Rat> duals;  // on infeasibility
};

MasterOutcome solve_master_lp(const SetFamily& a, const std::vector<SetFamily>& witnesses) {
    MasterOutcome out;
    LinearSystem sys = master_lp_system(a, witnesses);
    LpOutcome lp = solve_feasibility(sys);
    if (auto* feas = std::get_if<LpFeasible>(&lp)) {
        out.feasible = true;
        out.y = feas->point;
        return out;
    }
    out.system = std::move(sys);
    out.duals = std::get<LpInfeasible>(lp).duals;
    return out;
}

// Minimize the l1 norm of an integer z by branch and bound with exact LP
// bounds; bound rows are appended per node.
MasterOutcome solve_master_ip(const SetFamily& a, const std::vector<SetFamily>& witnesses) {
    MasterOutcome out;
    const int n = a.n();
    {
        // Infeasibility is decided on the uncapped system (the caps are a
        // search artifact, not part of I^A).
        LinearSystem root = master_ip_system(a, witnesses, false);
        LpOutcome lp = solve_feasibility(root);
        if (auto* inf = std::get_if<LpInfeasible>(&lp)) {
            out.system = std::move(root);
            out.duals = inf->duals;
            return out;
        }
    }
    std::vector<Rat> cost(n, Rat(1));
    struct Node {
        std::vector<LinearConstraint> extra;
    };
    std::vector<Node> stack{{}};
    std::optional<std::vector<Int>> best;
    Rat best_val = 0;
    long guard = 0;
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (++guard > 100000) throw undecided_error("master IP node limit exceeded");
        LinearSystem sys = master_ip_system(a, witnesses, true);
        for (const auto& row : node.extra) sys.rows.push_back(row);
        MinimizeResult r = minimize(sys, cost);
        if (!r.feasible) continue;
        if (r.unbounded) throw error("internal: master IP relaxation unbounded");
        if (best && r.value >= best_val) continue;
        int frac = -1;
        for (int i = 0; i < n; ++i)
            if (r.point[i].get_den() != 1) {
                frac = i;
                break;
            }
        if (frac < 0) {
            std::vector<Int> z(n);
            for (int i = 0; i < n; ++i) z[i] = r.point[i].get_num();
            if (!best || r.value < best_val) {
                best = std::move(z);
                best_val = r.value;
            }
            continue;
        }
        Int floor_v;
        mpz_fdiv_q(floor_v.get_mpz_t(), r.point[frac].get_num().get_mpz_t(),
                   r.point[frac].get_den().get_mpz_t());
        std::vector<Rat> up(n, Rat(0)), down(n, Rat(0));
        up[frac] = 1;
        down[frac] = 1;
        Node hi = node, lo = node;
        std::string tag = std::to_string(frac + 1) + ":" + std::to_string(node.extra.size());
        hi.extra.push_back({"b_ge" + tag, up, Rel::ge, Rat(floor_v + 1)});
        lo.extra.push_back({"b_le" + tag, down, Rel::le, Rat(floor_v)});
        stack.push_back(std::move(hi));
        stack.push_back(std::move(lo));
    }
    if (!best) throw undecided_error("master IP: no integer point within the variable cap");
    out.feasible = true;
    out.z = std::move(*best);
    return out;
}

}  // namespace

LinearConstraint poonen_row(const SetFamily& b) {
    if (b.empty()) throw error("poonen_row: empty family");
    auto f = frequencies(b);
    std::vector<Rat> coeffs(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) coeffs[i] = f[i];
    return LinearConstraint{"poonen", std::move(coeffs),
                            Rel::ge, make_rat(static_cast<long>(b.size()), 2)};
}

ClassificationCertificate classify(const SetFamily& a, const ClassifyOptions& opts) {
    SetFamily fam = prepare(a);
    const int n = fam.n();
    const int cap = opts.iteration_cap > 0 ? opts.iteration_cap : 4 * n;
    MasterProblem master;
    master.mode = opts.master_mode;
    auto cut_cache = make_cut_cache();

    for (int it = 1; it <= cap; ++it) {
        WeightVector c;
        std::vector<Rat> ybar;
        if (it == 1) {
            // deterministic start: the uniform point of the simplex
            ybar.assign(n, make_rat(1, n));
            c.entries.assign(n, Int(1));
        } else if (opts.master_mode == MasterMode::lp_normalized) {
            MasterOutcome m = solve_master_lp(fam, master.witnesses);
            if (!m.feasible) {
                NonFcCertificate cert;
                cert.family = fam;
                cert.form = MasterMode::lp_normalized;
                LinearSystem trimmed;
                trimmed.vars = m.system.vars;
                trimmed.nonneg = m.system.nonneg;
                for (const auto& row : m.system.rows) {
                    auto itd = m.duals.find(row.name);
                    if (itd == m.duals.end() || sgn(itd->second) == 0) continue;
                    trimmed.rows.push_back(row);
                    for (std::size_t k = 0; k < master.witnesses.size(); ++k)
                        if (row.name == witness_row_name(k))
                            cert.witnesses.push_back(master.witnesses[k]);
                }
                for (const auto& row : trimmed.rows) cert.duals[row.name] = m.duals.at(row.name);
                cert.system = std::move(trimmed);
                return cert;
            }
            ybar = m.y;
            auto scaled = lcm_scale(ybar);
            c.entries = std::move(scaled);
        } else {
            MasterOutcome m = solve_master_ip(fam, master.witnesses);
            if (!m.feasible) {
                NonFcCertificate cert;
                cert.family = fam;
                cert.form = MasterMode::ip_l1_min;
                LinearSystem trimmed;
                trimmed.vars = m.system.vars;
                trimmed.nonneg = m.system.nonneg;
                for (const auto& row : m.system.rows) {
                    auto itd = m.duals.find(row.name);
                    if (itd == m.duals.end() || sgn(itd->second) == 0) continue;
                    trimmed.rows.push_back(row);
                    for (std::size_t k = 0; k < master.witnesses.size(); ++k)
                        if (row.name == witness_row_name(k))
                            cert.witnesses.push_back(master.witnesses[k]);
                }
                for (const auto& row : trimmed.rows) cert.duals[row.name] = m.duals.at(row.name);
                cert.system = std::move(trimmed);
                return cert;
            }
            c.entries = m.z;
        }

        SeparationModel model = build_model(fam, c);
        SepOptions sep;
        sep.mode = opts.sep_mode;
        sep.node_limit = opts.node_limit;
        sep.lex_tie_break = false;  // any maximally violated row serves the loop
        sep.cut_cache = cut_cache;
        if (it == 1) sep.branch_first_on = opts.branch_first_on;
        SeparationOutcome outcome = solve_separation(model, sep);

        if (auto* empty = std::get_if<EmptySep>(&outcome)) {
            master.history.push_back({c, false, std::nullopt});
            FcCertificate cert;
            cert.family = fam;
            cert.weights = c;
            cert.proof = std::move(empty->proof);
            return cert;
        }
        auto& viol = std::get<Violating>(outcome);
        // anti-cycling: the new Poonen row must be strictly violated by ybar
        // (z-form check in ip mode), so no row ever repeats
        auto f = frequencies(viol.family);
        if (!ybar.empty()) {
            Rat lhs = 0;
            for (int i = 0; i < n; ++i) lhs += ybar[i] * Rat(f[i]);
            if (!(lhs < make_rat(static_cast<long>(viol.family.size()), 2)))
                throw error("internal: separated row is not violated by the master point");
        } else {
            Int lhs = 0;
            for (int i = 0; i < n; ++i)
                lhs += (2 * Int(f[i]) - Int(static_cast<long>(viol.family.size()))) * c.entries[i];
            if (sgn(lhs) >= 0)
                throw error("internal: separated row is not violated by the master point");
        }
        master.history.push_back({c, true, viol.family});
        master.witnesses.push_back(std::move(viol.family));
    }
    throw undecided_error("classification iteration cap (" + std::to_string(cap) + ") exceeded");
}

std::variant<FcCertificate, WeightRefutation> certify_weights(const SetFamily& a,
                                                              const WeightVector& c,
                                                              const ClassifyOptions& opts) {
    SetFamily fam = prepare(a);
    SeparationModel model = build_model(fam, c);
    SepOptions sep;
    sep.mode = opts.sep_mode;
    sep.node_limit = opts.node_limit;
    sep.branch_first_on = opts.branch_first_on;
    SeparationOutcome outcome = solve_separation(model, sep);
    if (auto* empty = std::get_if<EmptySep>(&outcome)) {
        FcCertificate cert;
        cert.family = fam;
        cert.weights = c;
        cert.proof = std::move(empty->proof);
        return cert;
    }
    auto& viol = std::get<Violating>(outcome);
    return WeightRefutation{std::move(viol.family), std::move(viol.objective)};
}

}  // namespace frankl
