#include "frankl/separation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>

#include "frankl/lp.hpp"
#include "frankl/simplex.hpp"

namespace frankl {

namespace {

std::string var_name(Mask m) { return "x" + std::to_string(m); }

bool debug_on() {
    static bool v = std::getenv("FRANKL_DEBUG") != nullptr;
    return v;
}

}  // namespace

SeparationModel::SeparationModel(SetFamily a, WeightVector c) : a_(std::move(a)), c_(std::move(c)) {
    if (!is_union_closed(a_)) throw error("separation model: family is not union-closed");
    if (!a_.contains(0)) throw error("separation model: empty set must belong to the family");
    const int n = a_.n();
    const Mask full = static_cast<Mask>((1u << n) - 1);
    if (a_.union_of_all() != full)
        throw error("separation model: family does not cover the ground set");
    if (static_cast<int>(c_.entries.size()) != n)
        throw error("separation model: weight count does not match ground size");
    Int tot = 0;
    for (const auto& e : c_.entries) {
        if (sgn(e) < 0) throw error("separation model: negative weight");
        tot += e;
    }
    if (sgn(tot) <= 0) throw error("separation model: weights sum to zero");

    const std::size_t N = std::size_t{1} << n;
    w_.assign(N, Int(0));
    for (std::size_t s = 0; s < N; ++s) {
        Int in = 0;
        for (int i = 0; i < n; ++i)
            if (s >> i & 1u) in += c_.entries[i];
        w_[s] = 2 * in - tot;
    }

    // FS rows exist per (S, A) pair with A u S != S; the LP uses the
    // deduplicated orbit edges, reduced to the Hasse diagram of each orbit
    // (within an orbit, T' subset T implies the direct edge T' -> T exists,
    // so minimal targets carry all the constraints).
    for (std::size_t s = 0; s < N; ++s) {
        std::vector<Mask> orbit;
        for (Mask am : a_.sets()) {
            Mask t = static_cast<Mask>(s) | am;
            if (t != s) {
                ++fs_pairs_;
                orbit.push_back(t);
            }
        }
        std::sort(orbit.begin(), orbit.end());
        orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
        for (Mask t : orbit) {
            bool minimal = true;
            for (Mask t2 : orbit)
                if (t2 != t && (t2 & ~t) == 0) {
                    minimal = false;
                    break;
                }
            if (minimal) fs_edges_.emplace_back(static_cast<Mask>(s), t);
        }
    }
}

SeparationModel build_model(const SetFamily& a, const WeightVector& c) {
    return SeparationModel(a, c);
}

std::vector<FcCut> generate_fc_cuts(const SeparationModel& model, std::size_t cap) {
    const std::size_t N = model.num_vars();
    std::vector<FcCut> out;
    std::set<std::tuple<Mask, Mask, Mask>> seen;
    for (Mask sa : model.family().sets()) {
        if (sa == 0) continue;  // empty member degenerates to an FS row
        // bucket sets by sa | t
        std::map<Mask, std::vector<Mask>> buckets;
        for (std::size_t t = 0; t < N; ++t) buckets[sa | static_cast<Mask>(t)].push_back(static_cast<Mask>(t));
        for (auto& [f, ts] : buckets) {
            for (std::size_t i = 0; i < ts.size() && out.size() < cap; ++i)
                for (std::size_t j = i + 1; j < ts.size() && out.size() < cap; ++j) {
                    Mask t = ts[i], u = ts[j], tu = t | u;
                    if (tu == f || tu == t || tu == u) continue;  // subsumed by FS rows
                    if (seen.insert({t, u, f}).second) out.push_back({t, u, tu, f});
                }
            if (out.size() >= cap) return out;
        }
    }
    return out;
}

bool verify_fc_chain(const SetFamily& a, const SetFamily& s_family, const FCChain& chain) {
    if (chain.links.empty()) return false;
    if (chain.links.front().from != chain.source) return false;
    if (chain.links.back().to != chain.target) return false;
    for (std::size_t i = 0; i + 1 < chain.links.size(); ++i)
        if (chain.links[i].to != chain.links[i + 1].from) return false;
    std::optional<SetFamily> closure;  // only needed for UC links
    for (const auto& link : chain.links) {
        if (link.fs) {
            if (!a.contains(link.witness)) return false;
            if ((link.witness | link.from) != link.to) return false;
        } else {
            if (!closure) closure = closure_with(s_family, a);
            if (!closure->contains(link.witness)) return false;
            if ((link.from | link.witness) != link.to) return false;
        }
    }
    return true;
}

std::variant<FcChainCut, HallRejection> fc_chain_cut(const SetFamily& a,
                                                     const std::vector<Mask>& pos,
                                                     const std::vector<Mask>& neg,
                                                     const std::vector<FCChain>& chains) {
    for (Mask p : pos)
        for (Mask q : neg)
            if (p == q) throw error("fc_chain_cut: positive and negative sides overlap");
    if (pos.size() > 12) throw error("fc_chain_cut: positive side larger than 12");
    std::set<Mask> pos_set(pos.begin(), pos.end());
    std::set<Mask> neg_set(neg.begin(), neg.end());

    // Structural screening: path shape, FS witnesses, endpoint membership.
    struct Screened {
        const FCChain* chain;
        std::vector<Mask> uc_witnesses;
    };
    std::vector<Screened> usable;
    for (const auto& ch : chains) {
        if (!pos_set.count(ch.source) || !neg_set.count(ch.target)) continue;
        if (ch.links.empty() || ch.links.front().from != ch.source ||
            ch.links.back().to != ch.target)
            continue;
        bool ok = true;
        std::vector<Mask> ucw;
        for (std::size_t i = 0; i < ch.links.size(); ++i) {
            const auto& link = ch.links[i];
            if (i + 1 < ch.links.size() && link.to != ch.links[i + 1].from) ok = false;
            if (link.fs) {
                if (!a.contains(link.witness) || (link.witness | link.from) != link.to) ok = false;
            } else {
                if ((link.from | link.witness) != link.to) ok = false;
                ucw.push_back(link.witness);
            }
            if (!ok) break;
        }
        if (ok) usable.push_back({&ch, std::move(ucw)});
    }

    // Hall condition over every nonempty T: UC witnesses must lie in the
    // closure generated by T together with a.
    const std::size_t k = pos.size();
    for (std::size_t bits = 1; bits < (std::size_t{1} << k); ++bits) {
        std::vector<Mask> t_sets;
        for (std::size_t i = 0; i < k; ++i)
            if (bits >> i & 1u) t_sets.push_back(pos[i]);
        SetFamily closure = closure_with(SetFamily(a.ground(), t_sets), a);
        std::set<Mask> targets;
        for (const auto& sc : usable) {
            bool in_t = false;
            for (Mask tm : t_sets)
                if (tm == sc.chain->source) in_t = true;
            if (!in_t) continue;
            bool active = true;
            for (Mask w : sc.uc_witnesses)
                if (!closure.contains(w)) {
                    active = false;
                    break;
                }
            if (active) targets.insert(sc.chain->target);
        }
        if (targets.size() < t_sets.size()) return HallRejection{t_sets};
    }
    FcChainCut cut;
    cut.pos = pos;
    cut.neg = neg;
    for (const auto& sc : usable) cut.chains.push_back(*sc.chain);
    return cut;
}

std::vector<FCChain> find_fc_chains(const SetFamily& a, const std::vector<Mask>& pos,
                                    const std::vector<Mask>& neg, int max_depth) {
    std::vector<FCChain> out;
    SetFamily closure = closure_with(SetFamily(a.ground(), pos), a);
    std::set<Mask> neg_set(neg.begin(), neg.end());
    for (Mask s : pos) {
        // breadth-first over FS and UC moves, shortest chain per target
        struct State {
            Mask at;
            std::vector<ChainLink> links;
        };
        std::vector<State> frontier{{s, {}}};
        std::set<Mask> visited{s};
        std::set<Mask> reached;
        for (int depth = 0; depth < max_depth; ++depth) {
            std::vector<State> next;
            for (const auto& st : frontier) {
                auto try_move = [&](Mask to, ChainLink link) {
                    if (visited.count(to)) return;
                    visited.insert(to);
                    State ns{to, st.links};
                    ns.links.push_back(link);
                    if (neg_set.count(to) && !reached.count(to)) {
                        reached.insert(to);
                        out.push_back({s, to, ns.links});
                    }
                    next.push_back(std::move(ns));
                };
                for (Mask am : a.sets()) {
                    Mask to = st.at | am;
                    if (to != st.at) try_move(to, {st.at, to, true, am});
                }
                for (Mask wm : closure.sets()) {
                    Mask to = st.at | wm;
                    if (to != st.at) try_move(to, {st.at, to, false, wm});
                }
            }
            frontier = std::move(next);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Branch and bound

namespace detail_sep {

struct SRow {
    std::string name;
    std::vector<std::pair<Mask, Int>> terms;
    Rel rel = Rel::le;
    Int rhs = 0;
    int kind = 0;             // 0 base/fixing/nogood, 1 uc, 2 fc
    std::uint64_t key = 0;    // dedup key for uc/fc rows
};

}  // namespace detail_sep

// Structural cut rows (UC and FC) discovered by earlier solves on the same
// family; no-goods and weight-dependent rows never enter the cache.
struct SepCutCache {
    std::vector<detail_sep::SRow> rows;
    std::set<std::uint64_t> uc_keys, fc_keys;
};

std::shared_ptr<SepCutCache> make_cut_cache() { return std::make_shared<SepCutCache>(); }

namespace {

using detail_sep::SRow;

class Solver {
  public:
    Solver(const SeparationModel& model, const SepOptions& opts)
        : model_(model), opts_(opts), N_(model.num_vars()) {
        base_rows_.reserve(model_.fs_edges().size() + N_ + 1);
        for (auto [s, t] : model_.fs_edges()) {
            SRow r;
            r.name = "fs:" + std::to_string(s) + ">" + std::to_string(t);
            r.terms = {{s, Int(1)}, {t, Int(-1)}};
            r.rel = Rel::le;
            r.rhs = 0;
            base_rows_.push_back(std::move(r));
        }
        for (std::size_t s = 0; s < N_; ++s) {
            SRow r;
            r.name = "ub:" + std::to_string(s);
            r.terms = {{static_cast<Mask>(s), Int(1)}};
            r.rel = Rel::le;
            r.rhs = 1;
            base_rows_.push_back(std::move(r));
        }
        wv_rhs_ = -1;
        if (opts_.cut_cache) {
            pool_ = opts_.cut_cache->rows;
            uc_seen_ = opts_.cut_cache->uc_keys;
            fc_seen_ = opts_.cut_cache->fc_keys;
        }
    }

    ~Solver() {
        if (!opts_.cut_cache) return;
        opts_.cut_cache->rows.clear();
        for (const auto& r : pool_)
            if (r.name.rfind("ng:", 0) != 0) opts_.cut_cache->rows.push_back(r);
        opts_.cut_cache->uc_keys = uc_seen_;
        opts_.cut_cache->fc_keys = fc_seen_;
    }

    SeparationOutcome run() {
        std::vector<Node> stack;
        Node root;
        if (opts_.branch_first_on) {
            Node one = root, zero = root;
            one.fixings.emplace_back(*opts_.branch_first_on, 1);
            zero.fixings.emplace_back(*opts_.branch_first_on, 0);
            stack.push_back(std::move(zero));
            stack.push_back(std::move(one));
        } else {
            stack.push_back(std::move(root));
        }
        while (!stack.empty()) {
            Node node = std::move(stack.back());
            stack.pop_back();
            bump_nodes();
            NodeResult res = process(node);
            if (res.done) break;  // feasibility mode shortcut
            if (res.branch_var) {
                Node one = node, zero = node;
                one.fixings.emplace_back(*res.branch_var, 1);
                zero.fixings.emplace_back(*res.branch_var, 0);
                stack.push_back(std::move(zero));
                stack.push_back(std::move(one));
            }
        }
        if (incumbent_) {
            if (debug_on())
                std::cerr << "[sep] phase A done: nodes=" << nodes_ << " pool=" << pool_.size()
                          << std::endl;
            if (opts_.mode == SepMode::max_violation && opts_.lex_tie_break) lex_refine();
            if (debug_on()) std::cerr << "[sep] lex done: nodes=" << nodes_ << std::endl;
            Int objective = -incumbent_value_;
            return Violating{std::move(*incumbent_), std::move(objective)};
        }
        BnbProof proof;
        proof.n = model_.n();
        proof.leaves = std::move(leaves_);
        return EmptySep{std::move(proof)};
    }

  private:
    struct Node {
        std::vector<std::pair<Mask, int>> fixings;
    };
    struct NodeResult {
        std::optional<Mask> branch_var;
        bool done = false;
    };

    SRow wv_row() const {
        SRow r;
        r.name = "wv";
        const auto& w = model_.wv_coeffs();
        for (std::size_t s = 0; s < N_; ++s)
            if (sgn(w[s]) != 0) r.terms.emplace_back(static_cast<Mask>(s), w[s]);
        r.rel = Rel::le;
        r.rhs = wv_rhs_;
        return r;
    }

    std::vector<SRow> node_rows(const Node& node) const {
        std::vector<SRow> rows = base_rows_;
        rows.push_back(wv_row());
        for (const auto& r : pool_) rows.push_back(r);
        for (auto [mask, val] : node.fixings) {
            SRow r;
            r.name = "fix:" + std::to_string(mask);
            r.terms = {{mask, Int(1)}};
            r.rel = Rel::eq;
            r.rhs = val;
            rows.push_back(std::move(r));
        }
        return rows;
    }

    // Float LP over the current rows. Returns status plus point or duals.
    struct FloatLp {
        detail::SimplexStatus status;
        std::vector<double> x;
        std::vector<double> duals;  // per row, user orientation
    };

    FloatLp solve_float(const std::vector<SRow>& rows) const {
        using DTab = detail::Tableau<double>;
        std::vector<std::vector<double>> coeffs(rows.size(), std::vector<double>(N_, 0.0));
        std::vector<DTab::RowKind> kinds(rows.size());
        std::vector<double> rhs(rows.size());
        std::vector<int> sign(rows.size(), 1);
        const double jitter = 1e-8 / static_cast<double>(rows.size() + 1);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double b = rows[i].rhs.get_d();
            int sg = b < 0 ? -1 : 1;
            sign[i] = sg;
            for (auto& [m, v] : rows[i].terms) coeffs[i][m] += v.get_d() * sg;
            rhs[i] = b * sg;
            Rel rel = rows[i].rel;
            if (sg < 0) rel = rel == Rel::le ? Rel::ge : (rel == Rel::ge ? Rel::le : Rel::eq);
            kinds[i] = rel == Rel::le   ? DTab::RowKind::le
                       : rel == Rel::ge ? DTab::RowKind::ge
                                        : DTab::RowKind::eq;
            // deterministic anti-degeneracy jitter; results are advisory and
            // re-derived exactly, so a slightly relaxed region is harmless
            if (rel != Rel::eq) rhs[i] += jitter * static_cast<double>(i + 1);
        }
        DTab tab(std::move(coeffs), kinds, std::move(rhs), N_);
        long cap = 12L * static_cast<long>(rows.size() + N_) + 1000;
        FloatLp out;
        out.status = tab.phase1(cap);
        // a jitter-scale positive phase-1 value means "numerically feasible"
        if (out.status == detail::SimplexStatus::infeasible && tab.objective_value() < 1e-6)
            out.status = detail::SimplexStatus::optimal;
        if (out.status == detail::SimplexStatus::optimal) {
            // steer toward the most violating vertex: minimize sum w_S x_S
            std::vector<double> cost(N_);
            double scale = 0;
            for (std::size_t s = 0; s < N_; ++s)
                scale = std::max(scale, std::abs(model_.wv_coeffs()[s].get_d()));
            if (scale <= 0) scale = 1;
            for (std::size_t s = 0; s < N_; ++s)
                cost[s] = model_.wv_coeffs()[s].get_d() / scale;
            auto st2 = tab.phase2(cost, cap);
            if (st2 == detail::SimplexStatus::optimal ||
                st2 == detail::SimplexStatus::iteration_limit)
                out.x = tab.structural_point();
            else  // unbounded cannot happen with the upper-bound rows present
                out.x = tab.structural_point();
        } else if (out.status == detail::SimplexStatus::infeasible) {
            auto pi = tab.row_multipliers(true);
            out.duals.resize(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) out.duals[i] = pi[i] * sign[i];
        }
        if (debug_on())
            std::cerr << "[sep] float lp rows=" << rows.size() << " pivots=" << tab.pivots()
                      << " status=" << static_cast<int>(out.status) << std::endl;
        return out;
    }

    LinearSystem exact_system(const std::vector<SRow>& rows,
                              const std::vector<std::size_t>& which) const {
        LinearSystem sys;
        sys.vars.reserve(N_);
        for (std::size_t s = 0; s < N_; ++s) sys.vars.push_back(var_name(static_cast<Mask>(s)));
        sys.nonneg.assign(N_, true);
        for (std::size_t i : which) {
            std::vector<Rat> c(N_, Rat(0));
            for (auto& [m, v] : rows[i].terms) c[m] += Rat(v);
            sys.add_row(rows[i].name, std::move(c), rows[i].rel, Rat(rows[i].rhs));
        }
        return sys;
    }

    // Confirm infeasibility exactly, preferring the rows the float duals
    // point at; fall back to the full system. Returns false if the system is
    // actually feasible (with the exact point in x_out).
    bool confirm_infeasible(const std::vector<SRow>& rows, const std::vector<double>& fduals,
                            const Node& node, std::vector<Rat>* x_out) {
        std::vector<std::size_t> support;
        if (!fduals.empty()) {
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (std::abs(fduals[i]) > 1e-9) support.push_back(i);
        }
        for (int attempt = 0; attempt < 2; ++attempt) {
            std::vector<std::size_t> which;
            if (attempt == 0 && !support.empty() && support.size() < rows.size())
                which = support;
            else {
                which.resize(rows.size());
                for (std::size_t i = 0; i < rows.size(); ++i) which[i] = i;
            }
            LinearSystem sys = exact_system(rows, which);
            if (debug_on())
                std::cerr << "[sep] exact confirm attempt=" << attempt << " rows=" << which.size()
                          << std::endl;
            LpOutcome out = solve_feasibility(sys);
            if (auto* inf = std::get_if<LpInfeasible>(&out)) {
                record_leaf(node, sys, inf->duals);
                return true;
            }
            if (attempt == 1 || which.size() == rows.size()) {
                if (x_out) *x_out = std::get<LpFeasible>(out).point;
                return false;
            }
            // support subsystem was feasible; retry with everything
        }
        return false;  // unreachable
    }

    void record_leaf(const Node& node, const LinearSystem& sys,
                     const std::map<std::string, Rat>& duals) {
        if (incumbent_) return;  // outcome will be Violating; proof not needed
        BnbLeaf leaf;
        leaf.fixings = node.fixings;
        LinearSystem trimmed;
        trimmed.vars = sys.vars;
        trimmed.nonneg = sys.nonneg;
        for (const auto& row : sys.rows) {
            auto it = duals.find(row.name);
            if (it != duals.end() && sgn(it->second) != 0) {
                trimmed.rows.push_back(row);
                leaf.duals[row.name] = it->second;
            }
        }
        leaf.system = std::move(trimmed);
        leaves_.push_back(std::move(leaf));
    }

    // Scan a point for violated UC rows (support pairs) and FC cuts;
    // returns how many rows were added to the pool.
    std::size_t separate(const std::vector<double>& x) {
        constexpr double eps = 1e-7;
        constexpr std::size_t cap = 60;
        std::vector<Mask> support;
        for (std::size_t s = 0; s < N_; ++s)
            if (x[s] > eps) support.push_back(static_cast<Mask>(s));
        struct Cand {
            double viol;
            SRow row;
            std::uint64_t key;
        };
        std::vector<Cand> cands;
        for (std::size_t i = 0; i < support.size(); ++i)
            for (std::size_t j = i + 1; j < support.size(); ++j) {
                Mask s = support[i], t = support[j], u = s | t;
                if (u == s || u == t) continue;
                double v = x[s] + x[t] - x[u] - 1.0;
                if (v <= eps) continue;
                std::uint64_t key = (std::uint64_t(s) << 32) | t;
                if (uc_seen_.count(key)) continue;
                SRow r;
                r.name = "uc:" + std::to_string(s) + "+" + std::to_string(t);
                r.terms = {{s, Int(1)}, {t, Int(1)}, {u, Int(-1)}};
                r.rel = Rel::le;
                r.rhs = 1;
                r.kind = 1;
                r.key = key;
                cands.push_back({v, std::move(r), key});
            }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.viol != b.viol) return a.viol > b.viol;
            return a.key < b.key;
        });
        std::size_t added = 0;
        for (auto& c : cands) {
            if (added >= cap) break;
            uc_seen_.insert(c.key);
            pool_.push_back(std::move(c.row));
            ++added;
        }

        // FC cuts: for each member S of A, sets T with equal S|T form a
        // bucket; pairs inside a bucket give x_T + x_U - x_{T|U} - x_F <= 0.
        std::vector<Cand> fc;
        for (Mask sa : model_.family().sets()) {
            if (sa == 0) continue;
            std::map<Mask, std::vector<Mask>> buckets;
            for (Mask t : support) buckets[sa | t].push_back(t);
            for (auto& [f, ts] : buckets)
                for (std::size_t i = 0; i < ts.size(); ++i)
                    for (std::size_t j = i + 1; j < ts.size(); ++j) {
                        Mask t = ts[i], u = ts[j], tu = t | u;
                        if (tu == f || tu == t || tu == u) continue;
                        double v = x[t] + x[u] - x[tu] - x[f];
                        if (v <= eps) continue;
                        std::uint64_t key =
                            (std::uint64_t(t) << 40) | (std::uint64_t(u) << 20) | f;
                        if (fc_seen_.count(key)) continue;
                        SRow r;
                        r.name = "fc:" + std::to_string(t) + "+" + std::to_string(u) + ">" +
                                 std::to_string(f);
                        r.terms.emplace_back(t, Int(1));
                        r.terms.emplace_back(u, Int(1));
                        r.terms.emplace_back(tu, Int(-1));
                        r.terms.emplace_back(f, Int(-1));
                        r.rel = Rel::le;
                        r.rhs = 0;
                        r.kind = 2;
                        r.key = key;
                        fc.push_back({v, std::move(r), key});
                    }
        }
        std::sort(fc.begin(), fc.end(), [](const Cand& a, const Cand& b) {
            if (a.viol != b.viol) return a.viol > b.viol;
            return a.key < b.key;
        });
        std::size_t fc_added = 0;
        for (auto& c : fc) {
            if (fc_added >= cap) break;
            fc_seen_.insert(c.key);
            pool_.push_back(std::move(c.row));
            ++fc_added;
        }
        return added + fc_added;
    }

    void bump_nodes() {
        if (++nodes_ > opts_.node_limit)
            throw undecided_error("separation node limit (" + std::to_string(opts_.node_limit) +
                                  ") exceeded");
    }

    // Exact integer validation of a rounded candidate. Returns false when b
    // is a union-closed, A-closed family within the current weight bound;
    // otherwise adds a row excluding it (violated UC row, or a no-good for
    // float roundoff / stale-bound cases) and returns true.
    bool exclude_invalid_candidate(const std::vector<Mask>& b) {
        std::vector<bool> in(N_, false);
        for (Mask m : b) in[m] = true;
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = i + 1; j < b.size(); ++j)
                if (!in[b[i] | b[j]]) {
                    Mask s = b[i], t = b[j];
                    std::uint64_t key = (std::uint64_t(s) << 32) | t;
                    if (!uc_seen_.count(key)) {
                        uc_seen_.insert(key);
                        SRow r;
                        r.name = "uc:" + std::to_string(s) + "+" + std::to_string(t);
                        r.terms = {{s, Int(1)}, {t, Int(1)}, {s | t, Int(-1)}};
                        r.rel = Rel::le;
                        r.rhs = 1;
                        r.kind = 1;
                        r.key = key;
                        pool_.push_back(std::move(r));
                    } else {
                        add_nogood(b);
                    }
                    return true;
                }
        for (Mask am : model_.family().sets())
            for (Mask m : b)
                if (!in[m | am]) {
                    add_nogood(b);
                    return true;
                }
        Int val = 0;
        for (Mask m : b) val += model_.weight_of(m);
        if (val > wv_rhs_) {
            add_nogood(b);
            return true;
        }
        return false;
    }

    // Updates the incumbent; returns true if the node should be re-solved,
    // false if the candidate was accepted in feasibility mode.
    bool handle_candidate(const std::vector<Mask>& members, bool* accepted) {
        *accepted = false;
        std::vector<Mask> b = members;
        std::sort(b.begin(), b.end());
        if (exclude_invalid_candidate(b)) return true;
        Int val = 0;
        for (Mask m : b) val += model_.weight_of(m);
        SetFamily fam(model_.family().ground(), b);
        if (opts_.mode == SepMode::feasibility) {
            incumbent_ = std::move(fam);
            incumbent_value_ = val;
            *accepted = true;
            return false;
        }
        // strict improvement; ties at the optimum are resolved by lex_refine
        incumbent_ = std::move(fam);
        incumbent_value_ = val;
        wv_rhs_ = val - 1;
        return true;
    }

    // Feasibility search under extra fixings at the current weight bound,
    // guided by the float presolve; returned families are exactly validated.
    std::optional<SetFamily> feas_search(std::vector<std::pair<Mask, int>> fixed) {
        std::vector<Node> stack;
        stack.push_back(Node{std::move(fixed)});
        while (!stack.empty()) {
            Node node = std::move(stack.back());
            stack.pop_back();
            bump_nodes();
            for (;;) {
                std::vector<SRow> rows = node_rows(node);
                FloatLp lp = solve_float(rows);
                if (lp.status != detail::SimplexStatus::optimal) break;
                if (separate(lp.x) > 0) {
                    maybe_evict(lp.x);
                    continue;
                }
                constexpr double ieps = 1e-6;
                std::optional<Mask> frac;
                double best = 1.0;
                for (std::size_t s = 0; s < N_; ++s) {
                    double d = std::abs(lp.x[s] - 0.5);
                    if (lp.x[s] > ieps && lp.x[s] < 1.0 - ieps && d < best - 1e-12) {
                        best = d;
                        frac = static_cast<Mask>(s);
                    }
                }
                if (frac) {
                    Node one = node, zero = node;
                    one.fixings.emplace_back(*frac, 1);
                    zero.fixings.emplace_back(*frac, 0);
                    stack.push_back(std::move(zero));
                    stack.push_back(std::move(one));
                    break;
                }
                std::vector<Mask> b;
                for (std::size_t s = 0; s < N_; ++s)
                    if (lp.x[s] > 0.5) b.push_back(static_cast<Mask>(s));
                if (exclude_invalid_candidate(b)) continue;
                return SetFamily(model_.family().ground(), b);
            }
        }
        return std::nullopt;
    }

    // Rebuild the incumbent as the lexicographically smallest incidence
    // vector (masks ascending, absence preferred) among optimal families.
    void lex_refine() {
        wv_rhs_ = incumbent_value_;
        std::vector<bool> in(N_, false);
        for (Mask m : incumbent_->sets()) in[m] = true;
        std::vector<std::pair<Mask, int>> fixed;
        fixed.reserve(N_);
        for (std::size_t s = 0; s < N_; ++s) {
            Mask m = static_cast<Mask>(s);
            if (!in[s]) {
                fixed.emplace_back(m, 0);  // witnessed by the incumbent
                continue;
            }
            fixed.emplace_back(m, 0);
            auto witness = feas_search(fixed);
            if (witness) {
                in.assign(N_, false);
                for (Mask w : witness->sets()) in[w] = true;
                incumbent_ = std::move(*witness);
            } else {
                fixed.back().second = 1;
            }
        }
    }

    // Keep the pool bounded: drop the loosest cut rows at the current point
    // (their dedup keys are released so they can come back if needed).
    void maybe_evict(const std::vector<double>& x) {
        constexpr std::size_t soft = 700, target = 500;
        if (pool_.size() <= soft) return;
        std::vector<std::pair<double, std::size_t>> order;
        order.reserve(pool_.size());
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            double lhs = 0;
            for (auto& [m, v] : pool_[i].terms) lhs += v.get_d() * x[m];
            order.emplace_back(pool_[i].rhs.get_d() - lhs, i);
        }
        std::sort(order.begin(), order.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<bool> drop(pool_.size(), false);
        std::size_t need = pool_.size() - target;
        for (auto& [slack, i] : order) {
            if (need == 0 || slack < 1e-7) break;
            drop[i] = true;
            --need;
            if (pool_[i].kind == 1) uc_seen_.erase(pool_[i].key);
            else if (pool_[i].kind == 2) fc_seen_.erase(pool_[i].key);
        }
        std::vector<SRow> keep;
        keep.reserve(pool_.size());
        for (std::size_t i = 0; i < pool_.size(); ++i)
            if (!drop[i]) keep.push_back(std::move(pool_[i]));
        pool_ = std::move(keep);
    }

    void add_nogood(const std::vector<Mask>& b) {
        SRow r;
        r.name = "ng:" + std::to_string(nogoods_++);
        std::vector<bool> in(N_, false);
        for (Mask m : b) in[m] = true;
        for (std::size_t s = 0; s < N_; ++s)
            r.terms.emplace_back(static_cast<Mask>(s), Int(in[s] ? 1 : -1));
        r.rel = Rel::le;
        r.rhs = static_cast<long>(b.size()) - 1;
        pool_.push_back(std::move(r));
    }

    NodeResult process(const Node& node) {
        for (;;) {
            std::vector<SRow> rows = node_rows(node);
            FloatLp lp = solve_float(rows);
            if (lp.status == detail::SimplexStatus::infeasible ||
                lp.status == detail::SimplexStatus::iteration_limit) {
                std::vector<Rat> exact_point;
                if (confirm_infeasible(rows, lp.duals, node, &exact_point)) return {};
                // float lied; continue from the exact point
                lp.x.assign(N_, 0.0);
                for (std::size_t s = 0; s < N_; ++s) lp.x[s] = exact_point[s].get_d();
            }
            if (separate(lp.x) > 0) {
                maybe_evict(lp.x);
                continue;
            }
            // integral?
            constexpr double ieps = 1e-6;
            std::optional<Mask> frac;
            double best = 1.0;
            for (std::size_t s = 0; s < N_; ++s) {
                double d = std::abs(lp.x[s] - 0.5);
                if (lp.x[s] > ieps && lp.x[s] < 1.0 - ieps && d < best - 1e-12) {
                    best = d;
                    frac = static_cast<Mask>(s);
                }
            }
            if (!frac) {
                std::vector<Mask> members;
                for (std::size_t s = 0; s < N_; ++s)
                    if (lp.x[s] > 0.5) members.push_back(static_cast<Mask>(s));
                bool accepted = false;
                if (handle_candidate(members, &accepted)) continue;
                if (accepted) return {std::nullopt, true};
                return {};
            }
            return {frac, false};
        }
    }

    const SeparationModel& model_;
    SepOptions opts_;
    std::size_t N_;
    std::vector<SRow> base_rows_;
    std::vector<SRow> pool_;
    std::set<std::uint64_t> uc_seen_, fc_seen_;
    Int wv_rhs_;
    long nodes_ = 0;
    long nogoods_ = 0;
    std::optional<SetFamily> incumbent_;
    Int incumbent_value_ = 0;
    std::vector<BnbLeaf> leaves_;
};

}  // namespace

SeparationOutcome solve_separation(const SeparationModel& model, const SepOptions& opts) {
    Solver solver(model, opts);
    return solver.run();
}

}  // namespace frankl
