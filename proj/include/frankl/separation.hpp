#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "frankl/family.hpp"
#include "frankl/linear_system.hpp"

namespace frankl {

struct undecided_error : error {
    using error::error;
};

// Nonnegative integer weights per ground element, sum >= 1.
struct WeightVector {
    std::vector<Int> entries;

    Int sum() const {
        Int s = 0;
        for (const auto& e : entries) s += e;
        return s;
    }
};

// One step of an FC-chain: from -> to, justified either by an A-member
// (a | from == to, a fixed-set inequality) or by a set s with
// from | s == to (a union-closure inequality, s must come from a closure).
struct ChainLink {
    Mask from = 0, to = 0;
    bool fs = true;
    Mask witness = 0;
};

struct FCChain {
    Mask source = 0, target = 0;
    std::vector<ChainLink> links;
};

struct FcCut {
    Mask t = 0, u = 0, tu = 0, f = 0;  // x_t + x_u - x_tu - x_f <= 0
};

struct FcChainCut {
    std::vector<Mask> pos, neg;  // sum pos - sum neg <= 0
    std::vector<FCChain> chains;
};

struct HallRejection {
    std::vector<Mask> violating_subset;  // T with |T| > |U(T)|
};

// Per-leaf replayable evidence: the branch fixings, any chain cuts whose
// rows appear in the system, the (small) infeasible subsystem and its
// exact Farkas duals.
struct BnbLeaf {
    std::vector<std::pair<Mask, int>> fixings;
    std::vector<FcChainCut> chain_cuts;
    LinearSystem system;
    std::map<std::string, Rat> duals;
};

struct BnbProof {
    int n = 0;
    std::vector<BnbLeaf> leaves;
};

struct Violating {
    SetFamily family;
    Int objective;  // sum over B of (sum c - 2 sum_{i in S} c_i), >= 1
};

struct EmptySep {
    BnbProof proof;
};

using SeparationOutcome = std::variant<Violating, EmptySep>;

enum class SepMode { feasibility, max_violation };

// The separation problem for (A, c): binary x_S per S in P([n]) subject to
// union-closure rows, fixed-set rows x_S <= x_{A u S}, the weight-vector row
// sum_S w_S x_S <= -1 with w_S = sum_{i in S} c_i - sum_{i not in S} c_i,
// and 0 <= x <= 1. FS rows are materialized per (S, A) pair; UC rows are
// generated lazily during the solve.
class SeparationModel {
  public:
    SeparationModel(SetFamily a, WeightVector c);

    const SetFamily& family() const { return a_; }
    const WeightVector& weights() const { return c_; }
    int n() const { return a_.n(); }
    std::size_t num_vars() const { return std::size_t{1} << n(); }
    const Int& weight_of(Mask s) const { return w_[s]; }
    const std::vector<Int>& wv_coeffs() const { return w_; }

    // Every (S, A) pair with A u S != S, as the model materializes them.
    std::size_t fs_pair_count() const { return fs_pairs_; }
    // Deduplicated implication edges (S, A u S), transitively reduced.
    const std::vector<std::pair<Mask, Mask>>& fs_edges() const { return fs_edges_; }

  private:
    SetFamily a_;
    WeightVector c_;
    std::vector<Int> w_;
    std::size_t fs_pairs_ = 0;
    std::vector<std::pair<Mask, Mask>> fs_edges_;
};

SeparationModel build_model(const SetFamily& a, const WeightVector& c);

// UC rows and FC cuts depend only on the family, not on the weights, so a
// driver solving many separations over one family can carry them across calls.
struct SepCutCache;
std::shared_ptr<SepCutCache> make_cut_cache();

struct SepOptions {
    SepMode mode = SepMode::max_violation;
    long node_limit = 1'000'000;
    std::optional<Mask> branch_first_on;
    // Resolve ties at the optimum to the lexicographically smallest incidence
    // vector. The cutting-plane driver turns this off: any maximally violated
    // row serves, and the polishing pass costs more than the solve.
    bool lex_tie_break = true;
    std::shared_ptr<SepCutCache> cut_cache;
};

SeparationOutcome solve_separation(const SeparationModel& model, const SepOptions& opts = {});

// Exhaustive FC-cut emission (Prop-3.2 pattern rows), deterministic order,
// capped. Degenerate pairs (t == u, or t|u == f) are skipped.
std::vector<FcCut> generate_fc_cuts(const SeparationModel& model, std::size_t cap = 100000);

// A link chain is valid when every FS link has a in A with a | from == to and
// every UC link has s in closure_with(s_family, A) with from | s == to.
bool verify_fc_chain(const SetFamily& a, const SetFamily& s_family, const FCChain& chain);

// Validates the Hall condition |T| <= |U(T)| for all T of pos (UC links count
// for a given T only if their witness lies in closure_with(T, A)) and emits
// the cut, or rejects with a violating subset. pos and neg must be disjoint,
// |pos| <= 12.
std::variant<FcChainCut, HallRejection> fc_chain_cut(const SetFamily& a,
                                                     const std::vector<Mask>& pos,
                                                     const std::vector<Mask>& neg,
                                                     const std::vector<FCChain>& chains);

// Bounded-depth chain search (depth <= 3) used when chains are not supplied.
std::vector<FCChain> find_fc_chains(const SetFamily& a, const std::vector<Mask>& pos,
                                    const std::vector<Mask>& neg, int max_depth = 3);

}  // namespace frankl
