#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "frankl/driver.hpp"

namespace frankl {

// P([n] \ {j}) uplus A, the family behind the j-th relaxation row.
SetFamily build_bj(const SetFamily& a, int j);

enum class RelaxKind { morris_z, vaughan_eq, smaller_g };

struct RelaxationSystem {
    RelaxKind kind = RelaxKind::morris_z;
    LinearSystem rows;
    // per row (j, the family the row was computed from)
    std::vector<std::pair<int, SetFamily>> provenance;
};

// z-form rows sum_i (2|B_i| - |B|) z_i >= 0 for B = build_bj(a, j), plus
// sum z >= 1 and z >= 0.
RelaxationSystem morris_system(const SetFamily& a);

// Same rows over G_j = build_bj(a, j) \ P([n] \ {j}).
RelaxationSystem smaller_G_system(const SetFamily& a);

// Equations sum_i y_i |B_i| = |B|/2 (stored doubled: 2|B_i| y = |B|) plus
// sum y <= 1 and y >= 0.
RelaxationSystem vaughan_system(const SetFamily& a);

struct MorrisFeasible {
    std::vector<Int> point;  // integer point, lcm-scaled from the LP solution
};
struct RelaxEmpty {
    LinearSystem system;
    std::map<std::string, Rat> duals;
};
using MorrisOutcome = std::variant<MorrisFeasible, RelaxEmpty>;

MorrisOutcome morris_Z_nonempty(const SetFamily& a);

struct VaughanSolution {
    std::vector<Rat> point;
    Rat l1;
    bool strictly_below_one = false;
};
using VaughanOutcome = std::variant<VaughanSolution, RelaxEmpty>;

VaughanOutcome vaughan_solve(const SetFamily& a);

struct Perturbation {
    Mask removed = 0;  // A in S
    int element = 0;   // i added to A
    ClassificationCertificate verdict;
};

struct RegularityReport {
    SetFamily generator;
    std::vector<Perturbation> perturbations;          // (A, i) order
    std::vector<std::pair<Mask, int>> skipped;        // i in A: no-ops
    bool regular = false;
    std::optional<std::pair<Mask, int>> witness;      // first FC perturbation
};

// Def-4.1 check: S must be the minimal generator of a Non-FC closure; every
// single-element enlargement of a member is re-classified. jobs > 1 runs
// perturbations in parallel; the report order is deterministic either way.
RegularityReport regularity_check(const SetFamily& s, const ClassifyOptions& opts = {},
                                  int jobs = 1);

}  // namespace frankl
