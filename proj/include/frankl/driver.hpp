#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "frankl/separation.hpp"

namespace frankl {

enum class MasterMode { lp_normalized, ip_l1_min };

struct FcCertificate {
    SetFamily family;  // the classified family, empty set adjoined
    WeightVector weights;
    BnbProof proof;
};

struct NonFcCertificate {
    SetFamily family;
    MasterMode form = MasterMode::lp_normalized;  // y-form or z-form rows
    std::vector<SetFamily> witnesses;             // nonzero-dual rows only
    LinearSystem system;                          // normalization + one row per witness
    std::map<std::string, Rat> duals;
};

using ClassificationCertificate = std::variant<FcCertificate, NonFcCertificate>;

inline bool is_fc(const ClassificationCertificate& c) {
    return std::holds_alternative<FcCertificate>(c);
}

struct ClassifyOptions {
    MasterMode master_mode = MasterMode::lp_normalized;
    SepMode sep_mode = SepMode::max_violation;
    int iteration_cap = 0;  // 0 => 4n
    long node_limit = 1'000'000;
    std::optional<Mask> branch_first_on;
};

struct IterationRecord {
    WeightVector c;
    bool violating = false;
    std::optional<SetFamily> family;
};

// Master problem state for the cutting-plane loop: the accumulated Poonen
// rows (in y- or z-form) and the per-iteration history.
struct MasterProblem {
    MasterMode mode = MasterMode::lp_normalized;
    std::vector<SetFamily> witnesses;
    std::vector<IterationRecord> history;
};

// Row with coefficients frequencies(B) and right-hand side |B|/2.
LinearConstraint poonen_row(const SetFamily& b);

// The cutting-plane classification loop. The input must be union-closed and
// cover its ground set; the empty set is adjoined internally when absent.
ClassificationCertificate classify(const SetFamily& a, const ClassifyOptions& opts = {});

struct WeightRefutation {
    SetFamily violating;
    Int objective;
};

// One separation run with fixed weights: Empty yields an FC certificate,
// a violating family refutes the weights.
std::variant<FcCertificate, WeightRefutation> certify_weights(const SetFamily& a,
                                                              const WeightVector& c,
                                                              const ClassifyOptions& opts = {});

}  // namespace frankl
