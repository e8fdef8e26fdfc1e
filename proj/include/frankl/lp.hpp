#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frankl/linear_system.hpp"

namespace frankl {

// Exact LP feasibility: a rational point satisfying every row exactly, or
// Farkas duals proving infeasibility. Deterministic (Bland's rule).
LpOutcome solve_feasibility(const LinearSystem& sys);

struct MinimizeResult {
    bool feasible = false;
    bool unbounded = false;
    std::vector<Rat> point;               // when feasible and bounded
    Rat value = 0;                        // min of cost over the system
    std::map<std::string, Rat> duals;     // when infeasible
};

// Exact min cost^T x over the system (phase 1 + phase 2).
MinimizeResult minimize(const LinearSystem& sys, const std::vector<Rat>& cost);

// Checks the Farkas conditions exactly, per the standard partition of rows
// into equalities (free duals), <= rows (duals <= 0) and >= rows (duals >= 0):
//   sum_i y_i b_i > 0,  sum_i y_i A_i <= 0 componentwise (= 0 on free vars).
// Throws on an unknown row name or coefficient dimension mismatch.
VerificationReport verify_farkas(const LinearSystem& sys,
                                 const std::map<std::string, Rat>& duals);

// Scales a dual vector to the primitive integer multiple (positive scale),
// purely for readable output; Farkas validity is scale-invariant.
std::map<std::string, Rat> normalize_duals(const std::map<std::string, Rat>& duals);

}  // namespace frankl
