#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frankl/driver.hpp"

namespace frankl {

// A printed Poonen row as it appears in a certificate; coefficients are
// accepted up to a positive scale of the recomputed row, and a dominated
// right-hand side is reported rather than rejected.
struct PrintedRow {
    std::vector<Rat> coeffs;
    Rat rhs;
};

// Replays a Non-FC certificate using only family arithmetic and the Farkas
// checker: every witness must be union-closed and closed under uplus with A;
// printed rows, when given, are compared against the recomputed ones; the
// duals must close the assembled system.
VerificationReport verify_nonfc(const SetFamily& a, const std::vector<SetFamily>& witnesses,
                                const std::map<std::string, Rat>& duals,
                                const std::optional<std::vector<PrintedRow>>& printed_rows = {},
                                MasterMode form = MasterMode::lp_normalized);

// Replays an FC certificate: the leaves must cover the branch tree, every
// row of every leaf system must be a recomputable model row, a valid cut or
// a branch fixing, and each leaf's duals must close its system.
VerificationReport verify_fc(const SetFamily& a, const WeightVector& c, const BnbProof& proof);

VerificationReport verify_certificate(const ClassificationCertificate& cert);

enum class Verdict { fc, non_fc };

// Exhaustive oracle for n <= 4: enumerates every subfamily of P([n]),
// keeps the UC ones closed under uplus with a, and solves the complete
// Poonen system exactly.
Verdict brute_force_classify(const SetFamily& a);

// Max of the separation objective over the same enumeration; nullopt when no
// violating family exists.
std::optional<Int> brute_force_max_violation(const SetFamily& a, const WeightVector& c);

}  // namespace frankl
