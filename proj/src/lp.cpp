#include "frankl/lp.hpp"

#include <algorithm>
#include <cassert>

#include "frankl/family.hpp"
#include "frankl/simplex.hpp"

namespace frankl {

int LinearSystem::row_index(const std::string& name) const {
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].name == name) return static_cast<int>(i);
    return -1;
}

void LinearSystem::add_row(std::string name, std::vector<Rat> coeffs, Rel rel, Rat rhs) {
    if (coeffs.size() != vars.size())
        throw error("row '" + name + "': coefficient count does not match variables");
    rows.push_back({std::move(name), std::move(coeffs), rel, std::move(rhs)});
}

void VerificationReport::absorb(const VerificationReport& other, const std::string& prefix) {
    for (const auto& it : other.items) items.push_back({prefix + it.what, it.ok, it.detail});
    for (const auto& n : other.notes) notes.push_back(prefix + n);
}

std::string VerificationReport::to_string() const {
    std::string out;
    for (const auto& it : items) {
        out += (it.ok ? "PASS  " : "FAIL  ") + it.what;
        if (!it.detail.empty()) out += "  [" + it.detail + "]";
        out += "\n";
    }
    for (const auto& n : notes) out += "note: " + n + "\n";
    return out;
}

namespace {

using detail::SimplexStatus;
using Tab = detail::Tableau<Rat>;

struct Converted {
    Tab tableau;
    std::vector<int> sign;       // row orientation
    std::vector<int> var_col;    // variable -> first structural column
    std::vector<bool> split;     // variable was free and got split
    std::size_t ncols;
};

Converted convert(const LinearSystem& sys) {
    const std::size_t nv = sys.vars.size();
    if (sys.nonneg.size() != nv) throw error("LinearSystem: nonneg flags do not match variables");
    std::vector<int> var_col(nv);
    std::vector<bool> split(nv, false);
    std::size_t ncols = 0;
    for (std::size_t k = 0; k < nv; ++k) {
        var_col[k] = static_cast<int>(ncols);
        split[k] = !sys.nonneg[k];
        ncols += split[k] ? 2 : 1;
    }
    std::vector<std::vector<Rat>> coeffs;
    std::vector<Tab::RowKind> kinds;
    std::vector<Rat> rhs;
    std::vector<int> sign;
    coeffs.reserve(sys.rows.size());
    for (const auto& row : sys.rows) {
        if (row.coeffs.size() != nv)
            throw error("row '" + row.name + "': coefficient count does not match variables");
        int sg = sgn(row.rhs) < 0 ? -1 : 1;
        std::vector<Rat> c(ncols, Rat(0));
        for (std::size_t k = 0; k < nv; ++k) {
            if (sgn(row.coeffs[k]) == 0) continue;
            Rat v = row.coeffs[k] * sg;
            c[var_col[k]] = v;
            if (split[k]) c[var_col[k] + 1] = -v;
        }
        Rel r = row.rel;
        if (sg < 0) {
            if (r == Rel::le) r = Rel::ge;
            else if (r == Rel::ge) r = Rel::le;
        }
        kinds.push_back(r == Rel::le   ? Tab::RowKind::le
                        : r == Rel::ge ? Tab::RowKind::ge
                                       : Tab::RowKind::eq);
        coeffs.push_back(std::move(c));
        rhs.push_back(row.rhs * sg);
        sign.push_back(sg);
    }
    return Converted{Tab(std::move(coeffs), kinds, std::move(rhs), ncols),
                     std::move(sign), std::move(var_col), std::move(split), ncols};
}

std::vector<Rat> recover_point(const Converted& cv, const LinearSystem& sys) {
    auto raw = cv.tableau.structural_point();
    std::vector<Rat> x(sys.vars.size());
    for (std::size_t k = 0; k < sys.vars.size(); ++k) {
        x[k] = raw[cv.var_col[k]];
        if (cv.split[k]) x[k] -= raw[cv.var_col[k] + 1];
    }
    return x;
}

std::map<std::string, Rat> recover_duals(const Converted& cv, const LinearSystem& sys) {
    auto pi = cv.tableau.row_multipliers(/*phase1_costs=*/true);
    std::map<std::string, Rat> duals;
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        Rat y = pi[i] * cv.sign[i];
        if (sgn(y) != 0) duals[sys.rows[i].name] = y;
    }
    return normalize_duals(duals);
}

void assert_point_satisfies(const LinearSystem& sys, const std::vector<Rat>& x) {
    for (const auto& row : sys.rows) {
        Rat lhs = 0;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (sgn(row.coeffs[k]) != 0) lhs += row.coeffs[k] * x[k];
        bool ok = row.rel == Rel::eq   ? lhs == row.rhs
                  : row.rel == Rel::le ? lhs <= row.rhs
                                       : lhs >= row.rhs;
        if (!ok) throw error("internal: simplex point violates row '" + row.name + "'");
    }
}

}  // namespace

LpOutcome solve_feasibility(const LinearSystem& sys) {
    Converted cv = convert(sys);
    SimplexStatus st = cv.tableau.phase1(-1);
    if (st == SimplexStatus::optimal) {
        auto x = recover_point(cv, sys);
        assert_point_satisfies(sys, x);
        return LpFeasible{std::move(x)};
    }
    if (st != SimplexStatus::infeasible) throw error("internal: phase-1 simplex failed");
    auto duals = recover_duals(cv, sys);
    auto rep = verify_farkas(sys, duals);
    if (!rep.ok()) throw error("internal: extracted Farkas duals failed verification:\n" + rep.to_string());
    return LpInfeasible{std::move(duals)};
}

MinimizeResult minimize(const LinearSystem& sys, const std::vector<Rat>& cost) {
    if (cost.size() != sys.vars.size()) throw error("minimize: cost dimension mismatch");
    Converted cv = convert(sys);
    MinimizeResult out;
    SimplexStatus st = cv.tableau.phase1(-1);
    if (st == SimplexStatus::infeasible) {
        out.feasible = false;
        out.duals = recover_duals(cv, sys);
        return out;
    }
    if (st != SimplexStatus::optimal) throw error("internal: phase-1 simplex failed");
    std::vector<Rat> c2(cv.ncols, Rat(0));
    for (std::size_t k = 0; k < sys.vars.size(); ++k) {
        c2[cv.var_col[k]] = cost[k];
        if (cv.split[k]) c2[cv.var_col[k] + 1] = -cost[k];
    }
    st = cv.tableau.phase2(c2, -1);
    out.feasible = true;
    if (st == SimplexStatus::unbounded) {
        out.unbounded = true;
        return out;
    }
    if (st != SimplexStatus::optimal) throw error("internal: phase-2 simplex failed");
    out.point = recover_point(cv, sys);
    assert_point_satisfies(sys, out.point);
    out.value = 0;
    for (std::size_t k = 0; k < cost.size(); ++k) out.value += cost[k] * out.point[k];
    return out;
}

VerificationReport verify_farkas(const LinearSystem& sys,
                                 const std::map<std::string, Rat>& duals) {
    VerificationReport rep;
    std::vector<Rat> y(sys.rows.size(), Rat(0));
    for (const auto& [name, val] : duals) {
        int idx = sys.row_index(name);
        if (idx < 0) throw error("verify_farkas: unknown row name '" + name + "'");
        y[idx] = val;
    }
    for (const auto& row : sys.rows)
        if (row.coeffs.size() != sys.vars.size())
            throw error("verify_farkas: dimension mismatch in row '" + row.name + "'");

    bool signs_ok = true;
    std::string bad;
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        if (sys.rows[i].rel == Rel::le && sgn(y[i]) > 0) {
            signs_ok = false;
            bad = sys.rows[i].name + " (<= row needs dual <= 0)";
            break;
        }
        if (sys.rows[i].rel == Rel::ge && sgn(y[i]) < 0) {
            signs_ok = false;
            bad = sys.rows[i].name + " (>= row needs dual >= 0)";
            break;
        }
    }
    rep.check("dual signs match row relations", signs_ok, bad);

    Rat byp = 0;
    for (std::size_t i = 0; i < sys.rows.size(); ++i) byp += y[i] * sys.rows[i].rhs;
    rep.check("b^T y > 0", sgn(byp) > 0, "b^T y = " + to_string(byp));

    bool cols_ok = true;
    std::string col_bad;
    for (std::size_t k = 0; k < sys.vars.size(); ++k) {
        Rat s = 0;
        for (std::size_t i = 0; i < sys.rows.size(); ++i)
            if (sgn(y[i]) != 0 && sgn(sys.rows[i].coeffs[k]) != 0)
                s += y[i] * sys.rows[i].coeffs[k];
        bool ok = sys.nonneg[k] ? sgn(s) <= 0 : sgn(s) == 0;
        if (!ok) {
            cols_ok = false;
            col_bad = "column " + sys.vars[k] + ": A^T y = " + to_string(s);
            break;
        }
    }
    rep.check("A^T y <= 0 componentwise", cols_ok, col_bad);
    return rep;
}

std::map<std::string, Rat> normalize_duals(const std::map<std::string, Rat>& duals) {
    Int g = 1;
    for (const auto& [_, v] : duals)
        if (sgn(v) != 0) mpz_lcm(g.get_mpz_t(), g.get_mpz_t(), v.get_den().get_mpz_t());
    Int d = 0;
    for (const auto& [_, v] : duals)
        if (sgn(v) != 0) {
            Rat scaled = v * Rat(g);
            mpz_gcd(d.get_mpz_t(), d.get_mpz_t(), scaled.get_num().get_mpz_t());
        }
    if (sgn(d) == 0) return duals;
    std::map<std::string, Rat> out;
    Rat f = Rat(g) / Rat(d);
    for (const auto& [name, v] : duals)
        if (sgn(v) != 0) out[name] = v * f;
    return out;
}

}  // namespace frankl
