#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "frankl/rational.hpp"

namespace frankl::detail {

// One dictionary simplex, instantiated with exact rationals (Bland's rule,
// certificate-grade) and with doubles (Dantzig + tolerances, presolve-grade).

template <class T>
struct lp_scalar;

template <>
struct lp_scalar<Rat> {
    static constexpr bool exact = true;
    static int sign(const Rat& v) { return sgn(v); }
    static bool is_zero(const Rat& v) { return sgn(v) == 0; }
};

template <>
struct lp_scalar<double> {
    static constexpr bool exact = false;
    static constexpr double eps = 1e-9;
    static int sign(double v) { return v > eps ? 1 : (v < -eps ? -1 : 0); }
    static bool is_zero(double v) { return v <= eps && v >= -eps; }
};

enum class SimplexStatus { optimal, infeasible, unbounded, iteration_limit };

// Rows come in oriented so that rhs >= 0; relation per row after orientation.
// Column layout: [0, n) structural, then a slack (le) or surplus (ge) per
// inequality row, then an artificial per ge/eq row. le-rows start slack-basic,
// so phase 1 only has to drive the ge/eq artificials to zero.
template <class T>
class Tableau {
  public:
    enum class RowKind : std::uint8_t { le, ge, eq };

    Tableau(std::vector<std::vector<T>> coeffs, std::vector<RowKind> kinds,
            std::vector<T> rhs, std::size_t nvars)
        : n_(nvars), m_(coeffs.size()), kinds_(std::move(kinds)) {
        slack_col_.assign(m_, -1);
        art_col_.assign(m_, -1);
        std::size_t ncols = n_;
        for (std::size_t i = 0; i < m_; ++i)
            if (kinds_[i] != RowKind::eq) slack_col_[i] = static_cast<int>(ncols++);
        for (std::size_t i = 0; i < m_; ++i)
            if (kinds_[i] != RowKind::le) art_col_[i] = static_cast<int>(ncols++);
        ncols_ = ncols;
        is_art_.assign(ncols_, false);
        for (std::size_t i = 0; i < m_; ++i)
            if (art_col_[i] >= 0) is_art_[art_col_[i]] = true;
        tab_.assign(m_, std::vector<T>(ncols_ + 1, T(0)));
        basis_.assign(m_, -1);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) tab_[i][j] = coeffs[i][j];
            tab_[i][ncols_] = rhs[i];
            if (slack_col_[i] >= 0)
                tab_[i][slack_col_[i]] = (kinds_[i] == RowKind::le) ? T(1) : T(-1);
            if (art_col_[i] >= 0) {
                tab_[i][art_col_[i]] = T(1);
                basis_[i] = art_col_[i];
            } else {
                basis_[i] = slack_col_[i];
            }
        }
    }

    // Phase 1: minimize the sum of artificials.
    SimplexStatus phase1(long max_pivots) {
        obj_.assign(ncols_ + 1, T(0));
        // z-row (z_j - c_j) for cost 1 on artificials: sum of artificial-basic
        // rows, minus 1 on each artificial column.
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && art_col_[i] == basis_[i])
                for (std::size_t j = 0; j <= ncols_; ++j) obj_[j] += tab_[i][j];
        for (std::size_t i = 0; i < m_; ++i)
            if (art_col_[i] >= 0) obj_[art_col_[i]] -= T(1);
        SimplexStatus st = iterate(max_pivots);
        if (st == SimplexStatus::optimal && lp_scalar<T>::sign(obj_[ncols_]) > 0)
            return SimplexStatus::infeasible;
        return st;
    }

    // Phase 2 after a zero-value phase 1: minimize cost over structurals.
    SimplexStatus phase2(const std::vector<T>& cost, long max_pivots) {
        purge_artificials();
        obj_.assign(ncols_ + 1, T(0));
        for (std::size_t j = 0; j < n_; ++j) obj_[j] = -cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
            int b = basis_[i];
            if (b >= 0 && !lp_scalar<T>::is_zero(obj_[b])) {
                T f = obj_[b];
                for (std::size_t j = 0; j <= ncols_; ++j)
                    if (!lp_scalar<T>::is_zero(tab_[i][j])) obj_[j] -= f * tab_[i][j];
                obj_[b] = T(0);
            }
        }
        return iterate(max_pivots);
    }

    // Current objective value (phase 1: sum of artificials; phase 2: cost).
    const T& objective_value() const { return obj_[ncols_]; }

    // Simplex multipliers pi per row for the current objective, read off
    // the z-row: pi_i = c_art + obj_[art_i] on rows with an artificial,
    // obj_[slack_i] on le-rows (slack cost 0).
    std::vector<T> row_multipliers(bool phase1_costs) const {
        std::vector<T> pi(m_, T(0));
        for (std::size_t i = 0; i < m_; ++i) {
            if (art_col_[i] >= 0)
                pi[i] = (phase1_costs ? T(1) : T(0)) + obj_[art_col_[i]];
            else
                pi[i] = obj_[slack_col_[i]];
        }
        return pi;
    }

    std::vector<T> structural_point() const {
        std::vector<T> x(n_, T(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_)
                x[basis_[i]] = tab_[i][ncols_];
        return x;
    }

    std::size_t pivots() const { return pivot_count_; }

  private:
    SimplexStatus iterate(long max_pivots) {
        for (;;) {
            if (max_pivots >= 0 && static_cast<long>(pivot_count_) >= max_pivots)
                return SimplexStatus::iteration_limit;
            int enter = pick_entering();
            if (enter < 0) return SimplexStatus::optimal;
            int leave = pick_leaving(enter);
            if (leave < 0) return SimplexStatus::unbounded;
            pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
        }
    }

    int pick_entering() const {
        if constexpr (lp_scalar<T>::exact) {
            // Bland: smallest eligible index
            for (std::size_t j = 0; j < ncols_; ++j)
                if (!is_art_[j] && lp_scalar<T>::sign(obj_[j]) > 0) return static_cast<int>(j);
            return -1;
        } else {
            // Dantzig, deterministic tie-break on index
            int best = -1;
            T bestval = lp_scalar<T>::eps;
            for (std::size_t j = 0; j < ncols_; ++j)
                if (!is_art_[j] && obj_[j] > bestval) {
                    bestval = obj_[j];
                    best = static_cast<int>(j);
                }
            return best;
        }
    }

    int pick_leaving(int enter) const {
        int best = -1;
        for (std::size_t i = 0; i < m_; ++i) {
            if (lp_scalar<T>::sign(tab_[i][enter]) <= 0) continue;
            if (best < 0) {
                best = static_cast<int>(i);
                continue;
            }
            const T lhs = tab_[i][ncols_] * tab_[best][enter];
            const T rhs = tab_[best][ncols_] * tab_[i][enter];
            if (lhs < rhs || (!(rhs < lhs) && basis_[i] < basis_[best]))
                best = static_cast<int>(i);
        }
        return best;
    }

    // Pivot basic artificials out at value zero so they can never grow in
    // phase 2; a row with no eligible pivot entry is 0 = 0 and stays inert.
    void purge_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < 0 || !is_art_[basis_[i]]) continue;
            for (std::size_t j = 0; j < ncols_; ++j)
                if (!is_art_[j] && !lp_scalar<T>::is_zero(tab_[i][j])) {
                    pivot(i, j);
                    break;
                }
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        ++pivot_count_;
        T p = tab_[row][col];
        if (!(p == T(1))) {
            T inv = T(1) / p;
            for (std::size_t j = 0; j <= ncols_; ++j)
                if (!lp_scalar<T>::is_zero(tab_[row][j])) tab_[row][j] *= inv;
            tab_[row][col] = T(1);
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            T f = tab_[i][col];
            if (lp_scalar<T>::is_zero(f)) continue;
            for (std::size_t j = 0; j <= ncols_; ++j)
                if (!lp_scalar<T>::is_zero(tab_[row][j])) tab_[i][j] -= f * tab_[row][j];
            tab_[i][col] = T(0);
        }
        if (!obj_.empty()) {
            T f = obj_[col];
            if (!lp_scalar<T>::is_zero(f)) {
                for (std::size_t j = 0; j <= ncols_; ++j)
                    if (!lp_scalar<T>::is_zero(tab_[row][j])) obj_[j] -= f * tab_[row][j];
                obj_[col] = T(0);
            }
        }
        basis_[row] = static_cast<int>(col);
    }

    std::size_t n_ = 0, m_ = 0, ncols_ = 0;
    std::vector<RowKind> kinds_;
    std::vector<int> slack_col_, art_col_, basis_;
    std::vector<bool> is_art_;
    std::vector<std::vector<T>> tab_;
    std::vector<T> obj_;
    std::size_t pivot_count_ = 0;
};

}  // namespace frankl::detail
