#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "frankl/rational.hpp"

namespace frankl {

enum class Rel { eq, le, ge };

inline const char* rel_str(Rel r) {
    switch (r) {
        case Rel::eq: return "=";
        case Rel::le: return "<=";
        default: return ">=";
    }
}

struct LinearConstraint {
    std::string name;
    std::vector<Rat> coeffs;  // dense, length = variable count
    Rel rel = Rel::le;
    Rat rhs = 0;
};

struct LinearSystem {
    std::vector<std::string> vars;
    std::vector<bool> nonneg;  // per variable; false = free
    std::vector<LinearConstraint> rows;

    std::size_t num_vars() const { return vars.size(); }
    int row_index(const std::string& name) const;  // -1 if absent
    void add_row(std::string name, std::vector<Rat> coeffs, Rel rel, Rat rhs);
};

struct LpFeasible {
    std::vector<Rat> point;
};

struct LpInfeasible {
    std::map<std::string, Rat> duals;  // row name -> Farkas multiplier
};

using LpOutcome = std::variant<LpFeasible, LpInfeasible>;

struct CheckItem {
    std::string what;
    bool ok = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckItem> items;
    std::vector<std::string> notes;  // non-fatal observations (e.g. rhs deltas)

    bool ok() const {
        for (const auto& it : items)
            if (!it.ok) return false;
        return true;
    }
    void check(const std::string& what, bool good, const std::string& detail = "") {
        items.push_back({what, good, detail});
    }
    void note(const std::string& text) { notes.push_back(text); }
    void absorb(const VerificationReport& other, const std::string& prefix);
    std::string to_string() const;
};

}  // namespace frankl
