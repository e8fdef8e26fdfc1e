#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace frankl {

// A subset of the ground set [n], bit-encoded: element i <-> bit (i-1), LSB
// first. n is capped at 16 so a mask always fits a machine word.
using Mask = std::uint32_t;

constexpr int kMaxGround = 16;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroundSet {
    int n = 0;
    std::vector<std::string> labels;  // empty => "1".."n"

    GroundSet() = default;
    explicit GroundSet(int n_, std::vector<std::string> labels_ = {});

    std::string label(int element) const;  // element is 1-based
    bool operator==(const GroundSet& o) const { return n == o.n; }
};

enum class UcStatus : std::int8_t { unknown = 0, yes = 1, no = 2 };

// An ordered, duplicate-free family of bit-encoded sets over a fixed ground
// set, sorted ascending by mask so equality is structural.
class SetFamily {
  public:
    SetFamily() = default;
    // Sorts and rejects duplicates / masks outside the ground set.
    SetFamily(GroundSet ground, std::vector<Mask> sets);

    const GroundSet& ground() const { return ground_; }
    int n() const { return ground_.n; }
    const std::vector<Mask>& sets() const { return sets_; }
    std::size_t size() const { return sets_.size(); }
    bool empty() const { return sets_.empty(); }
    bool contains(Mask m) const;
    Mask union_of_all() const;

    UcStatus uc_status() const { return uc_cache_.load(std::memory_order_relaxed); }
    void set_uc_status(UcStatus s) const { uc_cache_.store(s, std::memory_order_relaxed); }

    bool operator==(const SetFamily& o) const {
        return ground_ == o.ground_ && sets_ == o.sets_;
    }

  private:
    GroundSet ground_;
    std::vector<Mask> sets_;
    mutable std::atomic<UcStatus> uc_cache_{UcStatus::unknown};

  public:
    SetFamily(const SetFamily& o)
        : ground_(o.ground_), sets_(o.sets_), uc_cache_(o.uc_status()) {}
    SetFamily& operator=(const SetFamily& o) {
        ground_ = o.ground_;
        sets_ = o.sets_;
        uc_cache_.store(o.uc_status(), std::memory_order_relaxed);
        return *this;
    }
    SetFamily(SetFamily&& o) noexcept
        : ground_(std::move(o.ground_)), sets_(std::move(o.sets_)), uc_cache_(o.uc_status()) {}
    SetFamily& operator=(SetFamily&& o) noexcept {
        ground_ = std::move(o.ground_);
        sets_ = std::move(o.sets_);
        uc_cache_.store(o.uc_status(), std::memory_order_relaxed);
        return *this;
    }
};

// counts[i-1] = number of members containing element i.
using FrequencyVector = std::vector<int>;

bool is_union_closed(const SetFamily& f);

// {a | b : a in A, b in B}, deduplicated and sorted. Ground sets must match.
SetFamily uplus(const SetFamily& a, const SetFamily& b);

// Smallest UC family containing s (closure under pairwise unions).
SetFamily union_closure(const SetFamily& s);

// Smallest UC family F >= s with F uplus a = F. a must be union-closed.
SetFamily closure_with(const SetFamily& s, const SetFamily& a);

FrequencyVector frequencies(const SetFamily& f);

// The join-irreducible members of a UC family: union_closure(result) == f and
// no member can be dropped. The empty set, when present, always belongs.
SetFamily minimal_generator(const SetFamily& f);

SetFamily drop_empty(const SetFamily& a);
SetFamily add_empty(const SetFamily& a);

// The appendix tables index sets by a column number j where element i lies in
// the set iff bit (n-i) of j is 0 (column 0 = full set, column 2^n-1 = empty
// set). These two bridge that convention with the native LSB-first masks.
Mask paper_column_to_mask(unsigned column, int n);
unsigned mask_to_paper_column(Mask m, int n);

std::string set_to_string(Mask m, const GroundSet& g);
std::string family_to_string(const SetFamily& f);

SetFamily make_family(int n, const std::vector<std::vector<int>>& sets);
Mask mask_of(const std::vector<int>& elements);

}  // namespace frankl
