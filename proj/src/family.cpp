#include "frankl/family.hpp"

#include <algorithm>
#include <numeric>

namespace frankl {

GroundSet::GroundSet(int n_, std::vector<std::string> labels_)
    : n(n_), labels(std::move(labels_)) {
    if (n < 1 || n > kMaxGround)
        throw error("ground set size must be in [1, " + std::to_string(kMaxGround) +
                    "], got " + std::to_string(n));
    if (!labels.empty()) {
        if (static_cast<int>(labels.size()) != n)
            throw error("label count does not match ground size");
        auto copy = labels;
        std::sort(copy.begin(), copy.end());
        if (std::adjacent_find(copy.begin(), copy.end()) != copy.end())
            throw error("labels must be distinct");
    }
}

std::string GroundSet::label(int element) const {
    if (element < 1 || element > n) throw error("element out of range");
    if (labels.empty()) return std::to_string(element);
    return labels[element - 1];
}

SetFamily::SetFamily(GroundSet ground, std::vector<Mask> sets)
    : ground_(std::move(ground)), sets_(std::move(sets)) {
    const Mask full = (ground_.n >= 1) ? static_cast<Mask>((1u << ground_.n) - 1) : 0;
    for (Mask m : sets_)
        if (m & ~full) throw error("set uses elements above the declared ground size");
    std::sort(sets_.begin(), sets_.end());
    if (std::adjacent_find(sets_.begin(), sets_.end()) != sets_.end())
        throw error("duplicate set in family");
}

bool SetFamily::contains(Mask m) const {
    return std::binary_search(sets_.begin(), sets_.end(), m);
}

Mask SetFamily::union_of_all() const {
    Mask u = 0;
    for (Mask m : sets_) u |= m;
    return u;
}

namespace {

// Membership bitmap over P([n]); n <= 16 keeps this at most 64 KiB.
std::vector<bool> bitmap_of(const SetFamily& f) {
    std::vector<bool> in(std::size_t{1} << f.n(), false);
    for (Mask m : f.sets()) in[m] = true;
    return in;
}

}  // namespace

bool is_union_closed(const SetFamily& f) {
    if (f.empty()) throw error("empty family");
    if (f.uc_status() != UcStatus::unknown) return f.uc_status() == UcStatus::yes;
    auto in = bitmap_of(f);
    const auto& s = f.sets();
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (!in[s[i] | s[j]]) {
                f.set_uc_status(UcStatus::no);
                return false;
            }
    f.set_uc_status(UcStatus::yes);
    return true;
}

SetFamily uplus(const SetFamily& a, const SetFamily& b) {
    if (!(a.ground() == b.ground())) throw error("uplus: ground-set mismatch");
    std::vector<bool> seen(std::size_t{1} << a.n(), false);
    std::vector<Mask> out;
    for (Mask x : a.sets())
        for (Mask y : b.sets()) {
            Mask u = x | y;
            if (!seen[u]) {
                seen[u] = true;
                out.push_back(u);
            }
        }
    return SetFamily(a.ground(), std::move(out));
}

SetFamily union_closure(const SetFamily& s) {
    if (s.empty()) throw error("union_closure: empty family");
    std::vector<bool> in(std::size_t{1} << s.n(), false);
    std::vector<Mask> members;
    std::vector<Mask> work;
    for (Mask m : s.sets())
        if (!in[m]) {
            in[m] = true;
            members.push_back(m);
            work.push_back(m);
        }
    while (!work.empty()) {
        Mask x = work.back();
        work.pop_back();
        for (std::size_t i = 0; i < members.size(); ++i) {
            Mask u = x | members[i];
            if (!in[u]) {
                in[u] = true;
                members.push_back(u);
                work.push_back(u);
            }
        }
    }
    SetFamily r(s.ground(), std::move(members));
    r.set_uc_status(UcStatus::yes);
    return r;
}

SetFamily closure_with(const SetFamily& s, const SetFamily& a) {
    if (s.empty()) throw error("closure_with: empty family");
    if (!(s.ground() == a.ground())) throw error("closure_with: ground-set mismatch");
    if (!is_union_closed(a)) throw error("closure_with: second argument is not union-closed");
    std::vector<bool> in(std::size_t{1} << s.n(), false);
    std::vector<Mask> members;
    std::vector<Mask> work;
    auto push = [&](Mask m) {
        if (!in[m]) {
            in[m] = true;
            members.push_back(m);
            work.push_back(m);
        }
    };
    for (Mask m : s.sets()) push(m);
    while (!work.empty()) {
        Mask x = work.back();
        work.pop_back();
        for (std::size_t i = 0; i < members.size(); ++i) push(x | members[i]);
        for (Mask y : a.sets()) push(x | y);
    }
    SetFamily r(s.ground(), std::move(members));
    r.set_uc_status(UcStatus::yes);
    return r;
}

FrequencyVector frequencies(const SetFamily& f) {
    FrequencyVector counts(f.n(), 0);
    for (Mask m : f.sets())
        for (int i = 0; i < f.n(); ++i)
            if (m >> i & 1u) ++counts[i];
    return counts;
}

SetFamily minimal_generator(const SetFamily& f) {
    if (f.empty()) throw error("minimal_generator: empty family");
    if (!is_union_closed(f)) throw error("minimal_generator: family is not union-closed");
    std::vector<Mask> gen;
    for (Mask m : f.sets()) {
        if (m == 0) {
            gen.push_back(m);  // the empty set is never a union of other members
            continue;
        }
        Mask u = 0;
        for (Mask x : f.sets())
            if (x != m && (x & ~m) == 0) u |= x;
        if (u != m) gen.push_back(m);
    }
    return SetFamily(f.ground(), std::move(gen));
}

SetFamily drop_empty(const SetFamily& a) {
    std::vector<Mask> out;
    for (Mask m : a.sets())
        if (m != 0) out.push_back(m);
    return SetFamily(a.ground(), std::move(out));
}

SetFamily add_empty(const SetFamily& a) {
    if (a.contains(0)) return a;
    auto out = a.sets();
    out.push_back(0);
    return SetFamily(a.ground(), std::move(out));
}

Mask paper_column_to_mask(unsigned column, int n) {
    if (n < 1 || n > kMaxGround) throw error("paper_column_to_mask: bad ground size");
    if (column >= (1u << n)) throw error("paper_column_to_mask: column out of range");
    Mask m = 0;
    for (int i = 1; i <= n; ++i)
        if (!(column >> (n - i) & 1u)) m |= 1u << (i - 1);
    return m;
}

unsigned mask_to_paper_column(Mask m, int n) {
    if (n < 1 || n > kMaxGround) throw error("mask_to_paper_column: bad ground size");
    if (m >= (1u << n)) throw error("mask_to_paper_column: mask out of range");
    unsigned j = 0;
    for (int i = 1; i <= n; ++i)
        if (!(m >> (i - 1) & 1u)) j |= 1u << (n - i);
    return j;
}

std::string set_to_string(Mask m, const GroundSet& g) {
    if (m == 0) return "empty";
    std::string out;
    for (int i = 1; i <= g.n; ++i)
        if (m >> (i - 1) & 1u) {
            if (!out.empty()) out += ' ';
            out += g.label(i);
        }
    return out;
}

std::string family_to_string(const SetFamily& f) {
    std::string out = "ground " + std::to_string(f.n()) + "\n";
    for (Mask m : f.sets()) out += set_to_string(m, f.ground()) + "\n";
    return out;
}

Mask mask_of(const std::vector<int>& elements) {
    Mask m = 0;
    for (int e : elements) {
        if (e < 1 || e > kMaxGround) throw error("element out of range");
        m |= 1u << (e - 1);
    }
    return m;
}

SetFamily make_family(int n, const std::vector<std::vector<int>>& sets) {
    std::vector<Mask> masks;
    masks.reserve(sets.size());
    for (const auto& s : sets) masks.push_back(mask_of(s));
    return SetFamily(GroundSet(n), std::move(masks));
}

}  // namespace frankl
