#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <utility>

namespace rcnu {

enum class MultisetOp { kSum, kDiff, kJoin, kMeet };

// Finite multiset with non-negative counts. Elements with count zero are never
// stored, so the key set is exactly the support.
template <typename T, typename Compare = std::less<T>>
class Multiset {
 public:
  using Counts = std::map<T, std::int64_t, Compare>;

  Multiset() = default;
  Multiset(std::initializer_list<std::pair<const T, std::int64_t>> items) {
    for (const auto& [x, n] : items) add(x, n);
  }

  // Adds n copies (n may be negative; the count clamps at zero).
  void add(const T& x, std::int64_t n = 1) {
    if (n == 0) return;
    auto it = counts_.find(x);
    std::int64_t v = (it == counts_.end() ? 0 : it->second) + n;
    if (v <= 0) {
      if (it != counts_.end()) counts_.erase(it);
    } else if (it == counts_.end()) {
      counts_.emplace(x, v);
    } else {
      it->second = v;
    }
  }

  std::int64_t count(const T& x) const {
    auto it = counts_.find(x);
    return it == counts_.end() ? 0 : it->second;
  }

  std::int64_t size() const {
    std::int64_t n = 0;
    for (const auto& kv : counts_) n += kv.second;
    return n;
  }

  bool empty() const { return counts_.empty(); }
  const Counts& counts() const { return counts_; }
  auto begin() const { return counts_.begin(); }
  auto end() const { return counts_.end(); }

  friend bool operator==(const Multiset& a, const Multiset& b) { return a.counts_ == b.counts_; }
  friend bool operator!=(const Multiset& a, const Multiset& b) { return !(a == b); }

 private:
  Counts counts_;
};

template <typename T, typename C>
Multiset<T, C> combine(const Multiset<T, C>& a, const Multiset<T, C>& b, MultisetOp op) {
  Multiset<T, C> out;
  auto apply = [&](const T& x) {
    const std::int64_t l = a.count(x), r = b.count(x);
    switch (op) {
      case MultisetOp::kSum: return l + r;
      case MultisetOp::kDiff: return std::max<std::int64_t>(0, l - r);
      case MultisetOp::kJoin: return std::max(l, r);
      case MultisetOp::kMeet: return std::min(l, r);
    }
    return std::int64_t{0};
  };
  for (const auto& [x, n] : a) out.add(x, apply(x));
  for (const auto& [x, n] : b)
    if (a.count(x) == 0) out.add(x, apply(x));
  return out;
}

template <typename T, typename C>
bool leq(const Multiset<T, C>& a, const Multiset<T, C>& b) {
  return std::all_of(a.begin(), a.end(), [&](const auto& kv) { return kv.second <= b.count(kv.first); });
}

template <typename T, typename C>
Multiset<T, C> operator+(const Multiset<T, C>& a, const Multiset<T, C>& b) {
  return combine(a, b, MultisetOp::kSum);
}

template <typename T, typename C>
Multiset<T, C> operator-(const Multiset<T, C>& a, const Multiset<T, C>& b) {
  return combine(a, b, MultisetOp::kDiff);
}

}  // namespace rcnu
