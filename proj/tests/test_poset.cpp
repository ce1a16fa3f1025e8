#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "rcnu/errors.hpp"
#include "rcnu/multiset.hpp"
#include "rcnu/poset.hpp"

using namespace rcnu;

namespace {

Poset random_order(std::size_t n, std::mt19937_64& rng, double density) {
  // Pairs only go from lower to higher index, so the result is acyclic.
  std::bernoulli_distribution coin(density);
  Poset p(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (coin(rng)) p.add(a, b);
  return p.closure();
}

bool brute_is_antichain(const Poset& p, const std::vector<std::size_t>& s) {
  for (auto a : s)
    for (auto b : s)
      if (a != b && p.comparable(a, b)) return false;
  return true;
}

std::vector<Antichain> brute_maximal_antichains(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<Antichain> all;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    Antichain s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) s.push_back(i);
    if (brute_is_antichain(p, s)) all.push_back(s);
  }
  std::vector<Antichain> out;
  for (const auto& s : all) {
    bool maximal = true;
    for (std::size_t x = 0; x < n && maximal; ++x) {
      if (std::find(s.begin(), s.end(), x) != s.end()) continue;
      auto t = s;
      t.push_back(x);
      if (brute_is_antichain(p, t)) maximal = false;
    }
    if (maximal) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t brute_linearization_count(const Poset& p) {
  std::vector<std::size_t> perm(p.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t count = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < perm.size() && ok; ++i)
      for (std::size_t j = i + 1; j < perm.size() && ok; ++j) ok = !p.precedes(perm[j], perm[i]);
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace

TEST_CASE("multiset arithmetic clamps at zero") {
  Multiset<int> a{{1, 2}, {2, 1}};
  Multiset<int> b{{1, 1}, {3, 4}};
  CHECK((a + b).count(1) == 3);
  CHECK((a - b).count(1) == 1);
  CHECK((b - a).count(1) == 0);
  CHECK((b - a).count(3) == 4);
  CHECK(combine(a, b, MultisetOp::kJoin).count(3) == 4);
  CHECK(combine(a, b, MultisetOp::kMeet).size() == 1);
  CHECK(leq(Multiset<int>{{1, 1}}, a));
  CHECK_FALSE(leq(b, a));
  a.add(2, -5);
  CHECK(a.count(2) == 0);
  CHECK(a.counts().count(2) == 0);
}

TEST_CASE("closure, reduction and cycles") {
  Poset p(4);
  p.add(0, 1);
  p.add(1, 2);
  p.add(2, 3);
  const auto c = p.closure();
  CHECK(c.precedes(0, 3));
  CHECK(c.is_transitively_closed());
  CHECK(c.is_total());
  CHECK(c.reduction() == p);
  Poset cyc(2);
  cyc.add(0, 1);
  cyc.add(1, 0);
  CHECK_THROWS_AS(cyc.closure(), CycleError);
  CHECK_THROWS_AS(cyc.add(1, 1), CycleError);
}

TEST_CASE("maximal antichains agree with subset enumeration") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = 1 + round % 9;
    const auto p = random_order(n, rng, 0.1 + 0.05 * (round % 10));
    const auto got = maximal_antichains(p);
    CHECK(got == brute_maximal_antichains(p));
    for (const auto& a : got) CHECK(p.is_antichain(a));
  }
  CHECK(maximal_antichains(Poset()) == std::vector<Antichain>{Antichain{}});
  CHECK_THROWS_AS(maximal_antichains(Poset(26)), SizeError);
}

TEST_CASE("linearization counts agree with permutation filtering") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 1 + round % 7;
    const auto p = random_order(n, rng, 0.3);
    const auto lins = linearizations(p);
    CHECK(lins.size() == brute_linearization_count(p));
    for (const auto& l : lins)
      for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = i + 1; j < l.size(); ++j) CHECK_FALSE(p.precedes(l[j], l[i]));
  }
  CHECK(linearizations(Poset(4)).size() == 24);
  CHECK_THROWS_AS(linearizations(Poset(9), 100), SizeError);
}

TEST_CASE("intervals and prefixes") {
  // 0 < 1 < 3, 0 < 2 < 3
  Poset p(4);
  p.add(0, 1);
  p.add(0, 2);
  p.add(1, 3);
  p.add(2, 3);
  p = p.closure();
  const auto whole = interval(p, Endpoint::bottom(), Endpoint::top(), Bounds::kClosed);
  CHECK(whole.members.size() == 4);
  const auto mid = interval(p, Endpoint::of({1, 2}), Endpoint::of({1, 2}), Bounds::kClosed);
  CHECK(mid.members == std::vector<std::size_t>{1, 2});
  const auto open = interval(p, Endpoint::of({0}), Endpoint::of({3}), Bounds::kOpen);
  CHECK(open.members == std::vector<std::size_t>{1, 2});
  CHECK(prefix(p, {1}).members == std::vector<std::size_t>{0, 1});
  CHECK(prefix_open(p, {1, 2}).members == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(interval(p, Endpoint::of({0, 1}), Endpoint::top(), Bounds::kClosed), ValidationError);
  const auto r = restrict(p, std::vector<std::size_t>{0, 3});
  CHECK(r.order.precedes(0, 1));
}

TEST_CASE("every maximal antichain is maximal") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 20; ++round) {
    const auto p = random_order(10, rng, 0.25);
    for (const auto& a : maximal_antichains(p))
      for (std::size_t x = 0; x < p.size(); ++x) {
        if (std::find(a.begin(), a.end(), x) != a.end()) continue;
        auto b = a;
        b.push_back(x);
        CHECK_FALSE(p.is_antichain(b));
      }
  }
}
