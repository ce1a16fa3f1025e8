#include <doctest.h>

#include "rcnu/errors.hpp"
#include "rcnu/net.hpp"
#include "surgery.hpp"

using namespace rcnu;

TEST_CASE("firing and enabledness") {
  LabeledNet n;
  const auto a = n.add_place("a"), b = n.add_place("b");
  const auto t = n.add_transition("t", "t");
  n.add_input(a, t, 2);
  n.add_output(t, b);
  Marking m{{a, 1}};
  CHECK_FALSE(enabled(n, m, t));
  CHECK_THROWS_AS(fire(n, m, t), FiringError);
  m.add(a);
  const auto m2 = fire(n, m, t);
  CHECK(m2.count(a) == 0);
  CHECK(m2.count(b) == 1);
}

TEST_CASE("surgery net language with one case") {
  const auto sys = testing::surgery_system(1);
  const std::set<LabelSequence> expected{{"o_p", "o_a", "o_sc"},
                                         {"o_p", "o_sc", "o_a"},
                                         {"o_p", "o_a", "o_so", "o_c"},
                                         {"o_p", "o_so", "o_a", "o_c"}};
  CHECK(language(sys, 12) == expected);
}

TEST_CASE("surgery net with two uncolored cases accepts the mixed run") {
  const auto sys = testing::surgery_system(2);
  const auto lang = language(sys, 12);
  CHECK(lang.count({"o_p", "o_a", "o_sc", "o_p", "o_a", "o_so", "o_c"}) == 1);
}

TEST_CASE("place invariants of the surgery net") {
  const auto sys = testing::surgery_system(1);
  const auto basis = place_invariants(sys.net);
  const auto& net = sys.net;
  // Every basis vector annihilates the incidence matrix.
  for (const auto& y : basis) {
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
      Rational s = 0;
      for (std::size_t p = 0; p < net.place_count(); ++p)
        s += y[p] * Rational(net.postset(t).count(p) - net.preset(t).count(p));
      CHECK(s.numerator() == 0);
    }
  }
  RationalVector surgeons(net.place_count(), 0);
  surgeons[net.place("p_s")] = 1;
  CHECK_FALSE(in_span(basis, surgeons));
  // Open surgery holds the surgeon while the case waits in p5.
  surgeons[net.place("p5")] = 1;
  CHECK(in_span(basis, surgeons));
  RationalVector not_inv(net.place_count(), 0);
  not_inv[net.place("p1")] = 1;
  CHECK_FALSE(in_span(basis, not_inv));
}
