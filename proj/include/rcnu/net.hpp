#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rcnu/multiset.hpp"

namespace rcnu {

// Activity label of a transition; nullopt is the silent label tau.
using Label = std::optional<std::string>;

// Marking of a classical net: multiset over place indices.
using Marking = Multiset<std::size_t>;

// Classical labeled Petri net with multiset arcs.
class LabeledNet {
 public:
  std::size_t add_place(std::string name);
  std::size_t add_transition(std::string name, Label label);
  void add_input(std::size_t place, std::size_t transition, std::int64_t weight = 1);
  void add_output(std::size_t transition, std::size_t place, std::int64_t weight = 1);

  std::size_t place_count() const { return places_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }
  const std::string& place_name(std::size_t p) const { return places_.at(p); }
  const std::string& transition_name(std::size_t t) const { return transitions_.at(t); }
  const Label& label(std::size_t t) const { return labels_.at(t); }
  std::size_t place(const std::string& name) const;
  std::size_t transition(const std::string& name) const;

  // Pre-set and post-set of a transition as multisets over places.
  const Marking& preset(std::size_t t) const { return pre_.at(t); }
  const Marking& postset(std::size_t t) const { return post_.at(t); }

 private:
  std::vector<std::string> places_;
  std::vector<std::string> transitions_;
  std::vector<Label> labels_;
  std::vector<Marking> pre_;
  std::vector<Marking> post_;
};

struct NetSystem {
  LabeledNet net;
  Marking initial;
  Marking final;
};

bool enabled(const LabeledNet& net, const Marking& m, std::size_t t);
// Throws FiringError naming the first deficient place.
Marking fire(const LabeledNet& net, const Marking& m, std::size_t t);
Marking fire_sequence(const LabeledNet& net, Marking m, const std::vector<std::size_t>& sequence);

using LabelSequence = std::vector<std::string>;

// Label sequences (tau omitted) of all firing sequences from initial to final
// with at most max_len firings. Throws SizeError once more than `state_cap`
// search nodes are visited.
std::set<LabelSequence> language(const NetSystem& sys, std::size_t max_len, std::size_t state_cap = 1'000'000);

using Rational = boost::rational<std::int64_t>;
using RationalVector = std::vector<Rational>;

// Basis of the place invariants (left null space of the incidence matrix), in
// reduced row echelon form with leading entries equal to one.
std::vector<RationalVector> place_invariants(const LabeledNet& net);

// True iff v lies in the span of basis.
bool in_span(const std::vector<RationalVector>& basis, const RationalVector& v);

// Reduced row echelon form of `rows` (in place); returns pivot columns.
std::vector<std::size_t> row_reduce(std::vector<RationalVector>& rows);

}  // namespace rcnu
