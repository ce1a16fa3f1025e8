#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rcnu/multiset.hpp"
#include "rcnu/net.hpp"
#include "rcnu/symbol.hpp"

namespace rcnu {

// Two-field colored token: (case id, resource id); either field may be epsilon.
struct Token {
  Name case_id;
  Name resource;

  friend bool operator==(const Token& a, const Token& b) = default;
  // Lexicographic on the identifier text.
  friend bool operator<(const Token& a, const Token& b) {
    if (a.case_id != b.case_id) return a.case_id < b.case_id;
    return a.resource < b.resource;
  }
};

std::string to_string(const Token& t);

// Signed token counts for one place, kept sorted by interned id. Zero counts
// are never stored.
class TokenBag {
 public:
  using Entry = std::pair<Token, std::int64_t>;

  void add(const Token& t, std::int64_t n);
  std::int64_t count(const Token& t) const;
  bool empty() const { return items_.empty(); }
  const std::vector<Entry>& entries() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  std::int64_t total() const;

  friend bool operator==(const TokenBag& a, const TokenBag& b) = default;

 private:
  std::vector<Entry> items_;
};

// Marking of an RC nu-net: one token bag per place, non-negative counts.
struct ColoredMarking {
  std::vector<TokenBag> places;

  ColoredMarking() = default;
  explicit ColoredMarking(std::size_t place_count) : places(place_count) {}

  std::size_t hash() const;
  // Names (case and resource) occurring in any token.
  bool mentions(Name n) const;
  friend bool operator==(const ColoredMarking& a, const ColoredMarking& b) = default;
};

struct MarkingHash {
  std::size_t operator()(const ColoredMarking& m) const { return m.hash(); }
};

enum class PlaceKind { kProduction, kResourceAvailable, kResourceBusy };

struct Place {
  std::string name;
  PlaceKind kind = PlaceKind::kProduction;
  std::size_t role = 0;  // meaningful for resource places only
};

struct Role {
  std::string name;
  Multiset<Name> instances;  // multiplicity = capacity
  std::optional<std::size_t> available_place;
  std::optional<std::size_t> busy_place;
};

// Inscription element: a (case variable, resource variable) pair where each
// side is a transition-local variable slot or epsilon (-1).
struct VarPair {
  int case_slot = -1;
  int resource_slot = -1;
  friend bool operator==(const VarPair&, const VarPair&) = default;
  friend auto operator<=>(const VarPair&, const VarPair&) = default;
};

struct Variable {
  std::string name;
  bool fresh = false;  // nu-variable, instantiated with a fresh name
};

struct ArcEntry {
  VarPair vars;
  std::int64_t count = 1;
};

struct Arc {
  std::size_t place = 0;
  std::vector<ArcEntry> inscription;
};

struct Transition {
  std::string name;
  Label label;
  std::vector<Variable> case_vars;
  std::vector<Variable> resource_vars;
  std::vector<Arc> inputs;
  std::vector<Arc> outputs;
};

// Injective binding of a transition's variables to identifiers.
struct Mode {
  std::vector<Name> case_values;
  std::vector<Name> resource_values;
  friend bool operator==(const Mode&, const Mode&) = default;
};

// Resource-constrained nu-Petri net: production places plus one
// availability place and one busy place per resource role.
class RcNuNet {
 public:
  std::size_t add_role(std::string name, Multiset<Name> instances);
  // Resource places must name their role; each role has exactly one place of
  // each resource kind.
  std::size_t add_place(std::string name, PlaceKind kind = PlaceKind::kProduction,
                        std::optional<std::size_t> role = {});
  std::size_t add_transition(std::string name, Label label);

  // Variable spellings: "eps" is epsilon, names starting with "nu" are fresh
  // variables, anything else is an ordinary variable. Variables are declared on
  // first use.
  void add_input(std::size_t place, std::size_t transition, const std::string& case_var,
                 const std::string& resource_var, std::int64_t count = 1);
  void add_output(std::size_t transition, std::size_t place, const std::string& case_var,
                  const std::string& resource_var, std::int64_t count = 1);

  void add_initial(std::size_t place, const Token& t, std::int64_t count = 1);
  void add_final(std::size_t place, const Token& t, std::int64_t count = 1);
  // Puts every instance of the role, with its capacity, on the role's
  // availability place in both the initial and the final marking.
  void stock_resources(std::size_t role);

  const std::vector<Place>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<Role>& roles() const { return roles_; }
  const Place& place(std::size_t p) const { return places_.at(p); }
  const Transition& transition(std::size_t t) const { return transitions_.at(t); }
  std::size_t place_index(const std::string& name) const;
  std::size_t transition_index(const std::string& name) const;
  std::optional<std::size_t> role_of_instance(Name instance) const;

  const ColoredMarking& initial() const { return initial_; }
  const ColoredMarking& final_marking() const { return final_; }
  ColoredMarking empty_marking() const { return ColoredMarking(places_.size()); }

  // The net with colors erased: one classical place per place, arc weights are
  // inscription sizes.
  LabeledNet skeleton() const;

 private:
  VarPair resolve(Transition& t, const std::string& case_var, const std::string& resource_var);
  void grow_markings();

  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::vector<Role> roles_;
  ColoredMarking initial_;
  ColoredMarking final_;
};

struct StructureViolation {
  enum class Kind { kConservation, kBoundary, kInscription };
  Kind kind;
  std::string role;     // role concerned, if any
  std::string subject;  // transition or place name
  std::string left;     // rendering of the two unequal multisets
  std::string right;
  std::string message;
};

// Empty iff the resource conservation and boundary-marking restrictions hold
// and every inscription is well formed.
std::vector<StructureViolation> validate_structure(const RcNuNet& net);

// All modes with which t is enabled in m. Fresh variables bind to members of
// fresh_pool that do not occur in m. Sorted lexicographically on the bound
// identifiers. If forced_case is set, every case variable binds to it.
std::vector<Mode> enabled_modes(const RcNuNet& net, const ColoredMarking& m, std::size_t t,
                                const std::vector<Name>& fresh_pool, std::optional<Name> forced_case = {});

struct TokenDelta {
  std::size_t place;
  Token token;
  std::int64_t count;
};

Token instantiate(const Mode& mode, const VarPair& vars);
std::vector<TokenDelta> consumed(const RcNuNet& net, std::size_t t, const Mode& mode);
std::vector<TokenDelta> produced(const RcNuNet& net, std::size_t t, const Mode& mode);

bool mode_enabled(const RcNuNet& net, const ColoredMarking& m, std::size_t t, const Mode& mode);
// Throws FiringError naming the place and token that are short.
ColoredMarking fire_mode(const RcNuNet& net, const ColoredMarking& m, std::size_t t, const Mode& mode);

// Case identifier a firing belongs to (first non-epsilon case binding).
std::optional<Name> firing_case(const RcNuNet& net, std::size_t t, const Mode& mode);
// Resource instances a firing touches: each resource variable contributes its
// largest input multiplicity on a resource place.
Multiset<Name> resource_demand(const RcNuNet& net, std::size_t t, const Mode& mode);
// Tokens (epsilon, instance) consumed from / produced to availability places.
std::int64_t claims(const RcNuNet& net, std::size_t t, const Mode& mode, Name instance);
std::int64_t releases(const RcNuNet& net, std::size_t t, const Mode& mode, Name instance);

std::string describe(const RcNuNet& net, std::size_t t, const Mode& mode);

// Visible label sequences of firing sequences from the initial to the final
// marking with at most max_len firings. With tag_case each entry reads
// "label@case". Throws SizeError after state_cap search nodes.
std::set<LabelSequence> colored_language(const RcNuNet& net, const std::vector<Name>& fresh_pool, std::size_t max_len,
                                         bool tag_case = false, std::size_t state_cap = 1'000'000);

}  // namespace rcnu
