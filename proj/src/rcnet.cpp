#include "rcnu/rcnet.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_set>

#include "rcnu/errors.hpp"

namespace rcnu {

std::string to_string(const Token& t) { return "(" + display(t.case_id) + "," + display(t.resource) + ")"; }

namespace {

bool id_less(const Token& a, const Token& b) {
  if (a.case_id.id() != b.case_id.id()) return a.case_id.id() < b.case_id.id();
  return a.resource.id() < b.resource.id();
}

}  // namespace

void TokenBag::add(const Token& t, std::int64_t n) {
  if (n == 0) return;
  auto it = std::lower_bound(items_.begin(), items_.end(), t,
                             [](const Entry& e, const Token& x) { return id_less(e.first, x); });
  if (it != items_.end() && it->first == t) {
    it->second += n;
    if (it->second == 0) items_.erase(it);
  } else {
    items_.insert(it, {t, n});
  }
}

std::int64_t TokenBag::count(const Token& t) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), t,
                             [](const Entry& e, const Token& x) { return id_less(e.first, x); });
  return it != items_.end() && it->first == t ? it->second : 0;
}

std::int64_t TokenBag::total() const {
  std::int64_t n = 0;
  for (const auto& e : items_) n += e.second;
  return n;
}

std::size_t ColoredMarking::hash() const {
  std::size_t h = 1469598103934665603ULL;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (std::size_t p = 0; p < places.size(); ++p) {
    if (places[p].empty()) continue;
    mix(p);
    for (const auto& [t, n] : places[p]) {
      mix(t.case_id.id());
      mix(t.resource.id());
      mix(static_cast<std::size_t>(n));
    }
  }
  return h;
}

bool ColoredMarking::mentions(Name n) const {
  for (const auto& bag : places)
    for (const auto& [t, c] : bag)
      if (t.case_id == n || t.resource == n) return true;
  return false;
}

std::size_t RcNuNet::add_role(std::string name, Multiset<Name> instances) {
  roles_.push_back({std::move(name), std::move(instances), std::nullopt, std::nullopt});
  return roles_.size() - 1;
}

std::size_t RcNuNet::add_place(std::string name, PlaceKind kind, std::optional<std::size_t> role) {
  for (const auto& p : places_)
    if (p.name == name) throw ValidationError("duplicate place '" + name + "'");
  Place p{std::move(name), kind, 0};
  if (kind != PlaceKind::kProduction) {
    if (!role || *role >= roles_.size()) throw ValidationError("resource place '" + p.name + "' needs a declared role");
    p.role = *role;
    auto& slot = kind == PlaceKind::kResourceAvailable ? roles_[*role].available_place : roles_[*role].busy_place;
    if (slot) throw ValidationError("role '" + roles_[*role].name + "' already has a place of this kind");
    slot = places_.size();
  }
  places_.push_back(std::move(p));
  grow_markings();
  return places_.size() - 1;
}

void RcNuNet::grow_markings() {
  initial_.places.resize(places_.size());
  final_.places.resize(places_.size());
}

std::size_t RcNuNet::add_transition(std::string name, Label label) {
  for (const auto& t : transitions_)
    if (t.name == name) throw ValidationError("duplicate transition '" + name + "'");
  transitions_.push_back(Transition{std::move(name), std::move(label), {}, {}, {}, {}});
  return transitions_.size() - 1;
}

namespace {

int declare(std::vector<Variable>& vars, const std::string& spelling) {
  if (spelling.empty() || spelling == kEpsilonText) return -1;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == spelling) return static_cast<int>(i);
  vars.push_back({spelling, spelling.rfind("nu", 0) == 0});
  return static_cast<int>(vars.size() - 1);
}

void add_entry(std::vector<Arc>& arcs, std::size_t place, VarPair vars, std::int64_t count) {
  auto it = std::find_if(arcs.begin(), arcs.end(), [&](const Arc& a) { return a.place == place; });
  if (it == arcs.end()) {
    arcs.push_back({place, {}});
    it = std::prev(arcs.end());
  }
  for (auto& e : it->inscription)
    if (e.vars == vars) {
      e.count += count;
      return;
    }
  it->inscription.push_back({vars, count});
}

}  // namespace

VarPair RcNuNet::resolve(Transition& t, const std::string& case_var, const std::string& resource_var) {
  return {declare(t.case_vars, case_var), declare(t.resource_vars, resource_var)};
}

void RcNuNet::add_input(std::size_t place, std::size_t transition, const std::string& case_var,
                        const std::string& resource_var, std::int64_t count) {
  if (place >= places_.size() || transition >= transitions_.size()) throw ValidationError("arc endpoint not in net");
  auto& t = transitions_[transition];
  add_entry(t.inputs, place, resolve(t, case_var, resource_var), count);
}

void RcNuNet::add_output(std::size_t transition, std::size_t place, const std::string& case_var,
                         const std::string& resource_var, std::int64_t count) {
  if (place >= places_.size() || transition >= transitions_.size()) throw ValidationError("arc endpoint not in net");
  auto& t = transitions_[transition];
  add_entry(t.outputs, place, resolve(t, case_var, resource_var), count);
}

void RcNuNet::add_initial(std::size_t place, const Token& t, std::int64_t count) {
  initial_.places.at(place).add(t, count);
}

void RcNuNet::add_final(std::size_t place, const Token& t, std::int64_t count) {
  final_.places.at(place).add(t, count);
}

void RcNuNet::stock_resources(std::size_t role) {
  const auto& r = roles_.at(role);
  if (!r.available_place) throw ValidationError("role '" + r.name + "' has no availability place");
  for (const auto& [inst, cap] : r.instances) {
    add_initial(*r.available_place, {Name(), inst}, cap);
    add_final(*r.available_place, {Name(), inst}, cap);
  }
}

std::size_t RcNuNet::place_index(const std::string& name) const {
  for (std::size_t i = 0; i < places_.size(); ++i)
    if (places_[i].name == name) return i;
  throw ValidationError("unknown place '" + name + "'");
}

std::size_t RcNuNet::transition_index(const std::string& name) const {
  for (std::size_t i = 0; i < transitions_.size(); ++i)
    if (transitions_[i].name == name) return i;
  throw ValidationError("unknown transition '" + name + "'");
}

std::optional<std::size_t> RcNuNet::role_of_instance(Name instance) const {
  for (std::size_t r = 0; r < roles_.size(); ++r)
    if (roles_[r].instances.count(instance) > 0) return r;
  return std::nullopt;
}

LabeledNet RcNuNet::skeleton() const {
  LabeledNet out;
  for (const auto& p : places_) out.add_place(p.name);
  for (std::size_t ti = 0; ti < transitions_.size(); ++ti) {
    const auto& t = transitions_[ti];
    out.add_transition(t.name, t.label);
    for (const auto& a : t.inputs)
      for (const auto& e : a.inscription) out.add_input(a.place, ti, e.count);
    for (const auto& a : t.outputs)
      for (const auto& e : a.inscription) out.add_output(ti, a.place, e.count);
  }
  return out;
}

namespace {

std::string render_resource_multiset(const Transition& t, const std::map<int, std::int64_t>& ms) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& [slot, n] : ms) {
    if (!first) os << ", ";
    first = false;
    if (n != 1) os << n << "*";
    os << (slot < 0 ? std::string(kEpsilonText) : t.resource_vars[slot].name);
  }
  os << "]";
  return os.str();
}

std::string render_bag(const TokenBag& bag) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& [t, n] : bag) {
    if (!first) os << ", ";
    first = false;
    if (n != 1) os << n << "*";
    os << to_string(t);
  }
  os << "]";
  return os.str();
}

}  // namespace

std::vector<StructureViolation> validate_structure(const RcNuNet& net) {
  using K = StructureViolation::Kind;
  std::vector<StructureViolation> out;
  for (const auto& role : net.roles()) {
    if (!role.available_place || !role.busy_place)
      out.push_back({K::kInscription, role.name, role.name, "", "",
                     "role '" + role.name + "' needs one availability and one busy place"});
  }
  for (const auto& t : net.transitions()) {
    std::vector<bool> case_in(t.case_vars.size(), false), res_in(t.resource_vars.size(), false);
    for (const auto& a : t.inputs)
      for (const auto& e : a.inscription) {
        if (e.vars.case_slot >= 0) case_in[e.vars.case_slot] = true;
        if (e.vars.resource_slot >= 0) res_in[e.vars.resource_slot] = true;
        if ((e.vars.case_slot >= 0 && t.case_vars[e.vars.case_slot].fresh) ||
            (e.vars.resource_slot >= 0 && t.resource_vars[e.vars.resource_slot].fresh))
          out.push_back({K::kInscription, "", t.name, "", "",
                         "fresh variable on input arc from '" + net.place(a.place).name + "'"});
      }
    for (const auto& a : t.outputs)
      for (const auto& e : a.inscription) {
        if (e.vars.case_slot >= 0 && !t.case_vars[e.vars.case_slot].fresh && !case_in[e.vars.case_slot])
          out.push_back({K::kInscription, "", t.name, "", "",
                         "case variable '" + t.case_vars[e.vars.case_slot].name + "' is neither fresh nor consumed"});
        if (e.vars.resource_slot >= 0 && !t.resource_vars[e.vars.resource_slot].fresh &&
            !res_in[e.vars.resource_slot])
          out.push_back({K::kInscription, "", t.name, "", "",
                         "resource variable '" + t.resource_vars[e.vars.resource_slot].name +
                             "' is neither fresh nor consumed"});
      }
    auto check_shape = [&](const Arc& a) {
      const auto& p = net.place(a.place);
      for (const auto& e : a.inscription) {
        const bool ok = p.kind == PlaceKind::kProduction      ? e.vars.resource_slot < 0
                        : p.kind == PlaceKind::kResourceAvailable ? e.vars.case_slot < 0 && e.vars.resource_slot >= 0
                                                                  : e.vars.resource_slot >= 0;
        if (!ok)
          out.push_back({K::kInscription, "", t.name, "", "",
                         "inscription on arc with place '" + p.name + "' does not match the place kind"});
      }
    };
    for (const auto& a : t.inputs) check_shape(a);
    for (const auto& a : t.outputs) check_shape(a);
  }
  // Resource conservation per role and transition, on the resource component.
  for (const auto& role : net.roles()) {
    if (!role.available_place || !role.busy_place) continue;
    for (const auto& t : net.transitions()) {
      std::map<int, std::int64_t> in, outm;
      for (const auto& a : t.inputs)
        if (a.place == *role.available_place || a.place == *role.busy_place)
          for (const auto& e : a.inscription) in[e.vars.resource_slot] += e.count;
      for (const auto& a : t.outputs)
        if (a.place == *role.available_place || a.place == *role.busy_place)
          for (const auto& e : a.inscription) outm[e.vars.resource_slot] += e.count;
      if (in != outm)
        out.push_back({K::kConservation, role.name, t.name, render_resource_multiset(t, in),
                       render_resource_multiset(t, outm),
                       "transition '" + t.name + "' does not conserve resources of role '" + role.name + "'"});
    }
  }
  // Boundary markings.
  for (const auto& role : net.roles()) {
    if (!role.available_place || !role.busy_place) continue;
    const auto pa = *role.available_place, pb = *role.busy_place;
    const auto& mi = net.initial().places[pa];
    const auto& mf = net.final_marking().places[pa];
    if (!(mi == mf))
      out.push_back({K::kBoundary, role.name, net.place(pa).name, render_bag(mi), render_bag(mf),
                     "initial and final marking differ on availability place '" + net.place(pa).name + "'"});
    for (const auto* m : {&net.initial(), &net.final_marking()})
      if (!m->places[pb].empty())
        out.push_back({K::kBoundary, role.name, net.place(pb).name, render_bag(m->places[pb]), "[]",
                       "busy place '" + net.place(pb).name + "' must be empty in the initial and final marking"});
    TokenBag expected;
    for (const auto& [inst, cap] : role.instances) expected.add({Name(), inst}, cap);
    if (!(mi == expected))
      out.push_back({K::kBoundary, role.name, net.place(pa).name, render_bag(mi), render_bag(expected),
                     "availability place '" + net.place(pa).name + "' does not hold the role's capacities"});
  }
  return out;
}

Token instantiate(const Mode& mode, const VarPair& vars) {
  return {vars.case_slot < 0 ? Name() : mode.case_values.at(vars.case_slot),
          vars.resource_slot < 0 ? Name() : mode.resource_values.at(vars.resource_slot)};
}

std::vector<TokenDelta> consumed(const RcNuNet& net, std::size_t t, const Mode& mode) {
  std::vector<TokenDelta> out;
  for (const auto& a : net.transition(t).inputs)
    for (const auto& e : a.inscription) out.push_back({a.place, instantiate(mode, e.vars), e.count});
  return out;
}

std::vector<TokenDelta> produced(const RcNuNet& net, std::size_t t, const Mode& mode) {
  std::vector<TokenDelta> out;
  for (const auto& a : net.transition(t).outputs)
    for (const auto& e : a.inscription) out.push_back({a.place, instantiate(mode, e.vars), e.count});
  return out;
}

namespace {

bool mode_less(const Mode& a, const Mode& b) {
  if (a.case_values != b.case_values)
    return std::lexicographical_compare(a.case_values.begin(), a.case_values.end(), b.case_values.begin(),
                                        b.case_values.end());
  return std::lexicographical_compare(a.resource_values.begin(), a.resource_values.end(),
                                      b.resource_values.begin(), b.resource_values.end());
}

struct Demand {
  std::size_t place;
  VarPair vars;
  std::int64_t count;
};

class ModeEnumerator {
 public:
  ModeEnumerator(const RcNuNet& net, const ColoredMarking& m, std::size_t t, const std::vector<Name>& pool,
                 std::optional<Name> forced)
      : net_(net), m_(m), t_(net.transition(t)), pool_(pool), forced_(forced) {
    for (const auto& a : t_.inputs)
      for (const auto& e : a.inscription) demands_.push_back({a.place, e.vars, e.count});
    // Entries whose variables are already bound by earlier entries become
    // lookups; ordering by place size keeps branching small.
    std::stable_sort(demands_.begin(), demands_.end(), [&](const Demand& x, const Demand& y) {
      return m_.places[x.place].entries().size() < m_.places[y.place].entries().size();
    });
    mode_.case_values.assign(t_.case_vars.size(), Name());
    mode_.resource_values.assign(t_.resource_vars.size(), Name());
    case_bound_.assign(t_.case_vars.size(), false);
    res_bound_.assign(t_.resource_vars.size(), false);
  }

  std::vector<Mode> run() {
    descend(0);
    std::sort(out_.begin(), out_.end(), mode_less);
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return std::move(out_);
  }

 private:
  bool case_value_taken(Name v) const {
    for (std::size_t i = 0; i < mode_.case_values.size(); ++i)
      if (case_bound_[i] && mode_.case_values[i] == v) return true;
    return false;
  }
  bool res_value_taken(Name v) const {
    for (std::size_t i = 0; i < mode_.resource_values.size(); ++i)
      if (res_bound_[i] && mode_.resource_values[i] == v) return true;
    return false;
  }

  std::int64_t tallied(std::size_t place, const Token& tok) const {
    std::int64_t n = 0;
    for (const auto& d : tally_)
      if (d.place == place && d.token == tok) n += d.count;
    return n;
  }

  void descend(std::size_t k) {
    if (k == demands_.size()) {
      bind_fresh(0);
      return;
    }
    const auto& d = demands_[k];
    for (const auto& [tok, cnt] : m_.places[d.place]) {
      bool bind_case = false, bind_res = false;
      if (d.vars.case_slot < 0) {
        if (!tok.case_id.is_epsilon()) continue;
      } else if (case_bound_[d.vars.case_slot]) {
        if (mode_.case_values[d.vars.case_slot] != tok.case_id) continue;
      } else {
        if (tok.case_id.is_epsilon() || case_value_taken(tok.case_id)) continue;
        if (forced_ && tok.case_id != *forced_) continue;
        bind_case = true;
      }
      if (d.vars.resource_slot < 0) {
        if (!tok.resource.is_epsilon()) continue;
      } else if (res_bound_[d.vars.resource_slot]) {
        if (mode_.resource_values[d.vars.resource_slot] != tok.resource) continue;
      } else {
        if (tok.resource.is_epsilon() || res_value_taken(tok.resource)) continue;
        bind_res = true;
      }
      if (cnt - tallied(d.place, tok) < d.count) continue;
      if (bind_case) {
        case_bound_[d.vars.case_slot] = true;
        mode_.case_values[d.vars.case_slot] = tok.case_id;
      }
      if (bind_res) {
        res_bound_[d.vars.resource_slot] = true;
        mode_.resource_values[d.vars.resource_slot] = tok.resource;
      }
      tally_.push_back({d.place, tok, d.count});
      descend(k + 1);
      tally_.pop_back();
      if (bind_case) case_bound_[d.vars.case_slot] = false;
      if (bind_res) res_bound_[d.vars.resource_slot] = false;
    }
  }

  bool in_marking(Name n) {
    if (!names_) {
      names_.emplace();
      for (const auto& bag : m_.places)
        for (const auto& [tok, c] : bag) {
          names_->insert(tok.case_id.id());
          names_->insert(tok.resource.id());
        }
    }
    return names_->count(n.id()) > 0;
  }

  // Slots 0..case_vars-1 are case variables, the rest resource variables.
  void bind_fresh(std::size_t slot) {
    const std::size_t nc = t_.case_vars.size(), total = nc + t_.resource_vars.size();
    while (slot < total) {
      const bool is_case = slot < nc;
      const std::size_t i = is_case ? slot : slot - nc;
      const bool bound = is_case ? case_bound_[i] : res_bound_[i];
      if (!bound) break;
      ++slot;
    }
    if (slot == total) {
      out_.push_back(mode_);
      return;
    }
    const bool is_case = slot < nc;
    const std::size_t i = is_case ? slot : slot - nc;
    const auto& var = is_case ? t_.case_vars[i] : t_.resource_vars[i];
    if (!var.fresh) return;  // output-only ordinary variable: cannot be bound
    for (Name v : pool_) {
      if (v.is_epsilon() || in_marking(v)) continue;
      if (is_case) {
        if (case_value_taken(v) || (forced_ && v != *forced_)) continue;
        case_bound_[i] = true;
        mode_.case_values[i] = v;
        bind_fresh(slot + 1);
        case_bound_[i] = false;
      } else {
        if (res_value_taken(v)) continue;
        res_bound_[i] = true;
        mode_.resource_values[i] = v;
        bind_fresh(slot + 1);
        res_bound_[i] = false;
      }
    }
  }

  const RcNuNet& net_;
  const ColoredMarking& m_;
  const Transition& t_;
  const std::vector<Name>& pool_;
  std::optional<Name> forced_;
  std::vector<Demand> demands_;
  Mode mode_;
  std::vector<bool> case_bound_, res_bound_;
  std::vector<TokenDelta> tally_;
  std::optional<std::unordered_set<std::uint32_t>> names_;
  std::vector<Mode> out_;
};

}  // namespace

std::vector<Mode> enabled_modes(const RcNuNet& net, const ColoredMarking& m, std::size_t t,
                                const std::vector<Name>& fresh_pool, std::optional<Name> forced_case) {
  return ModeEnumerator(net, m, t, fresh_pool, forced_case).run();
}

namespace {

std::string enabledness_problem(const RcNuNet& net, const ColoredMarking& m, std::size_t t, const Mode& mode) {
  const auto& tr = net.transition(t);
  if (mode.case_values.size() != tr.case_vars.size() || mode.resource_values.size() != tr.resource_vars.size())
    return "mode does not match the variables of transition '" + tr.name + "'";
  for (std::size_t i = 0; i < mode.case_values.size(); ++i)
    for (std::size_t j = i + 1; j < mode.case_values.size(); ++j)
      if (mode.case_values[i] == mode.case_values[j]) return "mode is not injective on case variables";
  for (std::size_t i = 0; i < mode.resource_values.size(); ++i)
    for (std::size_t j = i + 1; j < mode.resource_values.size(); ++j)
      if (mode.resource_values[i] == mode.resource_values[j]) return "mode is not injective on resource variables";
  for (std::size_t i = 0; i < tr.case_vars.size(); ++i) {
    if (mode.case_values[i].is_epsilon()) return "case variable bound to epsilon";
    if (tr.case_vars[i].fresh && m.mentions(mode.case_values[i]))
      return "fresh name '" + mode.case_values[i].str() + "' already occurs in the marking";
  }
  for (std::size_t i = 0; i < tr.resource_vars.size(); ++i) {
    if (mode.resource_values[i].is_epsilon()) return "resource variable bound to epsilon";
    if (tr.resource_vars[i].fresh && m.mentions(mode.resource_values[i]))
      return "fresh name '" + mode.resource_values[i].str() + "' already occurs in the marking";
  }
  std::map<std::pair<std::size_t, std::pair<std::uint32_t, std::uint32_t>>, std::pair<Token, std::int64_t>> need;
  for (const auto& d : consumed(net, t, mode)) {
    auto& slot = need[{d.place, {d.token.case_id.id(), d.token.resource.id()}}];
    slot.first = d.token;
    slot.second += d.count;
  }
  for (const auto& [key, v] : need)
    if (m.places[key.first].count(v.first) < v.second)
      return "place '" + net.place(key.first).name + "' lacks token " + to_string(v.first) + " (needs " +
             std::to_string(v.second) + ", has " + std::to_string(m.places[key.first].count(v.first)) + ")";
  return {};
}

}  // namespace

bool mode_enabled(const RcNuNet& net, const ColoredMarking& m, std::size_t t, const Mode& mode) {
  return enabledness_problem(net, m, t, mode).empty();
}

ColoredMarking fire_mode(const RcNuNet& net, const ColoredMarking& m, std::size_t t, const Mode& mode) {
  if (auto problem = enabledness_problem(net, m, t, mode); !problem.empty())
    throw FiringError("cannot fire " + describe(net, t, mode) + ": " + problem);
  ColoredMarking out = m;
  for (const auto& d : consumed(net, t, mode)) out.places[d.place].add(d.token, -d.count);
  for (const auto& d : produced(net, t, mode)) out.places[d.place].add(d.token, d.count);
  return out;
}

std::optional<Name> firing_case(const RcNuNet& net, std::size_t t, const Mode& mode) {
  (void)net;
  (void)t;
  for (Name c : mode.case_values)
    if (!c.is_epsilon()) return c;
  return std::nullopt;
}

Multiset<Name> resource_demand(const RcNuNet& net, std::size_t t, const Mode& mode) {
  const auto& tr = net.transition(t);
  std::vector<std::int64_t> demand(tr.resource_vars.size(), 0);
  for (const auto& a : tr.inputs) {
    if (net.place(a.place).kind == PlaceKind::kProduction) continue;
    std::vector<std::int64_t> here(tr.resource_vars.size(), 0);
    for (const auto& e : a.inscription)
      if (e.vars.resource_slot >= 0) here[e.vars.resource_slot] += e.count;
    for (std::size_t i = 0; i < here.size(); ++i) demand[i] = std::max(demand[i], here[i]);
  }
  Multiset<Name> out;
  for (std::size_t i = 0; i < demand.size(); ++i) out.add(mode.resource_values.at(i), demand[i]);
  return out;
}

std::int64_t claims(const RcNuNet& net, std::size_t t, const Mode& mode, Name instance) {
  std::int64_t n = 0;
  for (const auto& d : consumed(net, t, mode))
    if (net.place(d.place).kind == PlaceKind::kResourceAvailable && d.token.resource == instance &&
        d.token.case_id.is_epsilon())
      n += d.count;
  return n;
}

std::int64_t releases(const RcNuNet& net, std::size_t t, const Mode& mode, Name instance) {
  std::int64_t n = 0;
  for (const auto& d : produced(net, t, mode))
    if (net.place(d.place).kind == PlaceKind::kResourceAvailable && d.token.resource == instance &&
        d.token.case_id.is_epsilon())
      n += d.count;
  return n;
}

std::string describe(const RcNuNet& net, std::size_t t, const Mode& mode) {
  const auto& tr = net.transition(t);
  std::string s = tr.name + "[";
  bool first = true;
  for (std::size_t i = 0; i < tr.case_vars.size(); ++i) {
    if (!first) s += ",";
    first = false;
    s += tr.case_vars[i].name + "=" + display(mode.case_values.at(i));
  }
  for (std::size_t i = 0; i < tr.resource_vars.size(); ++i) {
    if (!first) s += ",";
    first = false;
    s += tr.resource_vars[i].name + "=" + display(mode.resource_values.at(i));
  }
  return s + "]";
}

}  // namespace rcnu

namespace rcnu {

std::set<LabelSequence> colored_language(const RcNuNet& net, const std::vector<Name>& fresh_pool, std::size_t max_len,
                                         bool tag_case, std::size_t state_cap) {
  std::set<LabelSequence> out;
  LabelSequence word;
  std::size_t nodes = 0;
  std::function<void(const ColoredMarking&, std::size_t)> dfs = [&](const ColoredMarking& m, std::size_t depth) {
    if (++nodes > state_cap) throw SizeError("language enumeration exceeded " + std::to_string(state_cap) + " nodes");
    if (m == net.final_marking()) out.insert(word);
    if (depth == max_len) return;
    for (std::size_t t = 0; t < net.transitions().size(); ++t) {
      const auto& tr = net.transition(t);
      for (const auto& mode : enabled_modes(net, m, t, fresh_pool)) {
        const bool visible = tr.label.has_value();
        if (visible) {
          std::string entry = *tr.label;
          if (tag_case)
            if (auto c = firing_case(net, t, mode)) entry += "@" + c->str();
          word.push_back(std::move(entry));
        }
        dfs(fire_mode(net, m, t, mode), depth + 1);
        if (visible) word.pop_back();
      }
    }
  };
  dfs(net.initial(), 0);
  return out;
}

}  // namespace rcnu
