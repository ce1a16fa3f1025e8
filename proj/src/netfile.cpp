#include "rcnu/netfile.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rcnu/errors.hpp"

namespace rcnu {
namespace {

using nlohmann::json;

std::string text_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) throw ParseError(where + ": missing string field '" + key + "'");
  return j[key].get<std::string>();
}

std::int64_t count_field(const json& j, const std::string& where) {
  if (!j.contains("count")) return 1;
  if (!j["count"].is_number_integer() || j["count"].get<std::int64_t>() < 1)
    throw ParseError(where + ": 'count' must be a positive integer");
  return j["count"].get<std::int64_t>();
}

Name token_name(const std::string& s) { return s == kEpsilonText ? Name() : Name(s); }

PlaceKind kind_of(const std::string& s, const std::string& where) {
  if (s == "production") return PlaceKind::kProduction;
  if (s == "resource_available") return PlaceKind::kResourceAvailable;
  if (s == "resource_busy") return PlaceKind::kResourceBusy;
  throw ParseError(where + ": unknown place kind '" + s + "'");
}

std::string kind_text(PlaceKind k) {
  switch (k) {
    case PlaceKind::kProduction: return "production";
    case PlaceKind::kResourceAvailable: return "resource_available";
    case PlaceKind::kResourceBusy: return "resource_busy";
  }
  return "";
}

}  // namespace

RcNuNet parse_net(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("net file must hold a JSON object");
  RcNuNet net;
  try {
    std::map<std::string, std::size_t> role_index;
    for (const auto& r : doc.value("roles", json::array())) {
      const auto name = text_field(r, "name", "role");
      Multiset<Name> instances;
      for (const auto& i : r.value("instances", json::array())) {
        const auto id = text_field(i, "id", "role " + name);
        std::int64_t cap = 1;
        if (i.contains("capacity")) {
          if (!i["capacity"].is_number_integer() || i["capacity"].get<std::int64_t>() < 1)
            throw ParseError("role " + name + ": capacity of '" + id + "' must be a positive integer");
          cap = i["capacity"].get<std::int64_t>();
        }
        instances.add(Name(id), cap);
      }
      if (role_index.count(name)) throw ParseError("duplicate role '" + name + "'");
      role_index[name] = net.add_role(name, std::move(instances));
    }
    for (const auto& p : doc.value("places", json::array())) {
      const auto id = text_field(p, "id", "place");
      const auto kind = kind_of(p.value("kind", std::string("production")), "place " + id);
      std::optional<std::size_t> role;
      if (kind != PlaceKind::kProduction) {
        const auto rn = text_field(p, "role", "place " + id);
        auto it = role_index.find(rn);
        if (it == role_index.end()) throw ParseError("place " + id + ": unknown role '" + rn + "'");
        role = it->second;
      }
      net.add_place(id, kind, role);
    }
    std::set<std::string> place_ids;
    for (const auto& p : net.places()) place_ids.insert(p.name);
    for (const auto& t : doc.value("transitions", json::array())) {
      const auto id = text_field(t, "id", "transition");
      if (place_ids.count(id)) throw ParseError("'" + id + "' names both a place and a transition");
      Label label;
      if (!t.contains("label")) {
        label = id;
      } else if (t["label"].is_string()) {
        label = t["label"].get<std::string>();
      } else if (!t["label"].is_null()) {
        throw ParseError("transition " + id + ": label must be a string or null");
      }
      net.add_transition(id, label);
    }
    auto is_place = [&](const std::string& s) { return place_ids.count(s) > 0; };
    for (const auto& a : doc.value("arcs", json::array())) {
      const auto src = text_field(a, "source", "arc");
      const auto dst = text_field(a, "target", "arc");
      const std::string where = "arc " + src + "->" + dst;
      if (is_place(src) == is_place(dst)) throw ParseError(where + ": must connect a place and a transition");
      const auto ins = a.value("inscriptions", json::array());
      if (ins.empty()) throw ParseError(where + ": needs at least one inscription");
      for (const auto& i : ins) {
        const auto c = i.value("case", std::string(kEpsilonText));
        const auto r = i.value("resource", std::string(kEpsilonText));
        const auto n = count_field(i, where);
        if (is_place(src))
          net.add_input(net.place_index(src), net.transition_index(dst), c, r, n);
        else
          net.add_output(net.transition_index(src), net.place_index(dst), c, r, n);
      }
    }
    auto read_marking = [&](const char* key, bool initial) {
      std::set<std::size_t> given;
      if (doc.contains(key)) {
        if (!doc[key].is_object()) throw ParseError(std::string("'") + key + "' must map places to token lists");
        for (const auto& [place, tokens] : doc[key].items()) {
          const auto p = net.place_index(place);
          given.insert(p);
          for (const auto& tok : tokens) {
            const Token t{token_name(tok.value("case", std::string(kEpsilonText))),
                          token_name(tok.value("resource", std::string(kEpsilonText)))};
            const auto n = count_field(tok, std::string(key) + " marking of " + place);
            if (initial) net.add_initial(p, t, n);
            else net.add_final(p, t, n);
          }
        }
      }
      for (const auto& role : net.roles())
        if (role.available_place && !given.count(*role.available_place))
          for (const auto& [inst, cap] : role.instances) {
            if (initial) net.add_initial(*role.available_place, {Name(), inst}, cap);
            else net.add_final(*role.available_place, {Name(), inst}, cap);
          }
    };
    read_marking("initial", true);
    read_marking("final", false);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad net file: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  return net;
}

RcNuNet load_net_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open net file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_net(ss.str());
}

std::string net_to_json(const RcNuNet& net) {
  json doc = json::object();
  doc["roles"] = json::array();
  for (const auto& r : net.roles()) {
    json inst = json::array();
    for (const auto& [i, cap] : r.instances) inst.push_back({{"id", i.str()}, {"capacity", cap}});
    doc["roles"].push_back({{"name", r.name}, {"instances", inst}});
  }
  doc["places"] = json::array();
  for (const auto& p : net.places()) {
    json jp = {{"id", p.name}, {"kind", kind_text(p.kind)}};
    if (p.kind != PlaceKind::kProduction) jp["role"] = net.roles()[p.role].name;
    doc["places"].push_back(jp);
  }
  doc["transitions"] = json::array();
  doc["arcs"] = json::array();
  auto var_text = [](const std::vector<Variable>& vars, int slot) {
    return slot < 0 ? std::string(kEpsilonText) : vars[slot].name;
  };
  for (const auto& t : net.transitions()) {
    doc["transitions"].push_back({{"id", t.name}, {"label", t.label ? json(*t.label) : json(nullptr)}});
    auto arcs = [&](const std::vector<Arc>& list, bool input) {
      for (const auto& a : list) {
        json ins = json::array();
        for (const auto& e : a.inscription)
          ins.push_back({{"case", var_text(t.case_vars, e.vars.case_slot)},
                         {"resource", var_text(t.resource_vars, e.vars.resource_slot)},
                         {"count", e.count}});
        const auto& pn = net.place(a.place).name;
        doc["arcs"].push_back({{"source", input ? pn : t.name}, {"target", input ? t.name : pn}, {"inscriptions", ins}});
      }
    };
    arcs(t.inputs, true);
    arcs(t.outputs, false);
  }
  auto marking = [&](const ColoredMarking& m) {
    json out = json::object();
    for (std::size_t p = 0; p < m.places.size(); ++p) {
      if (m.places[p].empty()) continue;
      json toks = json::array();
      for (const auto& [tok, n] : m.places[p])
        toks.push_back({{"case", display(tok.case_id)}, {"resource", display(tok.resource)}, {"count", n}});
      out[net.place(p).name] = toks;
    }
    return out;
  };
  doc["initial"] = marking(net.initial());
  doc["final"] = marking(net.final_marking());
  return doc.dump(2) + "\n";
}

}  // namespace rcnu
