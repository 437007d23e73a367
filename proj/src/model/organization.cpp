#include "agmarket/model/organization.hpp"

#include <algorithm>
#include <array>

namespace agmarket::model {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Role, std::string_view>, 3> kRoles{{
    {Role::Customer, "customer"},
    {Role::Broker, "broker"},
    {Role::Provider, "provider"},
}};

constexpr std::array<std::pair<DependencyKind, std::string_view>, 4> kKinds{{
    {DependencyKind::Hardgoal, "hardgoal"},
    {DependencyKind::Softgoal, "softgoal"},
    {DependencyKind::Task, "task"},
    {DependencyKind::Resource, "resource"},
}};

std::string string_at(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "/" + key, "missing field");
  if (!it->is_string()) throw ParseError(where + "/" + key, "expected a string");
  auto s = it->get<std::string>();
  if (s.empty()) throw ParseError(where + "/" + key, "must not be empty");
  return s;
}

const json& array_at(const json& j, const std::string& key, const std::string& where,
                     bool required) {
  static const json empty = json::array();
  auto it = j.find(key);
  if (it == j.end()) {
    if (required) throw ParseError(where + "/" + key, "missing field");
    return empty;
  }
  if (!it->is_array()) throw ParseError(where + "/" + key, "expected an array");
  return *it;
}

bool covers(const Capacity& c, const Dependency& d) {
  if (c.owner != d.dependor && c.owner != d.dependee) return false;
  return std::find(c.satisfies.begin(), c.satisfies.end(), d.dependum) != c.satisfies.end();
}

}  // namespace

std::string_view to_string(Role role) {
  for (const auto& [r, name] : kRoles)
    if (r == role) return name;
  return "?";
}

std::string_view to_string(DependencyKind kind) {
  for (const auto& [k, name] : kKinds)
    if (k == kind) return name;
  return "?";
}

std::optional<Role> role_from_string(std::string_view text) {
  for (const auto& [r, name] : kRoles)
    if (name == text) return r;
  return std::nullopt;
}

std::optional<DependencyKind> dependency_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kKinds)
    if (name == text) return k;
  return std::nullopt;
}

bool is_known_criterion(std::string_view name) {
  return name == "cost" || name == "delivery_time" || name == "insurance";
}

const Actor* OrganizationalModel::find_actor(std::string_view name) const {
  for (const auto& a : actors)
    if (a.name == name) return &a;
  return nullptr;
}

bool OrganizationalModel::remove_capacity(std::string_view owner, std::string_view name) {
  auto n = std::erase_if(capacities,
                         [&](const Capacity& c) { return c.owner == owner && c.name == name; });
  return n > 0;
}

std::size_t line_of(std::string_view text, std::size_t pos) {
  pos = std::min(pos, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n'));
}

OrganizationalModel load_model(const json& source, const std::string& base) {
  if (!source.is_object()) throw ParseError(base.empty() ? "/" : base, "expected an object");
  OrganizationalModel m;

  const auto& actors = array_at(source, "actors", base, true);
  for (std::size_t i = 0; i < actors.size(); ++i) {
    auto where = base + "/actors/" + std::to_string(i);
    Actor a;
    a.name = string_at(actors[i], "name", where);
    auto role = role_from_string(string_at(actors[i], "role", where));
    if (!role) throw ParseError(where + "/role", "expected customer, broker or provider");
    a.role = *role;
    if (m.find_actor(a.name)) throw ParseError(where + "/name", "duplicate actor " + a.name);
    m.actors.push_back(std::move(a));
  }

  auto actor_ref = [&](const json& j, const std::string& key, const std::string& where) {
    auto name = string_at(j, key, where);
    if (!m.find_actor(name))
      throw UnknownActorReference(where + "/" + key, "unknown actor " + name);
    return name;
  };

  const auto& deps = array_at(source, "dependencies", base, false);
  if (m.actors.empty() && !deps.empty())
    throw ParseError(base + "/actors", "dependencies declared but no actors");
  for (std::size_t i = 0; i < deps.size(); ++i) {
    auto where = base + "/dependencies/" + std::to_string(i);
    Dependency d;
    d.dependor = actor_ref(deps[i], "dependor", where);
    d.dependee = actor_ref(deps[i], "dependee", where);
    d.dependum = string_at(deps[i], "dependum", where);
    auto kind = dependency_kind_from_string(string_at(deps[i], "kind", where));
    if (!kind) throw ParseError(where + "/kind", "expected hardgoal, softgoal, task or resource");
    d.kind = *kind;
    if (d.dependor == d.dependee) throw ParseError(where, "dependor equals dependee");
    if (d.kind == DependencyKind::Softgoal && !is_known_criterion(d.dependum))
      throw ParseError(where + "/dependum", "softgoal must be cost, delivery_time or insurance");
    m.dependencies.push_back(std::move(d));
  }

  const auto& caps = array_at(source, "capacities", base, false);
  for (std::size_t i = 0; i < caps.size(); ++i) {
    auto where = base + "/capacities/" + std::to_string(i);
    Capacity c;
    c.owner = actor_ref(caps[i], "owner", where);
    c.name = string_at(caps[i], "name", where);
    const auto& sat = array_at(caps[i], "satisfies", where, true);
    for (std::size_t k = 0; k < sat.size(); ++k) {
      if (!sat[k].is_string())
        throw ParseError(where + "/satisfies/" + std::to_string(k), "expected a string");
      c.satisfies.push_back(sat[k].get<std::string>());
    }
    m.capacities.push_back(std::move(c));
  }

  if (source.contains("acquaintances")) {
    const auto& edges = array_at(source, "acquaintances", base, true);
    std::set<Edge> declared;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto where = base + "/acquaintances/" + std::to_string(i);
      const auto& e = edges[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw ParseError(where, "expected [from, to]");
      for (int k = 0; k < 2; ++k)
        if (!m.find_actor(e[k].get<std::string>()))
          throw UnknownActorReference(where + "/" + std::to_string(k),
                                      "unknown actor " + e[k].get<std::string>());
      declared.emplace(e[0].get<std::string>(), e[1].get<std::string>());
    }
    m.acquaintances = std::move(declared);
  }

  const auto& links = array_at(source, "rationale", base, false);
  for (std::size_t i = 0; i < links.size(); ++i) {
    auto where = base + "/rationale/" + std::to_string(i);
    RationaleLink r;
    r.actor = actor_ref(links[i], "actor", where);
    r.relation = string_at(links[i], "relation", where);
    if (r.relation != "means-ends" && r.relation != "decomposition")
      throw ParseError(where + "/relation", "expected means-ends or decomposition");
    r.parent = string_at(links[i], "parent", where);
    r.child = string_at(links[i], "child", where);
    r.capacity = links[i].value("capacity", std::string{});
    m.rationale.push_back(std::move(r));
  }
  return m;
}

OrganizationalModel load_model_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)),
                     e.what());
  }
  return load_model(j);
}

json to_json(const OrganizationalModel& m) {
  json j;
  j["actors"] = json::array();
  for (const auto& a : m.actors) j["actors"].push_back({{"name", a.name}, {"role", to_string(a.role)}});
  j["dependencies"] = json::array();
  for (const auto& d : m.dependencies)
    j["dependencies"].push_back({{"dependor", d.dependor},
                                 {"dependee", d.dependee},
                                 {"dependum", d.dependum},
                                 {"kind", to_string(d.kind)}});
  j["capacities"] = json::array();
  for (const auto& c : m.capacities)
    j["capacities"].push_back({{"owner", c.owner}, {"name", c.name}, {"satisfies", c.satisfies}});
  if (m.acquaintances) {
    j["acquaintances"] = json::array();
    for (const auto& [from, to] : *m.acquaintances) j["acquaintances"].push_back({from, to});
  }
  if (!m.rationale.empty()) {
    j["rationale"] = json::array();
    for (const auto& r : m.rationale) {
      json link{{"actor", r.actor}, {"relation", r.relation}, {"parent", r.parent}, {"child", r.child}};
      if (!r.capacity.empty()) link["capacity"] = r.capacity;
      j["rationale"].push_back(std::move(link));
    }
  }
  return j;
}

std::vector<Edge> required_edges(const Dependency& d) {
  if (d.kind == DependencyKind::Task) return {{d.dependor, d.dependee}};
  return {{d.dependor, d.dependee}, {d.dependee, d.dependor}};
}

AcquaintanceGraph derive_acquaintances(const OrganizationalModel& m) {
  std::set<Edge> edges;
  for (const auto& d : m.dependencies)
    for (auto& e : required_edges(d)) edges.insert(std::move(e));
  return AcquaintanceGraph(std::move(edges));
}

AcquaintanceGraph effective_acquaintances(const OrganizationalModel& m) {
  return m.acquaintances ? AcquaintanceGraph(*m.acquaintances) : derive_acquaintances(m);
}

std::vector<std::string> ValidationReport::uncovered_dependums() const {
  std::vector<std::string> out;
  for (const auto& u : uncovered)
    if (std::find(out.begin(), out.end(), u.dependency.dependum) == out.end())
      out.push_back(u.dependency.dependum);
  return out;
}

json ValidationReport::to_json() const {
  json j;
  j["valid"] = valid();
  j["uncovered"] = json::array();
  for (const auto& u : uncovered)
    j["uncovered"].push_back({{"dependum", u.dependency.dependum},
                              {"kind", model::to_string(u.dependency.kind)},
                              {"dependor", u.dependency.dependor},
                              {"dependee", u.dependency.dependee},
                              {"actor", u.actor}});
  j["idle_capacities"] = idle_capacities;
  j["missing_edges"] = json::array();
  for (const auto& e : missing_edges)
    j["missing_edges"].push_back(
        {{"dependum", e.dependency.dependum}, {"from", e.edge.first}, {"to", e.edge.second}});
  return j;
}

ValidationReport validate_model(const OrganizationalModel& m) {
  ValidationReport report;
  for (const auto& d : m.dependencies) {
    for (const auto& endpoint : {d.dependor, d.dependee}) {
      bool covered = std::any_of(m.capacities.begin(), m.capacities.end(), [&](const Capacity& c) {
        return c.owner == endpoint && covers(c, d);
      });
      if (!covered) report.uncovered.push_back({d, endpoint});
    }
  }
  for (const auto& c : m.capacities) {
    bool used = std::any_of(m.dependencies.begin(), m.dependencies.end(),
                            [&](const Dependency& d) { return covers(c, d); });
    if (!used) report.idle_capacities.push_back(c.owner + "/" + c.name);
  }
  if (m.acquaintances) {
    for (const auto& d : m.dependencies)
      for (const auto& e : required_edges(d))
        if (!m.acquaintances->contains(e)) report.missing_edges.push_back({d, e});
  }
  return report;
}

}  // namespace agmarket::model
