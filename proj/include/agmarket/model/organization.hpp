#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace agmarket::model {

enum class Role { Customer, Broker, Provider };
enum class DependencyKind { Hardgoal, Softgoal, Task, Resource };

std::string_view to_string(Role role);
std::string_view to_string(DependencyKind kind);
std::optional<Role> role_from_string(std::string_view text);
std::optional<DependencyKind> dependency_kind_from_string(std::string_view text);

/// Softgoal dependums must name one of the market's soft criteria.
bool is_known_criterion(std::string_view name);

struct Actor {
  std::string name;
  Role role = Role::Customer;

  friend bool operator==(const Actor&, const Actor&) = default;
};

struct Dependency {
  std::string dependor;
  std::string dependee;
  std::string dependum;
  DependencyKind kind = DependencyKind::Resource;

  friend bool operator==(const Dependency&, const Dependency&) = default;
};

/// `satisfies` lists dependums. A capacity covers a dependency when the
/// dependum matches and the owner is one of its two endpoints.
struct Capacity {
  std::string owner;
  std::string name;
  std::vector<std::string> satisfies;

  friend bool operator==(const Capacity&, const Capacity&) = default;
};

/// SR-model link, kept for documentation only.
struct RationaleLink {
  std::string actor;
  std::string relation;  // "means-ends" or "decomposition"
  std::string parent;
  std::string child;
  std::string capacity;

  friend bool operator==(const RationaleLink&, const RationaleLink&) = default;
};

using Edge = std::pair<std::string, std::string>;

struct OrganizationalModel {
  std::vector<Actor> actors;
  std::vector<Dependency> dependencies;
  std::vector<Capacity> capacities;
  /// Declared acquaintance edges; absent means "use the derived graph".
  std::optional<std::set<Edge>> acquaintances;
  std::vector<RationaleLink> rationale;

  const Actor* find_actor(std::string_view name) const;
  bool remove_capacity(std::string_view owner, std::string_view name);
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  /// JSON pointer or "line N".
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

class UnknownActorReference : public ParseError {
 public:
  using ParseError::ParseError;
};

/// `base` prefixes the JSON pointers in diagnostics (e.g. "/model").
OrganizationalModel load_model(const nlohmann::json& source, const std::string& base = "");
/// Parses text first; syntax errors are reported by line.
OrganizationalModel load_model_text(std::string_view text);
nlohmann::json to_json(const OrganizationalModel& m);

/// Line number (1-based) of byte offset `pos` in `text`.
std::size_t line_of(std::string_view text, std::size_t pos);

class AcquaintanceGraph {
 public:
  AcquaintanceGraph() = default;
  explicit AcquaintanceGraph(std::set<Edge> edges) : edges_(std::move(edges)) {}

  bool allows(const std::string& from, const std::string& to) const {
    return edges_.contains({from, to});
  }
  const std::set<Edge>& edges() const { return edges_; }

 private:
  std::set<Edge> edges_;
};

/// Edges a dependency needs: both directions for resources and goals
/// (solicit and deliver), dependor -> dependee only for tasks.
std::vector<Edge> required_edges(const Dependency& d);
AcquaintanceGraph derive_acquaintances(const OrganizationalModel& m);
/// Declared graph when present, derived otherwise.
AcquaintanceGraph effective_acquaintances(const OrganizationalModel& m);

struct UncoveredDependency {
  Dependency dependency;
  std::string actor;
};

struct MissingEdge {
  Dependency dependency;
  Edge edge;
};

struct ValidationReport {
  std::vector<UncoveredDependency> uncovered;
  /// "owner/name" of capacities that cover no dependency.
  std::vector<std::string> idle_capacities;
  std::vector<MissingEdge> missing_edges;

  bool valid() const { return uncovered.empty() && idle_capacities.empty() && missing_edges.empty(); }
  /// Distinct uncovered dependums, in dependency order.
  std::vector<std::string> uncovered_dependums() const;
  nlohmann::json to_json() const;
};

ValidationReport validate_model(const OrganizationalModel& m);

}  // namespace agmarket::model
