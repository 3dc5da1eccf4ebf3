#pragma once

// Logical forms, world models, and their canonical textual encoding.
//
// A logical form is a predicate applied to a fixed set of typed properties.
// Agent slots are positional per predicate:
//
//   container   agent
//   comparison  agentA, agentB            count(agentA) = count(agentB) + q
//   transfer    receiver_agent, sender_agent
//   partwhole   whole_agent (a conjunction)
//   comp-eq     agentA, agentB, agentC, agentD
//                                         count(A) - count(B) = count(C) - count(D)

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mathgap {

enum class Predicate { Container, Comparison, Transfer, PartWhole, CompEq };

inline constexpr std::array<Predicate, 5> kAllPredicates = {
    Predicate::Container, Predicate::Comparison, Predicate::Transfer,
    Predicate::PartWhole, Predicate::CompEq};

std::string_view to_string(Predicate p) noexcept;
Predicate parse_predicate(std::string_view text);

/// An atomic agent or an ordered conjunction of distinct atomic agents.
struct Agent {
  std::vector<std::string> members;

  Agent() = default;
  explicit Agent(std::string name) : members{std::move(name)} {}
  explicit Agent(std::vector<std::string> names) : members(std::move(names)) {}

  bool is_atomic() const noexcept { return members.size() == 1; }
  const std::string& name() const;

  friend bool operator==(const Agent&, const Agent&) = default;
  friend auto operator<=>(const Agent&, const Agent&) = default;
};

/// An entity (or conjunction of entities) with optional attribute and unit.
struct Entity {
  std::vector<std::string> members;
  std::optional<std::string> attribute;
  std::optional<std::string> unit;

  Entity() = default;
  explicit Entity(std::string name, std::optional<std::string> attr = std::nullopt,
                  std::optional<std::string> unit_name = std::nullopt)
      : members{std::move(name)}, attribute(std::move(attr)), unit(std::move(unit_name)) {}

  bool is_atomic() const noexcept { return members.size() == 1; }

  friend bool operator==(const Entity&, const Entity&) = default;
  friend auto operator<=>(const Entity&, const Entity&) = default;
};

/// An exact integer, or the question placeholder when `value` is empty.
struct Quantity {
  std::optional<std::int64_t> value;

  static Quantity placeholder() { return Quantity{}; }
  static Quantity of(std::int64_t v) { return Quantity{v}; }
  bool is_placeholder() const noexcept { return !value.has_value(); }

  friend bool operator==(const Quantity&, const Quantity&) = default;
  friend auto operator<=>(const Quantity&, const Quantity&) = default;
};

struct LogicalForm {
  Predicate predicate = Predicate::Container;
  std::array<std::optional<Agent>, 4> agents;
  std::optional<Quantity> quantity;
  std::optional<Entity> entity;

  static LogicalForm container(Agent agent, Quantity q, Entity e);
  static LogicalForm comparison(Agent a, Agent b, Quantity q, Entity e);
  static LogicalForm transfer(Agent receiver, Agent sender, Quantity q, Entity e);
  static LogicalForm partwhole(Agent whole, Quantity q, Entity e);
  static LogicalForm comp_eq(Agent a, Agent b, Agent c, Agent d, Entity e);

  // Checked accessors; throw Error(Schema) when the property is absent.
  const Agent& agent(std::size_t slot) const;
  const Entity& ent() const;
  std::int64_t value() const;

  bool has_placeholder() const noexcept {
    return quantity.has_value() && quantity->is_placeholder();
  }

  friend bool operator==(const LogicalForm&, const LogicalForm&) = default;
  friend auto operator<=>(const LogicalForm&, const LogicalForm&) = default;
};

/// Number of agent slots the predicate uses.
std::size_t agent_arity(Predicate p) noexcept;
bool has_quantity_property(Predicate p) noexcept;
std::string_view agent_property_name(Predicate p, std::size_t slot) noexcept;
std::string_view entity_property_name(Predicate p) noexcept;

/// True when the forms are identical, or are comparisons stated from opposite
/// sides: comparison(a, b, q, e) and comparison(b, a, -q, e).
bool semantically_equal(const LogicalForm& lhs, const LogicalForm& rhs);

struct ValidityReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

enum class PlaceholderPolicy { Forbidden, Allowed };

ValidityReport validate_form(const LogicalForm& form,
                             PlaceholderPolicy placeholders = PlaceholderPolicy::Forbidden);

/// Replaces the single placeholder quantity of `question` with `value`.
LogicalForm substitute_answer(const LogicalForm& question, std::int64_t value);

struct WorldModel {
  std::vector<LogicalForm> body;
  LogicalForm question;

  friend bool operator==(const WorldModel&, const WorldModel&) = default;
};

ValidityReport validate_world_model(const WorldModel& model);

// Canonical encoding: `predicate(prop=value, ...)`, properties in the fixed
// per-predicate order, conjunction members joined by `&`, the placeholder
// written as `?`. Reserved characters inside names are backslash-escaped.
std::string encode(const LogicalForm& form);
LogicalForm parse_form(std::string_view text);

std::ostream& operator<<(std::ostream& os, const LogicalForm& form);

}  // namespace mathgap
