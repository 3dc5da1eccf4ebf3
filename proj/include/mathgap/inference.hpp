#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mathgap/logic.hpp"

namespace mathgap {

enum class RuleId { CompAdd, TransferApply, CompDeduce, PartWholeSum, CompEqAdd };

inline constexpr std::array<RuleId, 5> kAllRules = {RuleId::CompAdd, RuleId::TransferApply,
                                                    RuleId::CompDeduce, RuleId::PartWholeSum,
                                                    RuleId::CompEqAdd};

std::string_view to_string(RuleId rule) noexcept;
RuleId parse_rule(std::string_view text);

struct InferenceRule {
  RuleId id;
  std::optional<std::size_t> arity;  // empty for variable arity (partwhole-sum, n >= 2)
  bool commutative;
  std::string_view premises;
  std::string_view conclusion;
};

const InferenceRule& rule_info(RuleId rule) noexcept;

/// Computes the conclusion of `rule` from concrete premises.
///
/// Premises of commutative rules are matched by predicate, so any order is
/// accepted. Comparison premises may be stated from either side (see
/// semantically_equal). transfer-apply needs [container, transfer] in that
/// order; when the container's agent is the sender the amount is subtracted.
LogicalForm apply_rule(RuleId rule, std::span<const LogicalForm> premises);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);

struct ProofStep {
  RuleId rule;
  std::vector<LogicalForm> premises;
  LogicalForm conclusion;
};

ProofStep make_step(RuleId rule, std::vector<LogicalForm> premises);

/// Reorders the premises of a commutative step and recomputes its conclusion.
ProofStep swap_premises(const ProofStep& step, std::span<const std::size_t> permutation);

// ---------------------------------------------------------------------------
// Backward matching

/// Source of fresh variable names for abstract (uninstantiated) forms.
class FreshNames {
 public:
  std::string agent() { return "?a" + std::to_string(next_agent_++); }
  std::string entity() { return "?e" + std::to_string(next_entity_++); }

 private:
  std::size_t next_agent_ = 0;
  std::size_t next_entity_ = 0;
};

bool is_variable(std::string_view name) noexcept;

struct PremiseTemplate {
  RuleId rule;
  std::vector<LogicalForm> premises;  // quantities are placeholders
};

/// Lists every way an allowed rule can conclude `goal`. Fresh agents and
/// entities come from `fresh`.
std::vector<PremiseTemplate> match_conclusion(const LogicalForm& goal,
                                              std::span<const RuleId> allowed,
                                              FreshNames& fresh);
std::vector<PremiseTemplate> match_conclusion(const LogicalForm& goal,
                                              std::span<const RuleId> allowed);

// ---------------------------------------------------------------------------
// Proof trees

struct ProofNode {
  LogicalForm label;
  std::optional<RuleId> rule;  // empty for axioms
  std::vector<std::size_t> children;

  bool is_axiom() const noexcept { return !rule.has_value(); }

  friend bool operator==(const ProofNode&, const ProofNode&) = default;
};

/// Rooted ordered tree stored as an arena; the root is always node 0.
class ProofTree {
 public:
  ProofTree() = default;
  explicit ProofTree(LogicalForm root_label);

  static ProofTree axiom(LogicalForm label);
  /// Internal node whose label is computed with apply_rule.
  static ProofTree derive(RuleId rule, std::vector<ProofTree> premises);
  /// Internal node with a caller-supplied label (not checked here).
  static ProofTree derive_labeled(RuleId rule, LogicalForm label,
                                  std::vector<ProofTree> premises);

  static constexpr std::size_t root() noexcept { return 0; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  const ProofNode& operator[](std::size_t i) const { return nodes_.at(i); }
  ProofNode& operator[](std::size_t i) { return nodes_.at(i); }
  const std::vector<ProofNode>& nodes() const noexcept { return nodes_; }

  /// Turns axiom `leaf` into a step of `rule` with the given premises as new
  /// axioms. Returns the indices of the new children.
  std::vector<std::size_t> expand(std::size_t leaf, RuleId rule,
                                  std::vector<LogicalForm> premises);

  /// Leaves in left-to-right (canonical) order.
  std::vector<std::size_t> leaves() const;
  std::vector<std::size_t> post_order() const;
  /// Distance of every node from the root, indexed by node.
  std::vector<std::size_t> depths() const;
  std::vector<std::optional<std::size_t>> parents() const;

  std::size_t height() const;
  std::size_t width() const { return leaves().size(); }

  ProofStep step_at(std::size_t node) const;

  friend bool operator==(const ProofTree&, const ProofTree&) = default;

 private:
  std::size_t graft(const ProofTree& subtree);

  std::vector<ProofNode> nodes_;
};

/// Recomputes every internal label bottom-up and returns the root quantity.
/// Throws Error(LabelMismatch) when a stored label disagrees.
std::int64_t evaluate_tree(const ProofTree& tree);

/// Every step has at most one premise that is not an axiom.
bool is_linear(const ProofTree& tree);
bool only_commutative_rules(const ProofTree& tree);
bool has_unique_labels(const ProofTree& tree);
std::vector<RuleId> rules_used(const ProofTree& tree);

}  // namespace mathgap
