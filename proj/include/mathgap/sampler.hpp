#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mathgap/inference.hpp"
#include "mathgap/rng.hpp"
#include "mathgap/vocab.hpp"

namespace mathgap {

enum class Family { LinearDepth, LinearWidth, NonlinearDepth, OrderPerturbed };

inline constexpr std::array<Family, 4> kAllFamilies = {Family::LinearDepth, Family::LinearWidth,
                                                       Family::NonlinearDepth,
                                                       Family::OrderPerturbed};

std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view text);

std::vector<RuleId> default_rules(Family f);

/// Generation recipe for one problem.
struct TreeSpec {
  Family family = Family::LinearDepth;
  std::size_t depth = 1;
  std::size_t width = 0;     // linear-width only
  std::size_t distance = 0;  // order-perturbed only
  std::vector<RuleId> rules;
  std::uint64_t seed = 0;

  /// Family preset where `complexity` is the family's varied dimension:
  /// depth (linear-depth, nonlinear-depth), width (linear-width) or move
  /// distance (order-perturbed, depth 5).
  static TreeSpec preset(Family family, std::size_t complexity, std::uint64_t seed = 0);

  /// Throws Error(InvalidArgument) for unsatisfiable specs.
  void validate() const;

  std::size_t complexity() const noexcept;
};

enum class RootKind { Container, Comparison };

/// Caller-controlled top-down growth. Leaves are visited breadth first;
/// `should_expand` is the stopping criterion and `choose` picks one of the
/// matching rule templates.
struct GrowthPolicy {
  std::vector<RuleId> rules;
  std::function<bool(const ProofTree& partial, std::size_t leaf, std::size_t depth)> should_expand;
  std::function<std::size_t(const ProofTree& partial, std::size_t leaf, std::size_t depth,
                            std::span<const PremiseTemplate> options, Rng& rng)>
      choose;
};

ProofTree grow_tree(LogicalForm root, const GrowthPolicy& policy, Rng& rng, FreshNames& fresh);

/// Abstract tree (variable agents/entities, unset quantities) for `spec`.
ProofTree sample_tree(const TreeSpec& spec, Rng& rng);

/// Nonlinear comp/comp-eq growth to depth `depth`; the root kind is drawn
/// uniformly unless given. Depth 1 yields a single comp-add or comp-deduce step.
ProofTree sample_nonlinear_tree(std::size_t depth, Rng& rng,
                                std::optional<RootKind> root = std::nullopt);

/// Single-step tree using `rule`.
ProofTree sample_primitive_tree(RuleId rule, Rng& rng);

/// Leaf count of a nonlinear tree: 2^D plus the number of comp-eq leaves.
std::int64_t expected_nonlinear_width(std::size_t depth, RootKind root);

struct QuantityRange {
  std::int64_t lo = 2;
  std::int64_t hi = 20;
};

/// Fills variables from the vocabulary and draws axiom quantities,
/// recomputing internal labels with apply_rule. Quantity draws are rejected
/// until every container label is non-negative and all labels are distinct.
ProofTree instantiate(const ProofTree& abstract, const Vocab& vocab, Rng& rng,
                      QuantityRange range = {});

/// Number of distinct agent names a tree mentions.
std::size_t count_agents(const ProofTree& tree);

}  // namespace mathgap
