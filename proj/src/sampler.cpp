#include "mathgap/sampler.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mathgap/error.hpp"

namespace mathgap {

namespace {

constexpr std::size_t kAttemptsPerNode = 1000;
constexpr std::size_t kAttemptsPerProblem = 1000;
constexpr std::size_t kReseeds = 16;

[[noreturn]] void invalid(const std::string& why) {
  throw Error(ErrorCode::InvalidArgument, why);
}

bool contains(std::span<const RuleId> rules, RuleId r) {
  return std::find(rules.begin(), rules.end(), r) != rules.end();
}

// Picks a rule uniformly among those offered, then one of its templates.
std::size_t choose_rule_then_template(std::span<const PremiseTemplate> options, Rng& rng) {
  std::vector<RuleId> offered;
  for (const auto& t : options) {
    if (!contains(offered, t.rule)) offered.push_back(t.rule);
  }
  const RuleId rule = offered[rng.index(offered.size())];
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i].rule == rule) candidates.push_back(i);
  }
  return candidates[rng.index(candidates.size())];
}

std::size_t require_rule(std::span<const PremiseTemplate> options, RuleId rule) {
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i].rule == rule) return i;
  }
  throw Error(ErrorCode::Generation, "no template for " + std::string(to_string(rule)));
}

// Leftmost path from the root: the non-axiom premise of a left-leaning linear
// tree is always the first child.
bool on_spine(const ProofTree& tree, std::size_t node) {
  const auto parents = tree.parents();
  while (parents[node]) {
    const std::size_t p = *parents[node];
    if (tree[p].children.front() != node) return false;
    node = p;
  }
  return true;
}

LogicalForm abstract_container(FreshNames& fresh) {
  return LogicalForm::container(Agent(fresh.agent()), Quantity::placeholder(),
                                Entity(fresh.entity()));
}

LogicalForm abstract_comparison(FreshNames& fresh) {
  Entity e(fresh.entity());
  return LogicalForm::comparison(Agent(fresh.agent()), Agent(fresh.agent()),
                                 Quantity::placeholder(), std::move(e));
}

LogicalForm abstract_partwhole(std::size_t width, FreshNames& fresh) {
  std::vector<std::string> agents;
  std::vector<std::string> entities;
  for (std::size_t i = 0; i < width; ++i) {
    agents.push_back(fresh.agent());
    entities.push_back(fresh.entity());
  }
  Entity e;
  e.members = std::move(entities);
  return LogicalForm::partwhole(Agent(std::move(agents)), Quantity::placeholder(), std::move(e));
}

ProofTree sample_linear(std::size_t depth, std::vector<RuleId> rules, Rng& rng) {
  FreshNames fresh;
  GrowthPolicy policy;
  policy.rules = std::move(rules);
  policy.should_expand = [depth](const ProofTree& t, std::size_t leaf, std::size_t d) {
    return d < depth && t[leaf].label.predicate == Predicate::Container && on_spine(t, leaf);
  };
  policy.choose = [](const ProofTree&, std::size_t, std::size_t,
                     std::span<const PremiseTemplate> options, Rng& r) {
    return choose_rule_then_template(options, r);
  };
  return grow_tree(abstract_container(fresh), policy, rng, fresh);
}

}  // namespace

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::LinearDepth: return "linear-depth";
    case Family::LinearWidth: return "linear-width";
    case Family::NonlinearDepth: return "nonlinear-depth";
    case Family::OrderPerturbed: return "order-perturbed";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  for (Family f : kAllFamilies) {
    if (to_string(f) == text) return f;
  }
  throw Error(ErrorCode::Parse, "unknown family '" + std::string(text) + "'");
}

std::vector<RuleId> default_rules(Family f) {
  switch (f) {
    case Family::LinearDepth: return {RuleId::CompAdd, RuleId::TransferApply};
    case Family::LinearWidth: return {RuleId::PartWholeSum};
    case Family::NonlinearDepth: return {RuleId::CompAdd, RuleId::CompDeduce, RuleId::CompEqAdd};
    case Family::OrderPerturbed: return {RuleId::CompAdd};
  }
  return {};
}

TreeSpec TreeSpec::preset(Family family, std::size_t complexity, std::uint64_t seed) {
  TreeSpec spec;
  spec.family = family;
  spec.rules = default_rules(family);
  spec.seed = seed;
  switch (family) {
    case Family::LinearDepth:
    case Family::NonlinearDepth:
      spec.depth = complexity;
      break;
    case Family::LinearWidth:
      spec.depth = 1;
      spec.width = complexity;
      break;
    case Family::OrderPerturbed:
      spec.depth = 5;
      spec.distance = complexity;
      break;
  }
  return spec;
}

std::size_t TreeSpec::complexity() const noexcept {
  switch (family) {
    case Family::LinearWidth: return width;
    case Family::OrderPerturbed: return distance;
    default: return depth;
  }
}

void TreeSpec::validate() const {
  const auto allowed = default_rules(family);
  if (rules.empty()) invalid("no inference rules selected");
  for (RuleId r : rules) {
    if (!contains(allowed, r)) {
      invalid(std::string(to_string(r)) + " is not available for the " +
              std::string(to_string(family)) + " family");
    }
  }
  if (depth < 1) invalid("depth must be at least 1");
  switch (family) {
    case Family::LinearDepth:
      break;
    case Family::LinearWidth:
      if (width < 2) invalid("width must be at least 2");
      if (depth != 1) invalid("linear-width problems have depth 1");
      break;
    case Family::NonlinearDepth:
      if (rules.size() != allowed.size()) {
        invalid("nonlinear-depth growth needs comp-add, comp-deduce and comp-eq-add");
      }
      break;
    case Family::OrderPerturbed:
      if (distance > depth) {
        invalid("move distance " + std::to_string(distance) + " needs at least " +
                std::to_string(distance + 1) + " leaves");
      }
      break;
  }
}

ProofTree grow_tree(LogicalForm root, const GrowthPolicy& policy, Rng& rng, FreshNames& fresh) {
  ProofTree tree(std::move(root));
  std::vector<std::pair<std::size_t, std::size_t>> queue{{ProofTree::root(), 0}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [leaf, depth] = queue[head];
    if (!policy.should_expand(tree, leaf, depth)) continue;
    auto options = match_conclusion(tree[leaf].label, policy.rules, fresh);
    if (options.empty()) continue;
    const std::size_t pick = policy.choose(tree, leaf, depth, options, rng);
    auto& chosen = options.at(pick);
    for (std::size_t child : tree.expand(leaf, chosen.rule, std::move(chosen.premises))) {
      queue.emplace_back(child, depth + 1);
    }
  }
  return tree;
}

ProofTree sample_nonlinear_tree(std::size_t depth, Rng& rng, std::optional<RootKind> root) {
  if (depth < 1) invalid("nonlinear depth must be at least 1");
  const RootKind kind = root ? *root : (rng.coin() ? RootKind::Comparison : RootKind::Container);
  FreshNames fresh;
  GrowthPolicy policy;
  policy.rules = default_rules(Family::NonlinearDepth);
  policy.should_expand = [depth](const ProofTree& t, std::size_t leaf, std::size_t d) {
    return d < depth && t[leaf].label.predicate != Predicate::CompEq;
  };
  policy.choose = [depth](const ProofTree& t, std::size_t leaf, std::size_t d,
                          std::span<const PremiseTemplate> options, Rng&) {
    if (t[leaf].label.predicate == Predicate::Comparison) {
      return require_rule(options, RuleId::CompDeduce);
    }
    return require_rule(options, d + 1 == depth ? RuleId::CompAdd : RuleId::CompEqAdd);
  };
  LogicalForm label =
      kind == RootKind::Container ? abstract_container(fresh) : abstract_comparison(fresh);
  return grow_tree(std::move(label), policy, rng, fresh);
}

ProofTree sample_tree(const TreeSpec& spec, Rng& rng) {
  spec.validate();
  switch (spec.family) {
    case Family::LinearDepth:
    case Family::OrderPerturbed:
      return sample_linear(spec.depth, spec.rules, rng);
    case Family::LinearWidth: {
      FreshNames fresh;
      ProofTree tree(abstract_partwhole(spec.width, fresh));
      auto options = match_conclusion(tree[0].label, spec.rules, fresh);
      tree.expand(ProofTree::root(), options.at(0).rule, std::move(options.at(0).premises));
      return tree;
    }
    case Family::NonlinearDepth:
      return sample_nonlinear_tree(spec.depth, rng);
  }
  invalid("unknown family");
}

ProofTree sample_primitive_tree(RuleId rule, Rng& rng) {
  FreshNames fresh;
  LogicalForm root = rule == RuleId::CompDeduce     ? abstract_comparison(fresh)
                     : rule == RuleId::PartWholeSum ? abstract_partwhole(2, fresh)
                                                    : abstract_container(fresh);
  ProofTree tree(std::move(root));
  const std::array<RuleId, 1> only{rule};
  auto options = match_conclusion(tree[0].label, only, fresh);
  if (options.empty()) invalid("no primitive problem for " + std::string(to_string(rule)));
  auto& chosen = options[rng.index(options.size())];
  tree.expand(ProofTree::root(), chosen.rule, std::move(chosen.premises));
  return tree;
}

std::int64_t expected_nonlinear_width(std::size_t depth, RootKind root) {
  if (depth < 2) invalid("the width formula needs depth >= 2");
  if (depth > 60) invalid("depth too large");
  // comp-eq leaves created while expanding level d
  std::vector<std::int64_t> comp_eq(depth - 1);
  comp_eq[0] = root == RootKind::Container ? 1 : 0;
  if (comp_eq.size() > 1) comp_eq[1] = root == RootKind::Container ? 1 : 2;
  for (std::size_t d = 2; d < comp_eq.size(); ++d) {
    comp_eq[d] = checked_add(comp_eq[d - 1], checked_add(comp_eq[d - 2], comp_eq[d - 2]));
  }
  std::int64_t width = std::int64_t{1} << depth;
  for (std::int64_t c : comp_eq) width = checked_add(width, c);
  return width;
}

// ---------------------------------------------------------------------------
// Instantiation

namespace {

struct Assignment {
  std::map<std::string, std::string> agents;
  std::map<std::string, std::string> entities;
  std::optional<std::string> attribute;
  std::optional<std::string> unit;
};

std::vector<std::string> rename(const std::vector<std::string>& members,
                                const std::map<std::string, std::string>& names) {
  std::vector<std::string> out;
  out.reserve(members.size());
  for (const auto& m : members) {
    auto it = names.find(m);
    out.push_back(it == names.end() ? m : it->second);
  }
  return out;
}

LogicalForm rename(const LogicalForm& form, const Assignment& a) {
  LogicalForm out = form;
  for (auto& agent : out.agents) {
    if (agent) agent->members = rename(agent->members, a.agents);
  }
  if (out.entity) {
    out.entity->members = rename(out.entity->members, a.entities);
    // Conjunctions list distinct entities.
    std::vector<std::string> distinct;
    for (auto& m : out.entity->members) {
      if (std::find(distinct.begin(), distinct.end(), m) == distinct.end()) distinct.push_back(m);
    }
    out.entity->members = std::move(distinct);
    out.entity->attribute = a.attribute;
    out.entity->unit = a.unit;
  }
  return out;
}

class QuantitySampler {
 public:
  QuantitySampler(ProofTree& tree, QuantityRange range) : tree_(tree), range_(range) {}

  bool assign(std::size_t node, Rng& rng) {
    ProofNode& n = tree_[node];
    if (n.is_axiom()) {
      draw_axiom(n.label, rng);
      return true;
    }
    for (std::size_t attempt = 0; attempt < kAttemptsPerNode; ++attempt) {
      bool children_ok = true;
      for (std::size_t c : tree_[node].children) {
        if (!assign(c, rng)) {
          children_ok = false;
          break;
        }
      }
      if (!children_ok) return false;
      if (auto label = conclude(node)) {
        tree_[node].label = std::move(*label);
        return true;
      }
    }
    return false;
  }

  std::optional<LogicalForm> conclude(std::size_t node) const {
    std::vector<LogicalForm> premises;
    for (std::size_t c : tree_[node].children) premises.push_back(tree_[c].label);
    try {
      LogicalForm label = apply_rule(*tree_[node].rule, premises);
      if (label.predicate == Predicate::Container && label.value() < 0) return std::nullopt;
      return label;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Overflow) return std::nullopt;
      throw;
    }
  }

 private:
  void draw_axiom(LogicalForm& label, Rng& rng) const {
    switch (label.predicate) {
      case Predicate::CompEq:
        return;
      case Predicate::Comparison: {
        const std::int64_t magnitude = rng.uniform_int(range_.lo, range_.hi);
        label.quantity = Quantity::of(rng.coin() ? magnitude : -magnitude);
        return;
      }
      default:
        label.quantity = Quantity::of(rng.uniform_int(range_.lo, range_.hi));
    }
  }

  ProofTree& tree_;
  QuantityRange range_;
};

}  // namespace

std::size_t count_agents(const ProofTree& tree) {
  std::set<std::string> names;
  for (const auto& node : tree.nodes()) {
    for (const auto& agent : node.label.agents) {
      if (agent) names.insert(agent->members.begin(), agent->members.end());
    }
  }
  return names.size();
}

ProofTree instantiate(const ProofTree& abstract, const Vocab& vocab, Rng& rng,
                      QuantityRange range) {
  if (range.lo < 0 || range.lo > range.hi) invalid("bad quantity range");

  std::vector<std::string> agent_vars;
  std::vector<std::string> entity_vars;
  bool has_partwhole = false;
  for (const auto& node : abstract.nodes()) {
    const auto& label = node.label;
    has_partwhole |= label.predicate == Predicate::PartWhole;
    for (const auto& agent : label.agents) {
      if (!agent) continue;
      for (const auto& m : agent->members) {
        if (is_variable(m) && std::find(agent_vars.begin(), agent_vars.end(), m) == agent_vars.end()) {
          agent_vars.push_back(m);
        }
      }
    }
    if (label.entity) {
      for (const auto& m : label.entity->members) {
        if (is_variable(m) && std::find(entity_vars.begin(), entity_vars.end(), m) == entity_vars.end()) {
          entity_vars.push_back(m);
        }
      }
    }
  }

  Assignment assignment;
  // Agents without replacement (partial Fisher-Yates over indices).
  const auto& names = vocab.agents_for(agent_vars.size());
  std::vector<std::size_t> order(names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = 0; i < agent_vars.size(); ++i) {
    std::swap(order[i], order[i + rng.index(order.size() - i)]);
    assignment.agents[agent_vars[i]] = names[order[i]];
  }

  if (has_partwhole) {
    const auto groups = vocab.categories();
    if (groups.empty()) {
      throw Error(ErrorCode::VocabularyExhausted, "no entity category with two or more members");
    }
    auto it = groups.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(rng.index(groups.size())));
    for (const auto& v : entity_vars) {
      assignment.entities[v] = it->second[rng.index(it->second.size())];
    }
  } else {
    const std::string& entity = vocab.entities[rng.index(vocab.entities.size())];
    for (const auto& v : entity_vars) assignment.entities[v] = entity;
  }
  if (rng.coin()) assignment.attribute = vocab.attributes[rng.index(vocab.attributes.size())];
  if (rng.coin()) assignment.unit = vocab.units[rng.index(vocab.units.size())];

  ProofTree named = abstract;
  for (std::size_t i = 0; i < named.size(); ++i) named[i].label = rename(abstract[i].label, assignment);

  const std::uint64_t base = rng.next();
  for (std::size_t round = 0; round < kReseeds; ++round) {
    Rng quantities(mix_seed(base, round));
    for (std::size_t attempt = 0; attempt < kAttemptsPerProblem; ++attempt) {
      ProofTree candidate = named;
      QuantitySampler sampler(candidate, range);
      if (!sampler.assign(ProofTree::root(), quantities)) continue;
      ProofNode& root = candidate[ProofTree::root()];
      // Ask comparison questions from the side that has more.
      if (root.rule == RuleId::CompDeduce && root.label.value() < 0) {
        std::reverse(root.children.begin(), root.children.end());
        auto label = sampler.conclude(ProofTree::root());
        if (!label) continue;
        candidate[ProofTree::root()].label = std::move(*label);
      }
      if (!has_unique_labels(candidate)) continue;
      return candidate;
    }
  }
  throw Error(ErrorCode::Generation, "could not draw quantities satisfying all constraints");
}

}  // namespace mathgap
