#include "mathgap/inference.hpp"

#include <algorithm>
#include <set>

#include "mathgap/error.hpp"

namespace mathgap {

namespace {

constexpr std::array<InferenceRule, 5> kRules = {{
    {RuleId::CompAdd, 2, true, "container(a, q1, e), comparison(b, a, q2, e)",
     "container(b, q1 + q2, e)"},
    {RuleId::TransferApply, 2, false, "container(a, q1, e), transfer(a, b, q2, e)",
     "container(a, q1 + q2, e)"},
    {RuleId::CompDeduce, 2, true, "container(a, q1, e), container(b, q2, e)",
     "comparison(b, a, q2 - q1, e)"},
    {RuleId::PartWholeSum, std::nullopt, true, "container(a_i, q_i, e_i) for i = 1..n",
     "partwhole(a_1 & ... & a_n, q_1 + ... + q_n, e_1 & ... & e_n)"},
    {RuleId::CompEqAdd, 3, true,
     "container(a, q1, e), comparison(d, c, q2, e), comp-eq(b, a, d, c, e)",
     "container(b, q1 + q2, e)"},
}};

[[noreturn]] void schema_error(RuleId rule, const std::string& why) {
  throw Error(ErrorCode::Schema, std::string(to_string(rule)) + ": " + why);
}

[[noreturn]] void linkage_error(RuleId rule, const std::string& why) {
  throw Error(ErrorCode::Schema, std::string(to_string(rule)) + ": agent linkage mismatch (" +
                                     why + ")");
}

void require_same_entity(RuleId rule, const LogicalForm& a, const LogicalForm& b) {
  if (a.ent() != b.ent()) {
    throw Error(ErrorCode::Schema, std::string(to_string(rule)) + ": entity mismatch (" +
                                       encode(a) + " vs " + encode(b) + ")");
  }
}

// Finds exactly one premise with the given predicate.
const LogicalForm& pick(RuleId rule, std::span<const LogicalForm> premises, Predicate p) {
  const LogicalForm* found = nullptr;
  for (const auto& f : premises) {
    if (f.predicate != p) continue;
    if (found) schema_error(rule, "more than one " + std::string(to_string(p)) + " premise");
    found = &f;
  }
  if (!found) schema_error(rule, "missing " + std::string(to_string(p)) + " premise");
  return *found;
}

void require_arity(RuleId rule, std::span<const LogicalForm> premises) {
  const auto& info = rule_info(rule);
  if (info.arity ? premises.size() != *info.arity : premises.size() < 2) {
    schema_error(rule, "wrong number of premises (" + std::to_string(premises.size()) + ")");
  }
}

LogicalForm apply_comp_add(std::span<const LogicalForm> premises) {
  constexpr RuleId rule = RuleId::CompAdd;
  const auto& cont = pick(rule, premises, Predicate::Container);
  const auto& comp = pick(rule, premises, Predicate::Comparison);
  require_same_entity(rule, cont, comp);
  const Agent& known = cont.agent(0);
  if (comp.agent(1) == known) {
    return LogicalForm::container(comp.agent(0), Quantity::of(checked_add(cont.value(), comp.value())),
                                  cont.ent());
  }
  if (comp.agent(0) == known) {
    return LogicalForm::container(comp.agent(1), Quantity::of(checked_sub(cont.value(), comp.value())),
                                  cont.ent());
  }
  linkage_error(rule, "comparison does not mention " + known.members.front());
}

LogicalForm apply_transfer(std::span<const LogicalForm> premises) {
  constexpr RuleId rule = RuleId::TransferApply;
  const auto& cont = premises[0];
  const auto& move = premises[1];
  if (cont.predicate != Predicate::Container || move.predicate != Predicate::Transfer) {
    schema_error(rule, "premises must be [container, transfer] in this order");
  }
  require_same_entity(rule, cont, move);
  const Agent& holder = cont.agent(0);
  if (move.agent(0) == holder) {
    return LogicalForm::container(holder, Quantity::of(checked_add(cont.value(), move.value())),
                                  cont.ent());
  }
  if (move.agent(1) == holder) {
    return LogicalForm::container(holder, Quantity::of(checked_sub(cont.value(), move.value())),
                                  cont.ent());
  }
  linkage_error(rule, "transfer does not involve " + holder.members.front());
}

LogicalForm apply_comp_deduce(std::span<const LogicalForm> premises) {
  constexpr RuleId rule = RuleId::CompDeduce;
  const auto& first = premises[0];
  const auto& second = premises[1];
  if (first.predicate != Predicate::Container || second.predicate != Predicate::Container) {
    schema_error(rule, "premises must be two containers");
  }
  require_same_entity(rule, first, second);
  if (first.agent(0) == second.agent(0)) linkage_error(rule, "both containers share an agent");
  return LogicalForm::comparison(second.agent(0), first.agent(0),
                                 Quantity::of(checked_sub(second.value(), first.value())),
                                 first.ent());
}

LogicalForm apply_partwhole_sum(std::span<const LogicalForm> premises) {
  constexpr RuleId rule = RuleId::PartWholeSum;
  std::vector<std::string> agents;
  std::vector<std::string> entities;
  std::int64_t total = 0;
  const Entity& first_entity = premises.front().ent();
  for (const auto& f : premises) {
    if (f.predicate != Predicate::Container && f.predicate != Predicate::PartWhole) {
      schema_error(rule, "premises must be containers or partwholes");
    }
    const Entity& e = f.ent();
    if (e.attribute != first_entity.attribute || e.unit != first_entity.unit) {
      throw Error(ErrorCode::Schema, "partwhole-sum: entity mismatch (attribute/unit differ)");
    }
    for (const auto& a : f.agent(0).members) {
      if (std::find(agents.begin(), agents.end(), a) != agents.end()) {
        linkage_error(rule, "agent '" + a + "' counted twice");
      }
      agents.push_back(a);
    }
    for (const auto& name : e.members) {
      if (std::find(entities.begin(), entities.end(), name) == entities.end()) {
        entities.push_back(name);
      }
    }
    total = checked_add(total, f.value());
  }
  Entity whole;
  whole.members = std::move(entities);
  whole.attribute = first_entity.attribute;
  whole.unit = first_entity.unit;
  return LogicalForm::partwhole(Agent(std::move(agents)), Quantity::of(total), std::move(whole));
}

LogicalForm apply_comp_eq_add(std::span<const LogicalForm> premises) {
  constexpr RuleId rule = RuleId::CompEqAdd;
  const auto& cont = pick(rule, premises, Predicate::Container);
  const auto& comp = pick(rule, premises, Predicate::Comparison);
  const auto& eq = pick(rule, premises, Predicate::CompEq);
  require_same_entity(rule, cont, comp);
  require_same_entity(rule, cont, eq);

  // Difference count(agentC) - count(agentD) of the comp-eq, read off the
  // comparison from whichever side it is stated.
  std::int64_t diff = 0;
  if (comp.agent(0) == eq.agent(2) && comp.agent(1) == eq.agent(3)) {
    diff = comp.value();
  } else if (comp.agent(0) == eq.agent(3) && comp.agent(1) == eq.agent(2)) {
    diff = checked_sub(0, comp.value());
  } else {
    linkage_error(rule, "comparison does not relate the comp-eq's third and fourth agents");
  }
  // count(A) - count(B) = diff
  if (eq.agent(1) == cont.agent(0)) {
    return LogicalForm::container(eq.agent(0), Quantity::of(checked_add(cont.value(), diff)),
                                  cont.ent());
  }
  if (eq.agent(0) == cont.agent(0)) {
    return LogicalForm::container(eq.agent(1), Quantity::of(checked_sub(cont.value(), diff)),
                                  cont.ent());
  }
  linkage_error(rule, "container agent is not one of the comp-eq's first two agents");
}

}  // namespace

std::string_view to_string(RuleId rule) noexcept {
  switch (rule) {
    case RuleId::CompAdd: return "comp-add";
    case RuleId::TransferApply: return "transfer-apply";
    case RuleId::CompDeduce: return "comp-deduce";
    case RuleId::PartWholeSum: return "partwhole-sum";
    case RuleId::CompEqAdd: return "comp-eq-add";
  }
  return "?";
}

RuleId parse_rule(std::string_view text) {
  for (RuleId r : kAllRules) {
    if (to_string(r) == text) return r;
  }
  throw Error(ErrorCode::Parse, "unknown inference rule '" + std::string(text) + "'");
}

const InferenceRule& rule_info(RuleId rule) noexcept {
  return kRules[static_cast<std::size_t>(rule)];
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw Error(ErrorCode::Overflow, "overflow in " + std::to_string(a) + " + " + std::to_string(b));
  }
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_sub_overflow(a, b, &r)) {
    throw Error(ErrorCode::Overflow, "overflow in " + std::to_string(a) + " - " + std::to_string(b));
  }
  return r;
}

LogicalForm apply_rule(RuleId rule, std::span<const LogicalForm> premises) {
  require_arity(rule, premises);
  switch (rule) {
    case RuleId::CompAdd: return apply_comp_add(premises);
    case RuleId::TransferApply: return apply_transfer(premises);
    case RuleId::CompDeduce: return apply_comp_deduce(premises);
    case RuleId::PartWholeSum: return apply_partwhole_sum(premises);
    case RuleId::CompEqAdd: return apply_comp_eq_add(premises);
  }
  schema_error(rule, "unknown rule");
}

ProofStep make_step(RuleId rule, std::vector<LogicalForm> premises) {
  LogicalForm conclusion = apply_rule(rule, premises);
  return ProofStep{rule, std::move(premises), std::move(conclusion)};
}

ProofStep swap_premises(const ProofStep& step, std::span<const std::size_t> permutation) {
  if (!rule_info(step.rule).commutative) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(to_string(step.rule)) + " is not commutative; premises cannot be reordered");
  }
  if (permutation.size() != step.premises.size()) {
    throw Error(ErrorCode::InvalidArgument, "permutation size does not match premise count");
  }
  std::vector<bool> used(permutation.size(), false);
  std::vector<LogicalForm> reordered;
  reordered.reserve(permutation.size());
  for (std::size_t i : permutation) {
    if (i >= used.size() || used[i]) {
      throw Error(ErrorCode::InvalidArgument, "not a permutation");
    }
    used[i] = true;
    reordered.push_back(step.premises[i]);
  }
  return make_step(step.rule, std::move(reordered));
}

// ---------------------------------------------------------------------------

bool is_variable(std::string_view name) noexcept { return !name.empty() && name.front() == '?'; }

std::vector<PremiseTemplate> match_conclusion(const LogicalForm& goal,
                                              std::span<const RuleId> allowed,
                                              FreshNames& fresh) {
  std::vector<PremiseTemplate> out;
  const auto unset = Quantity::placeholder();
  auto allows = [&](RuleId r) { return std::find(allowed.begin(), allowed.end(), r) != allowed.end(); };

  switch (goal.predicate) {
    case Predicate::Container: {
      const Agent& b = goal.agent(0);
      const Entity& e = goal.ent();
      if (allows(RuleId::CompAdd)) {
        Agent a(fresh.agent());
        out.push_back({RuleId::CompAdd,
                       {LogicalForm::container(a, unset, e), LogicalForm::comparison(b, a, unset, e)}});
      }
      if (allows(RuleId::TransferApply)) {
        out.push_back({RuleId::TransferApply,
                       {LogicalForm::container(b, unset, e),
                        LogicalForm::transfer(b, Agent(fresh.agent()), unset, e)}});
        out.push_back({RuleId::TransferApply,
                       {LogicalForm::container(b, unset, e),
                        LogicalForm::transfer(Agent(fresh.agent()), b, unset, e)}});
      }
      if (allows(RuleId::CompEqAdd)) {
        Agent a(fresh.agent());
        Agent d(fresh.agent());
        Agent c(fresh.agent());
        out.push_back({RuleId::CompEqAdd,
                       {LogicalForm::container(a, unset, e), LogicalForm::comparison(d, c, unset, e),
                        LogicalForm::comp_eq(b, a, d, c, e)}});
      }
      break;
    }
    case Predicate::Comparison: {
      if (allows(RuleId::CompDeduce)) {
        const Entity& e = goal.ent();
        out.push_back({RuleId::CompDeduce,
                       {LogicalForm::container(goal.agent(1), unset, e),
                        LogicalForm::container(goal.agent(0), unset, e)}});
      }
      break;
    }
    case Predicate::PartWhole: {
      if (allows(RuleId::PartWholeSum) && goal.agent(0).members.size() >= 2) {
        const auto& members = goal.agent(0).members;
        const Entity& whole = goal.ent();
        PremiseTemplate t{RuleId::PartWholeSum, {}};
        for (std::size_t i = 0; i < members.size(); ++i) {
          Entity part;
          if (whole.members.size() == members.size()) {
            part.members = {whole.members[i]};
          } else if (whole.members.size() == 1) {
            part.members = whole.members;
          } else {
            part.members = {fresh.entity()};
          }
          part.attribute = whole.attribute;
          part.unit = whole.unit;
          t.premises.push_back(LogicalForm::container(Agent(members[i]), unset, std::move(part)));
        }
        out.push_back(std::move(t));
      }
      break;
    }
    case Predicate::Transfer:
    case Predicate::CompEq:
      break;
  }
  return out;
}

std::vector<PremiseTemplate> match_conclusion(const LogicalForm& goal,
                                              std::span<const RuleId> allowed) {
  FreshNames fresh;
  return match_conclusion(goal, allowed, fresh);
}

// ---------------------------------------------------------------------------

ProofTree::ProofTree(LogicalForm root_label) {
  nodes_.push_back(ProofNode{std::move(root_label), std::nullopt, {}});
}

ProofTree ProofTree::axiom(LogicalForm label) { return ProofTree(std::move(label)); }

ProofTree ProofTree::derive(RuleId rule, std::vector<ProofTree> premises) {
  std::vector<LogicalForm> labels;
  labels.reserve(premises.size());
  for (const auto& p : premises) labels.push_back(p[root()].label);
  return derive_labeled(rule, apply_rule(rule, labels), std::move(premises));
}

ProofTree ProofTree::derive_labeled(RuleId rule, LogicalForm label,
                                    std::vector<ProofTree> premises) {
  ProofTree tree(std::move(label));
  tree.nodes_[0].rule = rule;
  for (const auto& p : premises) {
    const std::size_t child = tree.graft(p);
    tree.nodes_[0].children.push_back(child);
  }
  return tree;
}

std::size_t ProofTree::graft(const ProofTree& subtree) {
  const std::size_t offset = nodes_.size();
  for (ProofNode node : subtree.nodes_) {
    for (auto& c : node.children) c += offset;
    nodes_.push_back(std::move(node));
  }
  return offset;
}

std::vector<std::size_t> ProofTree::expand(std::size_t leaf, RuleId rule,
                                           std::vector<LogicalForm> premises) {
  if (!nodes_.at(leaf).is_axiom()) {
    throw Error(ErrorCode::InvalidArgument, "only leaves can be expanded");
  }
  std::vector<std::size_t> added;
  for (auto& p : premises) {
    added.push_back(nodes_.size());
    nodes_.push_back(ProofNode{std::move(p), std::nullopt, {}});
  }
  nodes_[leaf].rule = rule;
  nodes_[leaf].children = added;
  return added;
}

std::vector<std::size_t> ProofTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i : post_order()) {
    if (nodes_[i].is_axiom()) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> ProofTree::post_order() const {
  std::vector<std::size_t> out;
  if (nodes_.empty()) return out;
  out.reserve(nodes_.size());
  // (node, next child to visit)
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root(), 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < nodes_[node].children.size()) {
      const std::size_t child = nodes_[node].children[next++];
      stack.emplace_back(child, 0);
    } else {
      out.push_back(node);
      stack.pop_back();
    }
  }
  return out;
}

std::vector<std::optional<std::size_t>> ProofTree::parents() const {
  std::vector<std::optional<std::size_t>> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t c : nodes_[i].children) out[c] = i;
  }
  return out;
}

std::vector<std::size_t> ProofTree::depths() const {
  std::vector<std::size_t> out(nodes_.size(), 0);
  if (nodes_.empty()) return out;
  std::vector<std::size_t> queue{root()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t n = queue[head];
    for (std::size_t c : nodes_[n].children) {
      out[c] = out[n] + 1;
      queue.push_back(c);
    }
  }
  return out;
}

std::size_t ProofTree::height() const {
  const auto d = depths();
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

ProofStep ProofTree::step_at(std::size_t node) const {
  const ProofNode& n = nodes_.at(node);
  if (n.is_axiom()) throw Error(ErrorCode::InvalidArgument, "axioms have no proof step");
  ProofStep step{*n.rule, {}, n.label};
  for (std::size_t c : n.children) step.premises.push_back(nodes_[c].label);
  return step;
}

std::int64_t evaluate_tree(const ProofTree& tree) {
  if (tree.empty()) throw Error(ErrorCode::InvalidArgument, "empty proof tree");
  for (std::size_t i : tree.post_order()) {
    const ProofNode& node = tree[i];
    if (node.is_axiom()) {
      if (has_quantity_property(node.label.predicate)) (void)node.label.value();
      continue;
    }
    std::vector<LogicalForm> premises;
    for (std::size_t c : node.children) premises.push_back(tree[c].label);
    const LogicalForm recomputed = apply_rule(*node.rule, premises);
    if (recomputed != node.label) {
      throw Error(ErrorCode::LabelMismatch, "node " + std::to_string(i) + " is labeled " +
                                                encode(node.label) + " but its premises give " +
                                                encode(recomputed));
    }
  }
  return tree[ProofTree::root()].label.value();
}

bool is_linear(const ProofTree& tree) {
  for (const auto& node : tree.nodes()) {
    const auto derived = std::count_if(node.children.begin(), node.children.end(),
                                       [&](std::size_t c) { return !tree[c].is_axiom(); });
    if (derived > 1) return false;
  }
  return true;
}

bool only_commutative_rules(const ProofTree& tree) {
  return std::all_of(tree.nodes().begin(), tree.nodes().end(), [](const ProofNode& n) {
    return n.is_axiom() || rule_info(*n.rule).commutative;
  });
}

bool has_unique_labels(const ProofTree& tree) {
  std::set<LogicalForm> seen;
  for (const auto& node : tree.nodes()) {
    if (!seen.insert(node.label).second) return false;
  }
  return true;
}

std::vector<RuleId> rules_used(const ProofTree& tree) {
  std::vector<RuleId> out;
  for (RuleId r : kAllRules) {
    for (const auto& node : tree.nodes()) {
      if (node.rule == r) {
        out.push_back(r);
        break;
      }
    }
  }
  return out;
}

}  // namespace mathgap
