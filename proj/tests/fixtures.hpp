#pragma once

// Hand-built trees for the worked examples used across the test binaries.

#include <string>
#include <vector>

#include "mathgap/inference.hpp"
#include "mathgap/realization.hpp"

namespace fixtures {

using namespace mathgap;

inline Entity noun(const std::string& name) { return Entity(name); }

inline ProofTree cont(const std::string& who, std::int64_t q, const Entity& e) {
  return ProofTree::axiom(LogicalForm::container(Agent(who), Quantity::of(q), e));
}

inline ProofTree comp(const std::string& a, const std::string& b, std::int64_t q, const Entity& e) {
  return ProofTree::axiom(LogicalForm::comparison(Agent(a), Agent(b), Quantity::of(q), e));
}

inline ProofTree chain(ProofTree base, const std::vector<ProofTree>& steps) {
  for (const auto& s : steps) base = ProofTree::derive(RuleId::CompAdd, {base, s});
  return base;
}

// Lucy and Emma's apples: two subproofs joined by a partwhole.
inline ProofTree apples_tree() {
  const Entity apple = noun("apple");
  ProofTree lucy = ProofTree::derive(RuleId::CompAdd, {cont("Isabella", 17, apple),
                                                       comp("Lucy", "Isabella", 10, apple)});
  ProofTree emma = ProofTree::derive(
      RuleId::CompEqAdd,
      {cont("Mia", 4, apple), comp("Jack", "Noah", 6, apple),
       ProofTree::axiom(LogicalForm::comp_eq(Agent("Emma"), Agent("Mia"), Agent("Jack"),
                                             Agent("Noah"), apple))});
  return ProofTree::derive(RuleId::PartWholeSum, {lucy, emma});
}

inline const std::vector<std::string> kApplesTemplates = {
    "[a] has [q] [e]s.", "[a] has [q] more [e]s than [b].", "[a] has [q] [e]s.",
    "[a] has [q] more [e]s than [b].",
    "The number of [e]s that [a] has more than [b] is the same as the difference between the "
    "number of [e]s that [c] has compared to [d]."};

// Red bottles of soap, linear depth 6, answer 34.
inline ProofTree soap_tree() {
  const Entity soap("soap", "red", "bottle");
  return chain(cont("Jackson", 16, soap),
               {comp("Jackson", "Abigail", 10, soap), comp("Joseph", "Abigail", 18, soap),
                comp("Joseph", "James", -14, soap), comp("Michael", "James", 2, soap),
                comp("Ryan", "Michael", -16, soap), comp("Mia", "Ryan", 10, soap)});
}

inline const std::vector<std::string> kSoapTemplates = {
    "[a] has [q] [e]s.",
    "[a] has [q] more [e]s than [b].",
    "[a] has [q] more [e]s than [b].",
    "[a] has [q] fewer [e]s than [b].",
    "[a] has [q] more [e]s than [b].",
    "[a] has [q] fewer [e]s than [b].",
    "[a] has [q] more [e]s than [b]."};

inline const std::string kSoapText =
    "Jackson has 16 red bottles of soap. Jackson has 10 more red bottles of soap than Abigail. "
    "Joseph has 18 more red bottles of soap than Abigail. Joseph has 14 fewer red bottles of "
    "soap than James. Michael has 2 more red bottles of soap than James. Ryan has 16 fewer red "
    "bottles of soap than Michael. Mia has 10 more red bottles of soap than Ryan. What is the "
    "number of red bottles of soap that Mia has?";

// Seven agents, four fruits, answer 80.
inline ProofTree fruit_tree() {
  return ProofTree::derive(
      RuleId::PartWholeSum,
      {cont("Emily", 5, noun("apple")), cont("Lily", 8, noun("banana")),
       cont("Abigail", 9, noun("banana")), cont("Benjamin", 11, noun("grape")),
       cont("Christopher", 20, noun("apple")), cont("Mila", 16, noun("grape")),
       cont("Sophia", 11, noun("watermelon"))});
}

// Yellow plates, nonlinear depth 3, answer 58.
inline ProofTree plates_tree() {
  const Entity plate("plate", "yellow");
  auto eq = [&](const char* a, const char* b, const char* c, const char* d) {
    return ProofTree::axiom(
        LogicalForm::comp_eq(Agent(a), Agent(b), Agent(c), Agent(d), plate));
  };
  ProofTree jacob =
      ProofTree::derive(RuleId::CompAdd, {cont("Ella", 11, plate), comp("Ella", "Jacob", -19, plate)});
  ProofTree evelyn_daniel =
      ProofTree::derive(RuleId::CompDeduce, {cont("Daniel", 10, plate), cont("Evelyn", 16, plate)});
  ProofTree emma = ProofTree::derive(RuleId::CompEqAdd,
                                     {jacob, evelyn_daniel, eq("Emma", "Jacob", "Evelyn", "Daniel")});
  ProofTree amelia =
      ProofTree::derive(RuleId::CompAdd, {cont("Lucy", 2, plate), comp("Amelia", "Lucy", 6, plate)});
  ProofTree sophia = ProofTree::derive(
      RuleId::CompAdd, {cont("Layla", 17, plate), comp("Layla", "Sophia", -13, plate)});
  ProofTree amelia_sophia = ProofTree::derive(RuleId::CompDeduce, {sophia, amelia});
  return ProofTree::derive(RuleId::CompEqAdd,
                           {emma, amelia_sophia, eq("Emma", "Henry", "Amelia", "Sophia")});
}

// Computers, linear depth 5, answer 14.
inline ProofTree computers_tree() {
  const Entity pc = noun("computer");
  return chain(cont("Nicholas", 19, pc),
               {comp("Lucy", "Nicholas", -6, pc), comp("Harper", "Lucy", -6, pc),
                comp("John", "Harper", 10, pc), comp("Abigail", "John", -15, pc),
                comp("Abigail", "Logan", -12, pc)});
}

inline const std::vector<std::string> kComputerTemplates = {
    "[a] has [q] [e]s.",
    "[a] has [q] fewer [e]s than [b].",
    "[a] has [q] fewer [e]s than [b].",
    "[a] has [q] more [e]s than [b].",
    "[a] has [q] fewer [e]s than [b].",
    "[a] has [q] fewer [e]s than [b]."};

inline const std::vector<std::string> kComputerSentences = {
    "Nicholas has 19 computers.",
    "Lucy has 6 fewer computers than Nicholas.",
    "Harper has 6 fewer computers than Lucy.",
    "John has 10 more computers than Harper.",
    "Abigail has 15 fewer computers than John.",
    "Abigail has 12 fewer computers than Logan."};

inline const std::string kComputerQuestion = "How many computers does Logan have in their collection?";

// Apples, linear depth 3 with "Lucy has 11 more apples than John" third.
inline ProofTree lucy_john_tree() {
  const Entity apple = noun("apple");
  return chain(cont("Mia", 4, apple), {comp("John", "Mia", 3, apple),
                                       comp("Lucy", "John", 11, apple),
                                       comp("Emma", "Lucy", 2, apple)});
}

inline const std::vector<std::string> kLucyJohnTemplates = {
    "[a] has [q] [e]s.", "[a] has [q] more [e]s than [b].", "[a] has [q] more [e]s than [b].",
    "[a] has [q] more [e]s than [b]."};

/// Renders `tree` with the given per-leaf templates (canonical order).
inline RenderedProblem render_fixed(const ProofTree& tree, const std::vector<std::string>& leaf_templates,
                                    const std::string& question_template,
                                    const OrderingPolicy& policy = OrderingPolicy::canonical()) {
  const Lexicon lex = Lexicon::from(Vocab::defaults());
  RenderedProblem r;
  const auto leaves = tree.leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    r.leaf_sentences.push_back(render_form(tree[leaves[i]].label, leaf_templates.at(i), lex));
  }
  r.order = order_positions(tree, policy);
  r.question = render_form(question_form(tree), question_template, lex);
  return r;
}

}  // namespace fixtures
