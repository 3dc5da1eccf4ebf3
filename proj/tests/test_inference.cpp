#include <doctest.h>

#include <array>

#include "fixtures.hpp"
#include "mathgap/error.hpp"
#include "mathgap/inference.hpp"

using namespace mathgap;

namespace {

LogicalForm cont(const char* a, std::int64_t q, const char* e = "apple") {
  return LogicalForm::container(Agent(a), Quantity::of(q), Entity(e));
}
LogicalForm comp(const char* a, const char* b, std::int64_t q, const char* e = "apple") {
  return LogicalForm::comparison(Agent(a), Agent(b), Quantity::of(q), Entity(e));
}

}  // namespace

TEST_CASE("rule examples") {
  SUBCASE("comp-add") {
    const std::array p{cont("Alice", 3), comp("Bob", "Alice", 2)};
    CHECK(apply_rule(RuleId::CompAdd, p) == cont("Bob", 5));
    const std::array lucy{cont("Isabella", 17), comp("Lucy", "Isabella", 10)};
    CHECK(apply_rule(RuleId::CompAdd, lucy) == cont("Lucy", 27));
  }
  SUBCASE("comp-add with zero difference keeps the count") {
    const std::array p{cont("Alice", 3), comp("Bob", "Alice", 0)};
    CHECK(apply_rule(RuleId::CompAdd, p).value() == 3);
  }
  SUBCASE("comp-add from the other side") {
    const std::array p{cont("Bob", 5), comp("Bob", "Alice", 2)};
    CHECK(apply_rule(RuleId::CompAdd, p) == cont("Alice", 3));
  }
  SUBCASE("transfer-apply") {
    const auto give = LogicalForm::transfer(Agent("Alice"), Agent("Bob"), Quantity::of(2), Entity("apple"));
    const std::array in{cont("Alice", 3), give};
    CHECK(apply_rule(RuleId::TransferApply, in) == cont("Alice", 5));
    const std::array out{cont("Bob", 7), give};
    CHECK(apply_rule(RuleId::TransferApply, out) == cont("Bob", 5));
    const std::array swapped{give, cont("Alice", 3)};
    CHECK_THROWS_AS(apply_rule(RuleId::TransferApply, swapped), Error);
  }
  SUBCASE("comp-deduce") {
    const std::array p{cont("Alice", 3), cont("Bob", 5)};
    CHECK(apply_rule(RuleId::CompDeduce, p) == comp("Bob", "Alice", 2));
  }
  SUBCASE("partwhole-sum") {
    const std::array p{cont("Alice", 3, "apple"), cont("Bob", 5, "banana")};
    const auto whole = apply_rule(RuleId::PartWholeSum, p);
    CHECK(whole.predicate == Predicate::PartWhole);
    CHECK(whole.value() == 8);
    CHECK(whole.agent(0).members == std::vector<std::string>{"Alice", "Bob"});
    CHECK(whole.ent().members == std::vector<std::string>{"apple", "banana"});
  }
  SUBCASE("comp-eq-add") {
    const std::array p{cont("Alice", 7), comp("David", "Charlie", 2),
                       LogicalForm::comp_eq(Agent("Bob"), Agent("Alice"), Agent("David"),
                                            Agent("Charlie"), Entity("apple"))};
    CHECK(apply_rule(RuleId::CompEqAdd, p) == cont("Bob", 9));
  }
}

TEST_CASE("apply_rule rejects mismatches") {
  const std::array entity{cont("Alice", 3, "apple"), comp("Bob", "Alice", 2, "pear")};
  CHECK_THROWS_AS(apply_rule(RuleId::CompAdd, entity), Error);
  const std::array linkage{cont("Alice", 3), comp("Bob", "Carol", 2)};
  CHECK_THROWS_AS(apply_rule(RuleId::CompAdd, linkage), Error);
  const std::array big{cont("Alice", INT64_MAX), comp("Bob", "Alice", 1)};
  try {
    apply_rule(RuleId::CompAdd, big);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Overflow);
  }
}

TEST_CASE("swap_premises") {
  const auto step = make_step(RuleId::CompDeduce, {cont("Alice", 3), cont("Bob", 5)});
  const std::array<std::size_t, 2> rev{1, 0};
  const auto swapped = swap_premises(step, rev);
  CHECK(swapped.conclusion == comp("Alice", "Bob", -2));
  CHECK(semantically_equal(swapped.conclusion, step.conclusion));

  const auto pw = make_step(RuleId::PartWholeSum, {cont("A", 1), cont("B", 2), cont("C", 4)});
  const std::array<std::size_t, 3> perm{2, 0, 1};
  CHECK(swap_premises(pw, perm).conclusion.value() == 7);

  const auto tr = make_step(RuleId::TransferApply,
                            {cont("Alice", 3), LogicalForm::transfer(Agent("Alice"), Agent("Bob"),
                                                                     Quantity::of(2), Entity("apple"))});
  CHECK_THROWS_AS(swap_premises(tr, rev), Error);
}

TEST_CASE("match_conclusion") {
  const auto goal = LogicalForm::container(Agent("Bob"), Quantity::placeholder(), Entity("apple"));
  const std::array only_comp{RuleId::CompAdd};
  const auto opts = match_conclusion(goal, only_comp);
  REQUIRE(opts.size() == 1);
  CHECK(opts[0].premises[0].predicate == Predicate::Container);
  CHECK(is_variable(opts[0].premises[0].agent(0).name()));
  CHECK(opts[0].premises[1].agent(0).name() == "Bob");
  CHECK(opts[0].premises[1].agent(1) == opts[0].premises[0].agent(0));

  const auto cgoal = LogicalForm::comparison(Agent("Bob"), Agent("Alice"), Quantity::placeholder(),
                                             Entity("apple"));
  const std::array deduce{RuleId::CompDeduce};
  const auto d = match_conclusion(cgoal, deduce);
  REQUIRE(d.size() == 1);
  CHECK(d[0].premises[0].agent(0).name() == "Alice");
  CHECK(d[0].premises[1].agent(0).name() == "Bob");

  const auto tgoal = LogicalForm::transfer(Agent("A"), Agent("B"), Quantity::placeholder(), Entity("e"));
  CHECK(match_conclusion(tgoal, kAllRules).empty());
}

TEST_CASE("proof tree shape queries") {
  const auto tree = fixtures::apples_tree();
  CHECK(tree.height() == 2);
  CHECK(tree.width() == 5);
  CHECK_FALSE(is_linear(tree));
  CHECK(evaluate_tree(tree) == 37);
  CHECK(only_commutative_rules(tree));
  CHECK(has_unique_labels(tree));

  const auto post = tree.post_order();
  CHECK(post.size() == tree.size());
  CHECK(post.back() == ProofTree::root());

  const auto soap = fixtures::soap_tree();
  CHECK(is_linear(soap));
  CHECK(soap.height() == 6);
  CHECK(evaluate_tree(soap) == 34);
  CHECK(evaluate_tree(fixtures::fruit_tree()) == 80);
  CHECK(evaluate_tree(fixtures::plates_tree()) == 58);
  CHECK(evaluate_tree(fixtures::computers_tree()) == 14);
}

TEST_CASE("evaluate_tree detects corrupted labels") {
  auto tree = fixtures::soap_tree();
  tree[ProofTree::root()].label.quantity = Quantity::of(35);
  try {
    evaluate_tree(tree);
    FAIL("expected label mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LabelMismatch);
  }
}

TEST_CASE("single axiom evaluates to its quantity") {
  CHECK(evaluate_tree(ProofTree::axiom(cont("A", 5))) == 5);
}

TEST_CASE("expand grows a leaf") {
  ProofTree t(LogicalForm::container(Agent("Bob"), Quantity::placeholder(), Entity("apple")));
  const auto kids = t.expand(0, RuleId::CompAdd,
                             {LogicalForm::container(Agent("A"), Quantity::placeholder(), Entity("apple")),
                              LogicalForm::comparison(Agent("Bob"), Agent("A"), Quantity::placeholder(),
                                                      Entity("apple"))});
  CHECK(kids.size() == 2);
  CHECK(t.width() == 2);
  CHECK(t.height() == 1);
  CHECK(rules_used(t) == std::vector<RuleId>{RuleId::CompAdd});
}
