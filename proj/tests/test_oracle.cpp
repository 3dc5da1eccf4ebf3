#include <doctest.h>

#include "fixtures.hpp"
#include "mathgap/error.hpp"
#include "mathgap/oracle.hpp"

using namespace mathgap;

namespace {

WorldModel model_of(const ProofTree& tree) {
  WorldModel m;
  for (auto leaf : tree.leaves()) m.body.push_back(tree[leaf].label);
  m.question = question_form(tree);
  return m;
}

LogicalForm cont(const char* a, std::int64_t q) {
  return LogicalForm::container(Agent(a), Quantity::of(q), Entity("apple"));
}
LogicalForm ask(const char* a) {
  return LogicalForm::container(Agent(a), Quantity::placeholder(), Entity("apple"));
}

}  // namespace

TEST_CASE("worked examples solve to their answers") {
  CHECK(solve(model_of(fixtures::apples_tree())).answer == 37);
  CHECK(solve(model_of(fixtures::soap_tree())).answer == 34);
  CHECK(solve(model_of(fixtures::fruit_tree())).answer == 80);
  CHECK(solve(model_of(fixtures::plates_tree())).answer == 58);
  CHECK(solve(model_of(fixtures::computers_tree())).answer == 14);
}

TEST_CASE("sentence order does not matter for commutative models") {
  auto m = model_of(fixtures::plates_tree());
  std::reverse(m.body.begin(), m.body.end());
  const auto r = solve(m);
  CHECK(r.status == SolveStatus::Answer);
  CHECK(r.answer == 58);
}

TEST_CASE("comparison question") {
  WorldModel m;
  m.body = {cont("Alice", 3), cont("Bob", 5)};
  m.question = LogicalForm::comparison(Agent("Bob"), Agent("Alice"), Quantity::placeholder(), Entity("apple"));
  CHECK(solve(m).answer == 2);
}

TEST_CASE("transfers version the counts") {
  WorldModel m;
  m.body = {cont("Alice", 3), cont("Bob", 4),
            LogicalForm::transfer(Agent("Alice"), Agent("Bob"), Quantity::of(2), Entity("apple"))};
  m.question = ask("Alice");
  CHECK(solve(m).answer == 5);
  m.question = ask("Bob");
  CHECK(solve(m).answer == 2);
  // A statement after the transfer refers to the new count.
  m.body = {LogicalForm::transfer(Agent("Alice"), Agent("Bob"), Quantity::of(2), Entity("apple")),
            cont("Alice", 9)};
  m.question = ask("Alice");
  CHECK(solve(m).answer == 9);
}

TEST_CASE("underdetermined and inconsistent systems") {
  WorldModel m;
  m.body = {cont("Alice", 3)};
  m.question = ask("Bob");
  CHECK(solve(m).status == SolveStatus::Underdetermined);
  CHECK_FALSE(solve(m).answer.has_value());

  m.body = {cont("Alice", 3), cont("Alice", 4)};
  m.question = ask("Alice");
  CHECK(solve(m).status == SolveStatus::Inconsistent);

  m.body = {cont("Alice", 3),
            LogicalForm::comparison(Agent("Bob"), Agent("Alice"), Quantity::of(2), Entity("apple")),
            LogicalForm::comparison(Agent("Bob"), Agent("Alice"), Quantity::of(2), Entity("apple"))};
  m.question = ask("Bob");
  const auto redundant = solve(m);
  CHECK(redundant.status == SolveStatus::Answer);
  CHECK(redundant.answer == 5);
}

TEST_CASE("malformed models are rejected") {
  WorldModel m;
  m.question = ask("Bob");
  CHECK_THROWS_AS(solve(m), Error);
}
