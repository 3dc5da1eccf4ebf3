#include <doctest.h>

#include <atomic>
#include <set>

#include "mathgap/error.hpp"
#include "mathgap/harness.hpp"

using namespace mathgap;

namespace {

const ProblemGenerator& gen() {
  static const ProblemGenerator g = ProblemGenerator::defaults();
  return g;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

class FlakyClient : public ModelClient {
 public:
  explicit FlakyClient(int failures) : failures_(failures) {}
  std::string complete(const CompletionRequest&) override {
    if (calls_.fetch_add(1) < failures_) throw Error(ErrorCode::Transport, "503");
    return "7";
  }
  int calls() const { return calls_.load(); }

 private:
  int failures_;
  std::atomic<int> calls_{0};
};

}  // namespace

TEST_CASE("extract_answer") {
  CHECK(extract_answer("So the answer is 42.") == 42);
  CHECK(extract_answer("1 then 2 then 3") == 3);
  CHECK(extract_answer("They have 1,234 apples") == 1234);
  CHECK(extract_answer("The difference is -5.") == -5);
  CHECK(extract_answer("So Bob has 7-2=5 apples.") == 5);
  CHECK(extract_answer("x-3") == 3);
  CHECK(extract_answer("no digits here") == std::nullopt);
  CHECK(extract_answer("") == std::nullopt);
}

TEST_CASE("bootstrap extremes") {
  const auto all = bootstrap_ci(std::vector<bool>(50, true), 1000);
  CHECK(all.accuracy == 1.0);
  CHECK(all.ci_low == 1.0);
  CHECK(all.ci_high == 1.0);
  const auto none = bootstrap_ci(std::vector<bool>(50, false), 1000);
  CHECK(none.ci_low == 0.0);
  CHECK(none.ci_high == 0.0);
  CHECK_THROWS_AS(bootstrap_ci({}), Error);
}

TEST_CASE("bootstrap is seed-deterministic and brackets the mean") {
  std::vector<bool> flags;
  for (int i = 0; i < 100; ++i) flags.push_back(i % 3 == 0);
  const auto a = bootstrap_ci(flags, 2000, 0.95, 5);
  const auto b = bootstrap_ci(flags, 2000, 0.95, 5);
  CHECK(a.ci_low == b.ci_low);
  CHECK(a.ci_high == b.ci_high);
  CHECK(a.ci_low <= a.accuracy);
  CHECK(a.accuracy <= a.ci_high);
}

TEST_CASE("prompt layout") {
  const auto test = gen().generate(TreeSpec::preset(Family::LinearDepth, 3, 1));
  PromptSpec zero;
  const auto z = assemble_prompt(zero, test, 0, gen());
  CHECK(z.text == "Q: " + test.rendered.text() + "\nA:");
  CHECK(z.shots.empty());

  PromptSpec in{Regime::InDistribution, 2, std::nullopt, 9};
  const auto p = assemble_prompt(in, test, 4, gen());
  REQUIRE(p.shots.size() == 2);
  std::string expect;
  for (const auto& s : p.shots) {
    CHECK(s.complexity == 3);
    const auto ex = gen().generate(TreeSpec::preset(s.family, s.complexity, s.seed));
    expect += "Q: " + ex.rendered.text() + "\nA: " + ex.cot + "\n";
  }
  expect += "Q: " + test.rendered.text() + "\nA:";
  CHECK(p.text == expect);
  CHECK(assemble_prompt(in, test, 4, gen()).text == p.text);
  CHECK(assemble_prompt(in, test, 5, gen()).text != p.text);
}

TEST_CASE("default shot counts") {
  const auto lin = gen().generate(TreeSpec::preset(Family::LinearWidth, 4, 2));
  PromptSpec range{Regime::Range, std::nullopt, std::nullopt, 0};
  const auto p = assemble_prompt(range, lin, 0, gen());
  CHECK(p.shots.size() == 12);
  CHECK(count_of(p.text, "Q: ") == 13);

  const auto nl = gen().generate(TreeSpec::preset(Family::NonlinearDepth, 4, 2));
  const auto q = assemble_prompt(range, nl, 0, gen());
  CHECK(q.shots.size() == 5);
  std::set<std::size_t> depths;
  for (const auto& s : q.shots) depths.insert(s.complexity);
  CHECK(depths == std::set<std::size_t>{1, 2});
}

TEST_CASE("range regime covers the range") {
  const auto test = gen().generate(TreeSpec::preset(Family::OrderPerturbed, 3, 2));
  PromptSpec range{Regime::Range, std::nullopt, std::nullopt, 0};
  const auto p = assemble_prompt(range, test, 0, gen());
  std::set<std::size_t> seen;
  for (const auto& s : p.shots) seen.insert(s.complexity);
  CHECK(seen == std::set<std::size_t>{1, 2, 4, 5});

  PromptSpec tight{Regime::Range, 2, std::pair<std::size_t, std::size_t>{1, 5}, 0};
  const auto deep = gen().generate(TreeSpec::preset(Family::LinearDepth, 6, 2));
  CHECK_THROWS_AS(assemble_prompt(tight, deep, 0, gen()), Error);
}

TEST_CASE("primitive regime") {
  const auto test = gen().generate(TreeSpec::preset(Family::NonlinearDepth, 2, 3));
  PromptSpec prim{Regime::Primitive, std::nullopt, std::nullopt, 1};
  const auto p = assemble_prompt(prim, test, 0, gen());
  const auto used = rules_used(test.tree);
  for (const auto& s : p.shots) {
    REQUIRE(s.rule.has_value());
    CHECK(std::find(used.begin(), used.end(), *s.rule) != used.end());
  }
  const auto op = gen().generate(TreeSpec::preset(Family::OrderPerturbed, 1, 3));
  CHECK_THROWS_AS(assemble_prompt(prim, op, 0, gen()), Error);
}

TEST_CASE("eval with stubs") {
  const auto data = generate_dataset(gen(), TreeSpec::preset(Family::LinearDepth, 2), 12, 4);
  PromptSpec spec{Regime::InDistribution, 2, std::nullopt, 0};

  auto gold = make_client("stub:gold", {}, data);
  EvalOptions opts;
  opts.resamples = 500;
  const auto g = run_eval(data, spec, gen(), *gold, opts);
  CHECK(g.metrics.accuracy == 1.0);
  CHECK(g.metrics.ci_low == 1.0);

  auto konst = make_client("stub:const:The answer is 42", {}, data);
  opts.concurrency = 1;
  const auto one = run_eval(data, spec, gen(), *konst, opts);
  opts.concurrency = 8;
  const auto eight = run_eval(data, spec, gen(), *konst, opts);
  REQUIRE(one.records.size() == eight.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    CHECK(record_to_json(one.records[i]) == record_to_json(eight.records[i]));
    CHECK(one.records[i].extracted == 42);
    CHECK(one.records[i].id == data[i].id);
  }
  CHECK(metrics_to_json(one.metrics) == metrics_to_json(eight.metrics));
  CHECK_THROWS_AS(make_client("gpt", {}, data), Error);
}

TEST_CASE("transport failures are retried") {
  const auto data = generate_dataset(gen(), TreeSpec::preset(Family::LinearDepth, 1), 1, 0);
  PromptSpec spec;
  EvalOptions opts;
  opts.backoff = std::chrono::milliseconds(1);
  opts.retries = 3;
  opts.resamples = 10;
  FlakyClient recovers(2);
  const auto r = run_eval(data, spec, gen(), recovers, opts);
  CHECK(r.records[0].attempts == 3);
  CHECK_FALSE(r.records[0].transport_failure);
  CHECK(r.records[0].output == "7");

  FlakyClient dead(100);
  const auto d = run_eval(data, spec, gen(), dead, opts);
  CHECK(d.records[0].transport_failure);
  CHECK(d.records[0].attempts == 4);
  CHECK_FALSE(d.records[0].correct);
}
