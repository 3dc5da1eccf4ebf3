#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mathgap/realization.hpp"
#include "mathgap/sampler.hpp"

namespace mathgap {

using Json = nlohmann::ordered_json;

struct Problem {
  std::string id;
  Family family = Family::LinearDepth;
  std::size_t depth = 0;
  std::size_t width = 0;
  std::size_t distance = 0;
  std::uint64_t seed = 0;
  ProofTree tree;
  RenderedProblem rendered;
  std::string cot;
  std::int64_t answer = 0;

  /// Body in stated order, question from the root.
  WorldModel world_model() const;
};

class ProblemGenerator {
 public:
  ProblemGenerator(Vocab vocab, TemplateSet templates, QuantityRange range = {});
  static ProblemGenerator defaults();

  /// One problem drawn from `spec`, seeded by spec.seed.
  Problem generate(const TreeSpec& spec) const;
  /// Single-step problem using `rule`.
  Problem primitive(RuleId rule, Family family, std::uint64_t seed) const;

  const Vocab& vocab() const noexcept { return vocab_; }
  const TemplateSet& templates() const noexcept { return templates_; }
  const Lexicon& lexicon() const noexcept { return lexicon_; }

 private:
  Problem finish(const ProofTree& abstract, Family family, std::size_t distance,
                 std::uint64_t seed, Rng& rng) const;

  Vocab vocab_;
  TemplateSet templates_;
  Lexicon lexicon_;
  QuantityRange range_;
};

/// Throws Error(OracleMismatch) unless the linear-system answer equals the
/// tree's answer.
void check_oracle(const Problem& problem);

/// `n` problems from `spec`; problem i uses seed `seed ^ i`. Every problem
/// passes check_oracle.
std::vector<Problem> generate_dataset(const ProblemGenerator& generator, TreeSpec spec,
                                      std::size_t n, std::uint64_t seed);

Json tree_to_json(const ProofTree& tree);
ProofTree tree_from_json(const Json& j);

Json problem_to_json(const Problem& problem);
Problem problem_from_json(const Json& j);

/// Parsed records plus per-line problems.
struct LoadedDataset {
  std::vector<Problem> problems;
  std::vector<std::size_t> lines;  // 1-based source line of each problem
  std::vector<std::string> errors;  // "line N: message"
};

void write_jsonl(std::ostream& out, const std::vector<Problem>& problems);
/// Malformed lines are reported in `errors` and skipped.
LoadedDataset read_jsonl(std::istream& in);

/// Counts, histograms and answer range.
Json dataset_stats(std::istream& in);

/// Re-solves each record's world model and re-evaluates its proof tree.
Json verify_dataset(std::istream& in);

/// Re-states every record under `policy`. Throws on the first record the
/// policy does not fit.
std::vector<Problem> permute_dataset(const std::vector<Problem>& problems,
                                     const OrderingPolicy& policy);

}  // namespace mathgap
