#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mathgap/dataset.hpp"

namespace mathgap {

enum class Regime { ZeroShot, Primitive, Range, InDistribution };

std::string_view to_string(Regime r) noexcept;
Regime parse_regime(std::string_view text);

/// The family's varied dimension for a concrete problem.
std::size_t complexity_of(const Problem& problem);

struct PromptSpec {
  Regime regime = Regime::ZeroShot;
  std::optional<std::size_t> shots;                          // family default when empty
  std::optional<std::pair<std::size_t, std::size_t>> range;  // range regime only
  std::uint64_t seed = 0;

  static std::size_t default_shots(Family family);
  static std::pair<std::size_t, std::size_t> default_range(Family family);
};

struct ShotInfo {
  Family family;
  std::size_t complexity;  // 0 for primitive shots
  std::uint64_t seed;
  std::optional<RuleId> rule;  // primitive shots only
};

struct AssembledPrompt {
  std::string text;
  std::vector<ShotInfo> shots;
};

/// Few-shot prompt for `test`, the `index`-th problem of its dataset. Shots
/// are generated fresh from seeds derived from (spec.seed, index, shot).
/// Throws Error(InvalidArgument) when the regime does not apply.
AssembledPrompt assemble_prompt(const PromptSpec& spec, const Problem& test, std::size_t index,
                                const ProblemGenerator& generator);

/// Last integer in `text`. Commas between digit groups are dropped; a minus
/// sign counts only when it does not follow a letter or digit.
std::optional<std::int64_t> extract_answer(std::string_view text);

struct Metrics {
  double accuracy = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::size_t n = 0;
  std::size_t resamples = 0;
  double level = 0.95;
};

/// Percentile bootstrap over the flags. Throws Error(InvalidArgument) on
/// empty input.
Metrics bootstrap_ci(const std::vector<bool>& correct, std::size_t resamples = 10000,
                     double level = 0.95, std::uint64_t seed = 0);

Json metrics_to_json(const Metrics& m);

// ---------------------------------------------------------------------------
// Model clients

struct CompletionRequest {
  std::string prompt;
  std::size_t max_tokens = 4096;
  double temperature = 0;
};

/// Implementations must be callable from several threads at once. Transport
/// problems are reported as Error(Transport).
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

struct ClientOptions {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key_env = "OPENAI_API_KEY";
  int timeout_seconds = 120;
};

/// `stub:gold`, `stub:const:TEXT`, `stub:script:FILE` or `http:MODEL`.
/// The gold stub answers with the reference solution of whichever dataset
/// problem the prompt ends with.
std::unique_ptr<ModelClient> make_client(const std::string& spec, const ClientOptions& options,
                                         const std::vector<Problem>& dataset);

std::unique_ptr<ModelClient> make_http_client(std::string model, const ClientOptions& options);

// ---------------------------------------------------------------------------
// Evaluation

struct EvalOptions {
  std::size_t concurrency = 1;
  std::size_t max_tokens = 4096;
  std::size_t retries = 3;
  std::chrono::milliseconds backoff{500};
  double backoff_factor = 2.0;
  std::size_t resamples = 10000;
};

struct EvalRecord {
  std::string id;
  std::string prompt;
  std::string output;
  std::optional<std::int64_t> extracted;
  std::int64_t gold = 0;
  bool correct = false;
  bool transport_failure = false;
  std::size_t attempts = 0;
  double latency_ms = 0;
};

Json record_to_json(const EvalRecord& r);
/// Attempts and latency, kept apart so records stay reproducible.
Json timing_to_json(const EvalRecord& r);

struct EvalResult {
  std::vector<EvalRecord> records;  // dataset order
  Metrics metrics;
};

EvalResult run_eval(const std::vector<Problem>& dataset, const PromptSpec& spec,
                    const ProblemGenerator& generator, ModelClient& client,
                    const EvalOptions& options = {});

}  // namespace mathgap
