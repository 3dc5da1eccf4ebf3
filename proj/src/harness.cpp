#include "mathgap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <thread>

#include "mathgap/error.hpp"

namespace mathgap {

namespace {

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InvalidArgument, why); }

std::string shot_block(const Problem& p) {
  return "Q: " + p.rendered.text() + "\nA: " + p.cot + "\n";
}

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Text of the last "Q:" block in a prompt, without the trailing "\nA:".
std::string_view last_question(std::string_view prompt) {
  std::size_t start = prompt.rfind("\nQ: ");
  start = start == std::string_view::npos ? (prompt.starts_with("Q: ") ? 3 : 0) : start + 4;
  std::string_view rest = prompt.substr(start);
  if (auto end = rest.rfind("\nA:"); end != std::string_view::npos) rest = rest.substr(0, end);
  return rest;
}

class GoldClient : public ModelClient {
 public:
  explicit GoldClient(const std::vector<Problem>& dataset) {
    for (const auto& p : dataset) answers_.emplace(p.rendered.text(), p.cot);
  }
  std::string complete(const CompletionRequest& request) override {
    auto it = answers_.find(std::string(last_question(request.prompt)));
    return it == answers_.end() ? std::string("I do not know.") : it->second;
  }

 private:
  std::map<std::string, std::string> answers_;
};

class ConstClient : public ModelClient {
 public:
  explicit ConstClient(std::string text) : text_(std::move(text)) {}
  std::string complete(const CompletionRequest&) override { return text_; }

 private:
  std::string text_;
};

class ScriptClient : public ModelClient {
 public:
  explicit ScriptClient(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open script " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw Error(ErrorCode::Parse, path + ":" + std::to_string(lineno) +
                                          ": expected 'regex<TAB>response'");
      }
      try {
        rules_.emplace_back(std::regex(line.substr(0, tab)), line.substr(tab + 1));
      } catch (const std::regex_error& e) {
        throw Error(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  std::string complete(const CompletionRequest& request) override {
    for (const auto& [pattern, response] : rules_) {
      if (std::regex_search(request.prompt, pattern)) return response;
    }
    return {};
  }

 private:
  std::vector<std::pair<std::regex, std::string>> rules_;
};

}  // namespace

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::ZeroShot: return "zero-shot";
    case Regime::Primitive: return "primitive";
    case Regime::Range: return "range";
    case Regime::InDistribution: return "in-distribution";
  }
  return "?";
}

Regime parse_regime(std::string_view text) {
  for (auto r : {Regime::ZeroShot, Regime::Primitive, Regime::Range, Regime::InDistribution}) {
    if (to_string(r) == text) return r;
  }
  throw Error(ErrorCode::Parse, "unknown regime '" + std::string(text) + "'");
}

std::size_t complexity_of(const Problem& p) {
  switch (p.family) {
    case Family::LinearWidth: return p.width;
    case Family::OrderPerturbed: return p.distance;
    default: return p.depth;
  }
}

std::size_t PromptSpec::default_shots(Family family) {
  return family == Family::NonlinearDepth ? 5 : 12;
}

std::pair<std::size_t, std::size_t> PromptSpec::default_range(Family family) {
  switch (family) {
    case Family::LinearDepth: return {1, 5};
    case Family::LinearWidth: return {2, 6};
    case Family::NonlinearDepth: return {1, 2};
    case Family::OrderPerturbed: return {1, 5};
  }
  return {1, 1};
}

AssembledPrompt assemble_prompt(const PromptSpec& spec, const Problem& test, std::size_t index,
                                const ProblemGenerator& generator) {
  AssembledPrompt out;
  const std::size_t shots =
      spec.regime == Regime::ZeroShot ? 0 : spec.shots.value_or(PromptSpec::default_shots(test.family));
  const std::uint64_t prompt_seed = mix_seed(spec.seed, index);
  auto shot_seed = [&](std::size_t k) { return mix_seed(prompt_seed, k + 1); };

  switch (spec.regime) {
    case Regime::ZeroShot:
      break;
    case Regime::Primitive: {
      if (test.family == Family::OrderPerturbed) {
        invalid("the primitive regime does not apply to order-perturbed problems");
      }
      const auto rules = rules_used(test.tree);
      if (rules.empty()) invalid("test problem has no inference steps");
      Rng pick(prompt_seed);
      for (std::size_t k = 0; k < shots; ++k) {
        const RuleId rule = rules[pick.index(rules.size())];
        out.shots.push_back({test.family, 0, shot_seed(k), rule});
      }
      break;
    }
    case Regime::Range: {
      auto [lo, hi] = spec.range.value_or(PromptSpec::default_range(test.family));
      if (lo > hi) invalid("empty complexity range");
      std::vector<std::size_t> levels;
      for (std::size_t c = lo; c <= hi; ++c) {
        if (test.family == Family::OrderPerturbed && c == test.distance) continue;
        levels.push_back(c);
      }
      if (levels.empty()) invalid("complexity range leaves nothing to show");
      if (shots < levels.size()) {
        invalid("range regime needs at least " + std::to_string(levels.size()) + " shots");
      }
      Rng pick(prompt_seed);
      std::vector<std::size_t> plan = levels;
      while (plan.size() < shots) plan.push_back(levels[pick.index(levels.size())]);
      pick.shuffle(std::span<std::size_t>(plan));
      for (std::size_t k = 0; k < shots; ++k) out.shots.push_back({test.family, plan[k], shot_seed(k), {}});
      break;
    }
    case Regime::InDistribution:
      for (std::size_t k = 0; k < shots; ++k) {
        out.shots.push_back({test.family, complexity_of(test), shot_seed(k), {}});
      }
      break;
  }

  for (const auto& shot : out.shots) {
    const Problem example = shot.rule
                                ? generator.primitive(*shot.rule, shot.family, shot.seed)
                                : generator.generate(TreeSpec::preset(shot.family, shot.complexity, shot.seed));
    out.text += shot_block(example);
  }
  out.text += "Q: " + test.rendered.text() + "\nA:";
  return out;
}

std::optional<std::int64_t> extract_answer(std::string_view text) {
  std::size_t end = text.size();
  while (end > 0 && !is_digit(text[end - 1])) --end;
  if (end == 0) return std::nullopt;
  std::size_t begin = end;
  while (begin > 0) {
    if (is_digit(text[begin - 1])) {
      --begin;
    } else if (text[begin - 1] == ',' && begin >= 2 && is_digit(text[begin - 2])) {
      --begin;
    } else {
      break;
    }
  }
  std::string digits;
  for (std::size_t i = begin; i < end; ++i) {
    if (text[i] != ',') digits += text[i];
  }
  const bool negative = begin > 0 && text[begin - 1] == '-' && (begin < 2 || !is_alnum(text[begin - 2]));
  if (negative) digits.insert(digits.begin(), '-');
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

Metrics bootstrap_ci(const std::vector<bool>& correct, std::size_t resamples, double level,
                     std::uint64_t seed) {
  if (correct.empty()) invalid("bootstrap needs at least one result");
  if (resamples == 0) invalid("bootstrap needs at least one resample");
  if (!(level > 0 && level < 1)) invalid("confidence level must lie in (0, 1)");
  const std::size_t n = correct.size();
  const auto hits = static_cast<std::size_t>(std::count(correct.begin(), correct.end(), true));

  Metrics m;
  m.n = n;
  m.resamples = resamples;
  m.level = level;
  m.accuracy = static_cast<double>(hits) / static_cast<double>(n);

  Rng rng(seed);
  std::vector<double> means(resamples);
  for (auto& mean : means) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) k += correct[rng.index(n)] ? 1 : 0;
    mean = static_cast<double>(k) / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double tail = (1 - level) / 2;
  const auto lo = static_cast<std::size_t>(std::floor(tail * static_cast<double>(resamples)));
  const auto hi = std::min(resamples - 1,
                           static_cast<std::size_t>(std::ceil((1 - tail) * static_cast<double>(resamples))) - 1);
  m.ci_low = std::min(means[lo], m.accuracy);
  m.ci_high = std::max(means[hi], m.accuracy);
  return m;
}

Json metrics_to_json(const Metrics& m) {
  return Json{{"accuracy", m.accuracy}, {"ci_low", m.ci_low},       {"ci_high", m.ci_high},
              {"n", m.n},               {"resamples", m.resamples}, {"level", m.level}};
}

std::unique_ptr<ModelClient> make_client(const std::string& spec, const ClientOptions& options,
                                         const std::vector<Problem>& dataset) {
  if (spec == "stub:gold") return std::make_unique<GoldClient>(dataset);
  if (spec.starts_with("stub:const:")) return std::make_unique<ConstClient>(spec.substr(11));
  if (spec.starts_with("stub:script:")) return std::make_unique<ScriptClient>(spec.substr(12));
  if (spec.starts_with("http:") && spec.size() > 5) return make_http_client(spec.substr(5), options);
  invalid("unknown model '" + spec + "' (use stub:gold, stub:const:TEXT, stub:script:FILE or http:MODEL)");
}

Json record_to_json(const EvalRecord& r) {
  Json j;
  j["id"] = r.id;
  j["prompt"] = r.prompt;
  j["output"] = r.output;
  j["extracted"] = r.extracted ? Json(*r.extracted) : Json(nullptr);
  j["gold"] = r.gold;
  j["correct"] = r.correct;
  j["transport_failure"] = r.transport_failure;
  return j;
}

Json timing_to_json(const EvalRecord& r) {
  return Json{{"id", r.id}, {"attempts", r.attempts}, {"latency_ms", r.latency_ms}};
}

EvalResult run_eval(const std::vector<Problem>& dataset, const PromptSpec& spec,
                    const ProblemGenerator& generator, ModelClient& client,
                    const EvalOptions& options) {
  if (dataset.empty()) invalid("dataset is empty");
  // Surface regime errors before any request goes out.
  (void)assemble_prompt(spec, dataset.front(), 0, generator);

  EvalResult result;
  result.records.resize(dataset.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= dataset.size()) return;
      try {
        const Problem& p = dataset[i];
        EvalRecord& r = result.records[i];
        r.id = p.id;
        r.gold = p.answer;
        r.prompt = assemble_prompt(spec, p, i, generator).text;
        const CompletionRequest request{r.prompt, options.max_tokens, 0.0};
        auto delay = options.backoff;
        const auto start = std::chrono::steady_clock::now();
        for (;;) {
          ++r.attempts;
          try {
            r.output = client.complete(request);
            break;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::Transport) throw;
            if (r.attempts > options.retries) {
              r.transport_failure = true;
              r.output.clear();
              break;
            }
            std::this_thread::sleep_for(delay);
            delay = std::chrono::milliseconds(
                static_cast<std::int64_t>(static_cast<double>(delay.count()) * options.backoff_factor));
          }
        }
        r.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        r.extracted = r.transport_failure ? std::nullopt : extract_answer(r.output);
        r.correct = r.extracted == r.gold;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(dataset.size());
        return;
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(options.concurrency, 1, dataset.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<bool> flags;
  flags.reserve(result.records.size());
  for (const auto& r : result.records) flags.push_back(r.correct);
  result.metrics = bootstrap_ci(flags, options.resamples, 0.95, spec.seed);
  return result;
}

}  // namespace mathgap
