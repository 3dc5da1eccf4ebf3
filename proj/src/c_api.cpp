#include "mathgap/mathgap.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "mathgap/dataset.hpp"
#include "mathgap/error.hpp"
#include "mathgap/harness.hpp"
#include "mathgap/oracle.hpp"

using namespace mathgap;

struct mg_generator {
  ProblemGenerator impl;
};

namespace {

thread_local std::string g_last_error;

mg_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return MG_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return MG_ERR_PARSE;
    case ErrorCode::Schema: return MG_ERR_SCHEMA;
    case ErrorCode::Overflow: return MG_ERR_OVERFLOW;
    case ErrorCode::LabelMismatch: return MG_ERR_LABEL_MISMATCH;
    case ErrorCode::Generation: return MG_ERR_GENERATION;
    case ErrorCode::VocabularyExhausted: return MG_ERR_VOCABULARY;
    case ErrorCode::MissingTemplate: return MG_ERR_MISSING_TEMPLATE;
    case ErrorCode::OracleMismatch: return MG_ERR_ORACLE_MISMATCH;
    case ErrorCode::Io: return MG_ERR_IO;
    case ErrorCode::Transport: return MG_ERR_TRANSPORT;
  }
  return MG_ERR_INTERNAL;
}

template <class F>
mg_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return MG_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return MG_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return MG_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Json parse_json(const char* text) {
  if (!text || !*text) return Json::object();
  Json j = Json::parse(text);
  if (!j.is_object()) throw Error(ErrorCode::Parse, "expected a JSON object");
  return j;
}

std::ifstream open_in(const char* path) {
  require(path != nullptr, "path is null");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, std::string("cannot open ") + path);
  return in;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << content;
  if (!out.flush()) throw Error(ErrorCode::Io, "cannot write " + path);
}

TreeSpec spec_from_json(const Json& j) {
  TreeSpec spec = TreeSpec::preset(parse_family(j.at("family").get<std::string>()),
                                   j.at("complexity").get<std::size_t>(),
                                   j.value("seed", std::uint64_t{0}));
  if (j.contains("rules")) {
    spec.rules.clear();
    for (const auto& r : j.at("rules")) spec.rules.push_back(parse_rule(r.get<std::string>()));
  }
  return spec;
}

ProblemGenerator generator_from_json(const Json& cfg) {
  Vocab vocab = Vocab::defaults();
  auto list = [&](const char* key, std::vector<std::string>& target) {
    if (cfg.contains(key)) target = load_word_list(cfg.at(key).get<std::string>());
  };
  list("agents", vocab.agents);
  list("extended_agents", vocab.extended_agents);
  list("entities", vocab.entities);
  list("attributes", vocab.attributes);
  list("units", vocab.units);
  if (cfg.contains("agents") && !cfg.contains("extended_agents")) vocab.extended_agents.clear();
  if (cfg.contains("hypernyms")) vocab.hypernyms = load_hypernyms(cfg.at("hypernyms").get<std::string>());

  TemplateSet templates = cfg.contains("templates")
                              ? TemplateSet::load(cfg.at("templates").get<std::string>())
                              : TemplateSet::defaults();
  QuantityRange range;
  range.lo = cfg.value("quantity_min", range.lo);
  range.hi = cfg.value("quantity_max", range.hi);
  if (range.lo < 0 || range.lo > range.hi) {
    throw Error(ErrorCode::InvalidArgument, "quantity range must satisfy 0 <= min <= max");
  }
  return ProblemGenerator(std::move(vocab), std::move(templates), range);
}

}  // namespace

extern "C" {

const char* mg_status_string(mg_status status) {
  switch (status) {
    case MG_OK: return "ok";
    case MG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MG_ERR_PARSE: return "parse error";
    case MG_ERR_SCHEMA: return "schema error";
    case MG_ERR_OVERFLOW: return "overflow";
    case MG_ERR_LABEL_MISMATCH: return "label mismatch";
    case MG_ERR_GENERATION: return "generation failed";
    case MG_ERR_VOCABULARY: return "vocabulary exhausted";
    case MG_ERR_MISSING_TEMPLATE: return "missing template";
    case MG_ERR_ORACLE_MISMATCH: return "oracle mismatch";
    case MG_ERR_IO: return "i/o error";
    case MG_ERR_TRANSPORT: return "transport error";
    case MG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mg_last_error(void) { return g_last_error.c_str(); }

const char* mg_version(void) { return "0.1.0"; }

void mg_string_free(char* s) { std::free(s); }

mg_status mg_generator_create(const char* config_json, mg_generator** out) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    *out = nullptr;
    *out = new mg_generator{generator_from_json(parse_json(config_json))};
  });
}

void mg_generator_destroy(mg_generator* generator) { delete generator; }

mg_status mg_generator_problem(const mg_generator* generator, const char* spec_json,
                               char** out_json) {
  return guarded([&] {
    require(generator && out_json, "null argument");
    const Problem p = generator->impl.generate(spec_from_json(parse_json(spec_json)));
    *out_json = copy_out(problem_to_json(p).dump());
  });
}

mg_status mg_generate_dataset(const mg_generator* generator, const char* spec_json,
                              const char* out_path) {
  return guarded([&] {
    require(generator && out_path, "null argument");
    const Json j = parse_json(spec_json);
    const auto problems = generate_dataset(generator->impl, spec_from_json(j),
                                           j.at("n").get<std::size_t>(),
                                           j.value("seed", std::uint64_t{0}));
    std::ostringstream buf;
    write_jsonl(buf, problems);
    write_file(out_path, buf.str());
  });
}

mg_status mg_dataset_stats(const char* path, char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, "null argument");
    auto in = open_in(path);
    *out_json = copy_out(dataset_stats(in).dump(2));
  });
}

mg_status mg_verify_dataset(const char* path, char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, "null argument");
    auto in = open_in(path);
    *out_json = copy_out(verify_dataset(in).dump(2));
  });
}

mg_status mg_permute_dataset(const char* in_path, const char* policy, const char* out_path) {
  return guarded([&] {
    require(policy && out_path, "null argument");
    auto in = open_in(in_path);
    const LoadedDataset data = read_jsonl(in);
    if (!data.errors.empty()) throw Error(ErrorCode::Schema, data.errors.front());
    std::ostringstream buf;
    write_jsonl(buf, permute_dataset(data.problems, OrderingPolicy::parse(policy)));
    write_file(out_path, buf.str());
  });
}

mg_status mg_eval(const mg_generator* generator, const char* config_json, char** out_metrics_json) {
  return guarded([&] {
    require(generator && out_metrics_json, "null argument");
    const Json cfg = parse_json(config_json);
    const std::string dataset_path = cfg.at("dataset").get<std::string>();
    auto in = open_in(dataset_path.c_str());
    const LoadedDataset data = read_jsonl(in);
    if (!data.errors.empty()) throw Error(ErrorCode::Schema, data.errors.front());

    PromptSpec spec;
    spec.regime = parse_regime(cfg.value("regime", std::string("zero-shot")));
    if (cfg.contains("shots")) spec.shots = cfg.at("shots").get<std::size_t>();
    if (cfg.contains("range_min") || cfg.contains("range_max")) {
      require(!data.problems.empty(), "dataset is empty");
      auto range = PromptSpec::default_range(data.problems.front().family);
      range.first = cfg.value("range_min", range.first);
      range.second = cfg.value("range_max", range.second);
      spec.range = range;
    }
    spec.seed = cfg.value("seed", std::uint64_t{0});

    ClientOptions client_options;
    client_options.base_url = cfg.value("base_url", client_options.base_url);
    client_options.api_key_env = cfg.value("api_key_env", client_options.api_key_env);
    client_options.timeout_seconds = cfg.value("timeout_seconds", client_options.timeout_seconds);
    auto client = make_client(cfg.at("model").get<std::string>(), client_options, data.problems);

    EvalOptions options;
    options.concurrency = cfg.value("concurrency", options.concurrency);
    options.max_tokens = cfg.value("max_tokens", options.max_tokens);
    options.retries = cfg.value("retries", options.retries);
    options.backoff = std::chrono::milliseconds(cfg.value("backoff_ms", std::int64_t{500}));
    options.resamples = cfg.value("resamples", options.resamples);

    const EvalResult result = run_eval(data.problems, spec, generator->impl, *client, options);

    if (cfg.contains("records")) {
      std::string lines;
      for (const auto& r : result.records) lines += record_to_json(r).dump() + "\n";
      write_file(cfg.at("records").get<std::string>(), lines);
    }
    if (cfg.contains("timing")) {
      std::string lines;
      for (const auto& r : result.records) lines += timing_to_json(r).dump() + "\n";
      write_file(cfg.at("timing").get<std::string>(), lines);
    }
    std::size_t transport_failures = 0;
    for (const auto& r : result.records) transport_failures += r.transport_failure ? 1 : 0;
    Json metrics = metrics_to_json(result.metrics);
    metrics["regime"] = std::string(to_string(spec.regime));
    metrics["model"] = cfg.at("model").get<std::string>();
    metrics["transport_failures"] = transport_failures;
    *out_metrics_json = copy_out(metrics.dump(2));
  });
}

mg_status mg_extract_answer(const char* text, int64_t* out_value, int* out_found) {
  return guarded([&] {
    require(text && out_value && out_found, "null argument");
    const auto v = extract_answer(text);
    *out_found = v ? 1 : 0;
    *out_value = v.value_or(0);
  });
}

mg_status mg_bootstrap_ci(const unsigned char* flags, size_t n, size_t resamples, double level,
                          uint64_t seed, double* out_accuracy, double* out_low, double* out_high) {
  return guarded([&] {
    require(flags && out_accuracy && out_low && out_high, "null argument");
    std::vector<bool> v(flags, flags + n);
    for (std::size_t i = 0; i < n; ++i) v[i] = flags[i] != 0;
    const Metrics m = bootstrap_ci(v, resamples, level, seed);
    *out_accuracy = m.accuracy;
    *out_low = m.ci_low;
    *out_high = m.ci_high;
  });
}

mg_status mg_expected_nonlinear_width(size_t depth, int comparison_root, int64_t* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = expected_nonlinear_width(depth, comparison_root ? RootKind::Comparison : RootKind::Container);
  });
}

mg_status mg_solve_world_model(const char* world_model_json, char** out_json) {
  return guarded([&] {
    require(world_model_json && out_json, "null argument");
    const Json j = parse_json(world_model_json);
    WorldModel wm;
    for (const auto& s : j.at("body")) wm.body.push_back(parse_form(s.get<std::string>()));
    wm.question = parse_form(j.at("question").get<std::string>());
    const SolveResult r = solve(wm);
    Json out{{"status", std::string(to_string(r.status))},
             {"answer", r.answer ? Json(*r.answer) : Json(nullptr)}};
    *out_json = copy_out(out.dump());
  });
}

}  // extern "C"
