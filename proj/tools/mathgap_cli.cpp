#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mathgap/mathgap.h"

namespace {

using Json = nlohmann::ordered_json;

struct Failure {
  mg_status status;
};

void check(mg_status status) {
  if (status != MG_OK) throw Failure{status};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  mg_string_free(s);
  return out;
}

struct GeneratorOptions {
  std::string agents, extended_agents, entities, attributes, units, hypernyms, templates;
  std::int64_t quantity_min = 2;
  std::int64_t quantity_max = 20;

  void attach(CLI::App* app) {
    app->add_option("--agents", agents, "Agent name list (one per line)")->check(CLI::ExistingFile);
    app->add_option("--extended-agents", extended_agents, "Fallback agent list for wide problems")
        ->check(CLI::ExistingFile);
    app->add_option("--entities", entities, "Entity list")->check(CLI::ExistingFile);
    app->add_option("--attributes", attributes, "Attribute list")->check(CLI::ExistingFile);
    app->add_option("--units", units, "Unit list")->check(CLI::ExistingFile);
    app->add_option("--hypernyms", hypernyms, "entity|category lines")->check(CLI::ExistingFile);
    app->add_option("--templates", templates, "Template file (predicate|sign|template)")
        ->check(CLI::ExistingFile);
    app->add_option("--quantity-min", quantity_min, "Smallest axiom magnitude")->capture_default_str();
    app->add_option("--quantity-max", quantity_max, "Largest axiom magnitude")->capture_default_str();
  }

  std::string json() const {
    Json j = Json::object();
    auto put = [&](const char* key, const std::string& v) {
      if (!v.empty()) j[key] = v;
    };
    put("agents", agents);
    put("extended_agents", extended_agents);
    put("entities", entities);
    put("attributes", attributes);
    put("units", units);
    put("hypernyms", hypernyms);
    put("templates", templates);
    j["quantity_min"] = quantity_min;
    j["quantity_max"] = quantity_max;
    return j.dump();
  }
};

class Generator {
 public:
  explicit Generator(const GeneratorOptions& opts) { check(mg_generator_create(opts.json().c_str(), &handle_)); }
  ~Generator() { mg_generator_destroy(handle_); }
  Generator(const Generator&) = delete;
  Generator& operator=(const Generator&) = delete;
  const mg_generator* get() const { return handle_; }

 private:
  mg_generator* handle_ = nullptr;
};

void write_manifest(const CLI::App* sub, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest " + path);
  out << "# Replay with: mathgap --config " << path << " " << sub->get_name() << "\n";
  out << "[" << sub->get_name() << "]\n";
  // Options without a value or default come out as `key=""`, which does not read back.
  std::istringstream lines(sub->config_to_str(true, false));
  for (std::string line; std::getline(lines, line);) {
    if (!line.ends_with("=\"\"")) out << line << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate, inspect and evaluate arithmetic word problems with controlled proof structure."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mg_version()));
  app.set_config("--config", "", "TOML manifest to replay; command-line flags take precedence");

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a dataset of problems");
  std::string family;
  std::optional<std::size_t> depth, width, distance, complexity;
  std::size_t count = 400;
  std::uint64_t seed = 0;
  std::string out_path;
  std::vector<std::string> rules;
  GeneratorOptions gen_opts;
  gen->add_option("--family", family, "linear-depth, linear-width, nonlinear-depth or order-perturbed")
      ->required()
      ->check(CLI::IsMember({"linear-depth", "linear-width", "nonlinear-depth", "order-perturbed"}));
  gen->add_option("--depth", depth, "Proof depth (linear-depth, nonlinear-depth)");
  gen->add_option("--width", width, "Leaf count (linear-width)");
  gen->add_option("--distance", distance, "Move distance (order-perturbed)");
  gen->add_option("--complexity", complexity, "The family's varied dimension");
  gen->add_option("--n", count, "Number of problems")->capture_default_str();
  gen->add_option("--seed", seed, "Dataset seed")->capture_default_str();
  gen->add_option("--rules", rules, "Restrict the inference rules");
  gen->add_option("--out", out_path, "Output JSONL path")->required();
  gen_opts.attach(gen);

  // stats
  auto* stats = app.add_subcommand("stats", "Summarize a dataset");
  std::string stats_path;
  stats->add_option("dataset", stats_path, "Dataset JSONL")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Re-check every record with the linear-system solver");
  std::string verify_path;
  verify->add_option("dataset", verify_path, "Dataset JSONL")->required();

  // permute
  auto* permute = app.add_subcommand("permute", "Re-order the body sentences of a dataset");
  std::string permute_in, permute_out, policy;
  std::optional<std::size_t> move_distance;
  permute->add_option("--dataset", permute_in, "Input JSONL")->required();
  permute->add_option("--policy", policy, "canonical, move-to-front:K or permutation:i,j,...");
  permute->add_option("--distance", move_distance, "Shorthand for --policy move-to-front:K");
  permute->add_option("--out", permute_out, "Output JSONL path")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Prompt a model on a dataset and score it");
  std::string eval_dataset, model, regime = "zero-shot", base_url = "https://api.openai.com/v1",
                                    api_key_env = "OPENAI_API_KEY", out_dir;
  std::optional<std::size_t> shots, range_min, range_max;
  std::uint64_t prompt_seed = 0;
  std::size_t concurrency = 1, max_tokens = 4096, retries = 3, resamples = 10000;
  std::int64_t backoff_ms = 500;
  int timeout = 120;
  GeneratorOptions eval_gen_opts;
  eval->add_option("--dataset", eval_dataset, "Dataset JSONL")->required();
  eval->add_option("--model", model, "stub:gold, stub:const:TEXT, stub:script:FILE or http:MODEL")->required();
  eval->add_option("--regime", regime, "Prompt regime")
      ->check(CLI::IsMember({"zero-shot", "primitive", "range", "in-distribution"}))
      ->capture_default_str();
  eval->add_option("--shots", shots, "In-context examples (12, or 5 for nonlinear)");
  eval->add_option("--range-min", range_min, "Smallest example complexity (range regime)");
  eval->add_option("--range-max", range_max, "Largest example complexity (range regime)");
  eval->add_option("--prompt-seed", prompt_seed, "Seed for in-context examples and bootstrap")
      ->capture_default_str();
  eval->add_option("--base-url", base_url, "Chat-completions endpoint base")->capture_default_str();
  eval->add_option("--api-key-env", api_key_env, "Environment variable holding the API token")
      ->capture_default_str();
  eval->add_option("--timeout", timeout, "Request timeout in seconds")->capture_default_str();
  eval->add_option("--concurrency", concurrency, "Requests in flight")->capture_default_str();
  eval->add_option("--max-tokens", max_tokens, "Completion token budget")->capture_default_str();
  eval->add_option("--retries", retries, "Retries per request")->capture_default_str();
  eval->add_option("--backoff-ms", backoff_ms, "First retry delay (doubles each time)")->capture_default_str();
  eval->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();
  eval->add_option("--out-dir", out_dir, "Directory for metrics.json, records.jsonl, timing.jsonl")
      ->required();
  eval_gen_opts.attach(eval);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      std::optional<std::size_t> c = complexity;
      if (!c) {
        if (family == "linear-width") c = width;
        else if (family == "order-perturbed") c = distance;
        else c = depth;
      }
      if (!c) {
        std::cerr << "error: give --complexity or the family's --depth/--width/--distance\n";
        return 2;
      }
      Json spec{{"family", family}, {"complexity", *c}, {"n", count}, {"seed", seed}};
      if (!rules.empty()) spec["rules"] = rules;
      Generator g(gen_opts);
      check(mg_generate_dataset(g.get(), spec.dump().c_str(), out_path.c_str()));
      write_manifest(gen, out_path + ".manifest.toml");
      std::cerr << "wrote " << count << " problems to " << out_path << "\n";
    } else if (stats->parsed()) {
      char* report = nullptr;
      check(mg_dataset_stats(stats_path.c_str(), &report));
      const std::string text = take(report);
      std::cout << text << "\n";
      const Json j = Json::parse(text);
      for (const auto& w : j.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << "\n";
      for (const auto& e : j.at("errors")) std::cerr << "malformed: " << e.get<std::string>() << "\n";
    } else if (verify->parsed()) {
      char* report = nullptr;
      check(mg_verify_dataset(verify_path.c_str(), &report));
      const std::string text = take(report);
      std::cout << text << "\n";
      return Json::parse(text).at("failures").empty() ? 0 : 1;
    } else if (permute->parsed()) {
      if (move_distance) policy = "move-to-front:" + std::to_string(*move_distance);
      if (policy.empty()) {
        std::cerr << "error: give --policy or --distance\n";
        return 2;
      }
      check(mg_permute_dataset(permute_in.c_str(), policy.c_str(), permute_out.c_str()));
      write_manifest(permute, permute_out + ".manifest.toml");
    } else if (eval->parsed()) {
      std::filesystem::create_directories(out_dir);
      const auto dir = std::filesystem::path(out_dir);
      Json cfg{{"dataset", eval_dataset},
               {"model", model},
               {"regime", regime},
               {"seed", prompt_seed},
               {"base_url", base_url},
               {"api_key_env", api_key_env},
               {"timeout_seconds", timeout},
               {"concurrency", concurrency},
               {"max_tokens", max_tokens},
               {"retries", retries},
               {"backoff_ms", backoff_ms},
               {"resamples", resamples},
               {"records", (dir / "records.jsonl").string()},
               {"timing", (dir / "timing.jsonl").string()}};
      if (shots) cfg["shots"] = *shots;
      if (range_min) cfg["range_min"] = *range_min;
      if (range_max) cfg["range_max"] = *range_max;
      Generator g(eval_gen_opts);
      char* metrics = nullptr;
      check(mg_eval(g.get(), cfg.dump().c_str(), &metrics));
      const std::string text = take(metrics);
      std::ofstream((dir / "metrics.json").string()) << text << "\n";
      write_manifest(eval, (dir / "manifest.toml").string());
      std::cout << text << "\n";
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << mg_status_string(f.status) << ": " << mg_last_error() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
