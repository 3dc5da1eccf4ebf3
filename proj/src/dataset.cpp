#include "mathgap/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

#include "mathgap/error.hpp"
#include "mathgap/oracle.hpp"

namespace mathgap {

namespace {

std::string problem_id(Family family, std::size_t complexity, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%zu-%05zu", complexity, index);
  return std::string(to_string(family)) + "-" + buf;
}

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::Schema, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::Schema, std::string("field '") + key + "' has the wrong type");
  }
}

Json histogram(const std::map<std::size_t, std::size_t>& counts) {
  Json out = Json::object();
  for (const auto& [k, v] : counts) out[std::to_string(k)] = v;
  return out;
}

std::string line_error(std::size_t line, const std::string& message) {
  return "line " + std::to_string(line) + ": " + message;
}

}  // namespace

WorldModel Problem::world_model() const {
  WorldModel wm;
  const auto leaves = tree.leaves();
  for (std::size_t pos : rendered.order) wm.body.push_back(tree[leaves.at(pos)].label);
  wm.question = question_form(tree);
  return wm;
}

ProblemGenerator::ProblemGenerator(Vocab vocab, TemplateSet templates, QuantityRange range)
    : vocab_(std::move(vocab)),
      templates_(std::move(templates)),
      lexicon_(Lexicon::from(vocab_)),
      range_(range) {
  vocab_.validate();
  templates_.validate();
}

ProblemGenerator ProblemGenerator::defaults() {
  return ProblemGenerator(Vocab::defaults(), TemplateSet::defaults());
}

Problem ProblemGenerator::generate(const TreeSpec& spec) const {
  Rng rng(spec.seed);
  const ProofTree abstract = sample_tree(spec, rng);
  const std::size_t distance = spec.family == Family::OrderPerturbed ? spec.distance : 0;
  return finish(abstract, spec.family, distance, spec.seed, rng);
}

Problem ProblemGenerator::primitive(RuleId rule, Family family, std::uint64_t seed) const {
  Rng rng(seed);
  return finish(sample_primitive_tree(rule, rng), family, 0, seed, rng);
}

Problem ProblemGenerator::finish(const ProofTree& abstract, Family family, std::size_t distance,
                                 std::uint64_t seed, Rng& rng) const {
  Problem p;
  p.family = family;
  p.seed = seed;
  p.distance = distance;
  p.tree = instantiate(abstract, vocab_, rng, range_);
  const auto policy =
      distance > 0 ? OrderingPolicy::move_to_front(distance) : OrderingPolicy::canonical();
  p.rendered = render_problem(p.tree, policy, templates_, lexicon_, rng);
  p.cot = render_cot(p.tree, p.rendered, lexicon_);
  p.answer = evaluate_tree(p.tree);
  p.depth = p.tree.height();
  p.width = p.tree.width();
  return p;
}

void check_oracle(const Problem& problem) {
  const SolveResult r = solve(problem.world_model());
  if (r.status != SolveStatus::Answer || *r.answer != problem.answer) {
    std::string got = r.status == SolveStatus::Answer ? std::to_string(*r.answer)
                                                      : std::string(to_string(r.status));
    throw Error(ErrorCode::OracleMismatch, "problem " + problem.id + ": tree gives " +
                                               std::to_string(problem.answer) +
                                               ", linear system gives " + got);
  }
}

std::vector<Problem> generate_dataset(const ProblemGenerator& generator, TreeSpec spec,
                                      std::size_t n, std::uint64_t seed) {
  spec.validate();
  std::vector<Problem> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    spec.seed = seed ^ i;
    Problem p = generator.generate(spec);
    p.id = problem_id(spec.family, spec.complexity(), i);
    check_oracle(p);
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

Json tree_to_json(const ProofTree& tree) {
  auto node_json = [&](auto&& self, std::size_t id) -> Json {
    const ProofNode& n = tree[id];
    Json j;
    j["label"] = encode(n.label);
    if (!n.is_axiom()) {
      j["rule"] = std::string(to_string(*n.rule));
      Json children = Json::array();
      for (std::size_t c : n.children) children.push_back(self(self, c));
      j["children"] = std::move(children);
    }
    return j;
  };
  return node_json(node_json, ProofTree::root());
}

ProofTree tree_from_json(const Json& j) {
  ProofTree tree(parse_form(field<std::string>(j, "label")));
  // Rebuild breadth first so node indices follow the sampler's layout.
  std::vector<std::pair<std::size_t, const Json*>> queue{{ProofTree::root(), &j}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [id, node] = queue[head];
    if (!node->contains("rule")) continue;
    const RuleId rule = parse_rule(field<std::string>(*node, "rule"));
    const Json& children = node->at("children");
    if (!children.is_array() || children.empty()) {
      throw Error(ErrorCode::Schema, "derived node without children");
    }
    std::vector<LogicalForm> labels;
    for (const auto& c : children) labels.push_back(parse_form(field<std::string>(c, "label")));
    const auto added = tree.expand(id, rule, std::move(labels));
    for (std::size_t i = 0; i < added.size(); ++i) queue.emplace_back(added[i], &children[i]);
  }
  return tree;
}

Json problem_to_json(const Problem& p) {
  const WorldModel wm = p.world_model();
  Json body = Json::array();
  for (const auto& f : wm.body) body.push_back(encode(f));
  Json j;
  j["id"] = p.id;
  j["family"] = std::string(to_string(p.family));
  j["depth"] = p.depth;
  j["width"] = p.width;
  j["distance"] = p.distance;
  j["body_text"] = p.rendered.body();
  j["question_text"] = p.rendered.question;
  j["cot_text"] = p.cot;
  j["answer"] = p.answer;
  j["world_model"] = Json{{"body", std::move(body)}, {"question", encode(wm.question)}};
  j["seed"] = p.seed;
  j["body_sentences"] = p.rendered.body_sentences();
  j["leaf_order"] = p.rendered.order;
  j["proof_tree"] = tree_to_json(p.tree);
  return j;
}

Problem problem_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Schema, "record is not an object");
  Problem p;
  p.id = field<std::string>(j, "id");
  p.family = parse_family(field<std::string>(j, "family"));
  p.depth = field<std::size_t>(j, "depth");
  p.width = field<std::size_t>(j, "width");
  p.distance = field<std::size_t>(j, "distance");
  p.seed = field<std::uint64_t>(j, "seed");
  p.answer = field<std::int64_t>(j, "answer");
  p.cot = field<std::string>(j, "cot_text");
  p.tree = tree_from_json(j.at("proof_tree"));

  const auto sentences = field<std::vector<std::string>>(j, "body_sentences");
  p.rendered.order = field<std::vector<std::size_t>>(j, "leaf_order");
  p.rendered.question = field<std::string>(j, "question_text");
  const std::size_t n = p.tree.width();
  if (sentences.size() != n || p.rendered.order.size() != n) {
    throw Error(ErrorCode::Schema, "body does not match the proof tree's leaves");
  }
  p.rendered.leaf_sentences.assign(n, {});
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = p.rendered.order[i];
    if (pos >= n || seen[pos]) throw Error(ErrorCode::Schema, "leaf_order is not a permutation");
    seen[pos] = true;
    p.rendered.leaf_sentences[pos] = sentences[i];
  }
  return p;
}

void write_jsonl(std::ostream& out, const std::vector<Problem>& problems) {
  for (const auto& p : problems) out << problem_to_json(p).dump() << '\n';
}

LoadedDataset read_jsonl(std::istream& in) {
  LoadedDataset out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.problems.push_back(problem_from_json(Json::parse(line)));
      out.lines.push_back(lineno);
    } catch (const nlohmann::json::exception& e) {
      out.errors.push_back(line_error(lineno, e.what()));
    } catch (const Error& e) {
      out.errors.push_back(line_error(lineno, e.what()));
    }
  }
  return out;
}

Json dataset_stats(std::istream& in) {
  const LoadedDataset data = read_jsonl(in);
  std::map<std::string, std::size_t> families;
  std::map<std::size_t, std::size_t> depths, widths, distances;
  std::int64_t lo = 0, hi = 0;
  double sum = 0;
  for (std::size_t i = 0; i < data.problems.size(); ++i) {
    const Problem& p = data.problems[i];
    ++families[std::string(to_string(p.family))];
    ++depths[p.depth];
    ++widths[p.width];
    ++distances[p.distance];
    lo = i == 0 ? p.answer : std::min(lo, p.answer);
    hi = i == 0 ? p.answer : std::max(hi, p.answer);
    sum += static_cast<double>(p.answer);
  }
  Json out;
  const std::size_t n = data.problems.size();
  out["n"] = n;
  Json fam = Json::object();
  for (const auto& [k, v] : families) fam[k] = v;
  out["families"] = std::move(fam);
  out["depth"] = histogram(depths);
  out["width"] = histogram(widths);
  out["distance"] = histogram(distances);
  if (n > 0) {
    out["answer"] = Json{{"min", lo}, {"max", hi}, {"mean", sum / static_cast<double>(n)}};
  } else {
    out["answer"] = nullptr;
  }
  out["errors"] = data.errors;
  Json warnings = Json::array();
  if (n == 0) warnings.push_back("dataset is empty");
  out["warnings"] = std::move(warnings);
  return out;
}

Json verify_dataset(std::istream& in) {
  Json failures = Json::array();
  std::size_t n = 0;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& id, const std::string& reason) {
    failures.push_back(Json{{"line", lineno}, {"id", id}, {"reason", reason}});
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++n;
    std::string id;
    try {
      const Json j = Json::parse(line);
      id = j.value("id", std::string{});
      const auto answer = field<std::int64_t>(j, "answer");
      const Json& wmj = j.at("world_model");
      WorldModel wm;
      for (const auto& s : field<std::vector<std::string>>(wmj, "body")) wm.body.push_back(parse_form(s));
      wm.question = parse_form(field<std::string>(wmj, "question"));
      const SolveResult r = solve(wm);
      if (r.status != SolveStatus::Answer) {
        fail(id, "linear system is " + std::string(to_string(r.status)));
        continue;
      }
      if (*r.answer != answer) {
        fail(id, "linear system gives " + std::to_string(*r.answer) + ", record says " +
                     std::to_string(answer));
        continue;
      }
      if (j.contains("proof_tree")) {
        const std::int64_t tree_answer = evaluate_tree(tree_from_json(j.at("proof_tree")));
        if (tree_answer != answer) {
          fail(id, "proof tree gives " + std::to_string(tree_answer));
        }
      }
    } catch (const nlohmann::json::exception& e) {
      fail(id, e.what());
    } catch (const Error& e) {
      fail(id, e.what());
    }
  }
  Json out;
  out["n"] = n;
  out["passed"] = n - failures.size();
  out["failures"] = std::move(failures);
  return out;
}

std::vector<Problem> permute_dataset(const std::vector<Problem>& problems,
                                     const OrderingPolicy& policy) {
  std::vector<Problem> out;
  out.reserve(problems.size());
  for (const auto& p : problems) {
    Problem q = p;
    try {
      q.rendered = reorder(q.tree, q.rendered, policy);
    } catch (const Error& e) {
      throw Error(e.code(), "problem " + p.id + ": " + e.what());
    }
    q.distance = policy.kind() == OrderingPolicy::Kind::MoveToFront ? policy.distance() : 0;
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace mathgap
