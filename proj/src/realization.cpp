#include "mathgap/realization.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "mathgap/error.hpp"

namespace mathgap {

namespace {

constexpr std::string_view kDefaultTemplates = R"(# predicate|sign|template
container|any|[a] has [q] [e]s.
container|any|[a] owns [q] [e]s.
container|any|[a] has a collection of [q] [e]s.
container|any|[a] has [q] [u]s of [k] [e]s.
container|any|[a] owns [q] [u]s of [k] [e]s.
container|question|How many [e]s does [a] have?
container|question|What is the number of [e]s that [a] has?
container|question|How many [e]s does [a] have in their collection?
comparison|more|[a] has [q] more [e]s than [b].
comparison|more|[b] has [q] fewer [e]s than [a].
comparison|more|Compared to [b], [a] has [q] more [e]s.
comparison|more|[a] owns [q] more [e]s than [b].
comparison|fewer|[a] has [q] fewer [e]s than [b].
comparison|fewer|[b] has [q] more [e]s than [a].
comparison|fewer|Compared to [b], [a] has [q] fewer [e]s.
comparison|fewer|[a] owns [q] fewer [e]s than [b].
comparison|same|[a] has as many [e]s as [b].
comparison|same|[a] and [b] have the same number of [e]s.
comparison|same|[b] has exactly as many [e]s as [a].
comparison|question|How many more [e]s does [a] have than [b]?
comparison|question|What is the difference between the number of [e]s that [a] has and the number of [e]s that [b] has?
transfer|any|[a] gave [b] [q] [e]s.
transfer|any|[b] got [q] more [e]s from [a].
transfer|any|[b] received [q] [e]s from [a].
transfer|any|[a] handed [q] [e]s to [b].
partwhole|any|[a] have [q] [e]s combined.
partwhole|any|Together, [a] have [q] [e]s.
partwhole|any|[a] have [q] [e]s in total.
partwhole|question|How many [e]s do [a] have combined?
partwhole|question|How many [e]s do [a] have altogether?
comp-eq|any|The number of [e]s that [a] has more than [b] is the same as the difference between the number of [e]s that [c] has compared to [d].
comp-eq|any|The number of [e]s that [c] has more than [d] is equal to the difference between the number of [e]s that [a] and [b] have.
comp-eq|any|The difference between the number of [e]s that [a] and [b] have is the same as the difference between the number of [e]s that [c] and [d] have.
)";

struct Token {
  bool slot = false;
  char name = 0;
  bool agree = false;  // `[e]s` / `[u]s`
  std::string text;
};

std::vector<Token> tokenize(std::string_view templ) {
  std::vector<Token> out;
  std::string literal;
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (templ[i] == '[' && i + 2 < templ.size() && templ[i + 2] == ']' &&
        std::string_view("abcdqeku").find(templ[i + 1]) != std::string_view::npos) {
      if (!literal.empty()) out.push_back({false, 0, false, std::move(literal)});
      literal.clear();
      Token t{true, templ[i + 1], false, {}};
      i += 2;
      if ((t.name == 'e' || t.name == 'u') && i + 1 < templ.size() && templ[i + 1] == 's') {
        t.agree = true;
        ++i;
      }
      out.push_back(t);
    } else {
      literal += templ[i];
    }
  }
  if (!literal.empty()) out.push_back({false, 0, false, std::move(literal)});
  return out;
}

std::set<char> slots_of(std::string_view templ) {
  std::set<char> slots;
  for (const auto& t : tokenize(templ)) {
    if (t.slot) slots.insert(t.name);
  }
  return slots;
}

std::string_view agent_slots(Predicate p) {
  switch (p) {
    case Predicate::Container:
    case Predicate::PartWhole: return "a";
    case Predicate::Comparison:
    case Predicate::Transfer: return "ab";
    case Predicate::CompEq: return "abcd";
  }
  return "";
}

// Slot letter -> agent slot of the logical form.
std::size_t agent_index(Predicate p, char slot) {
  if (p == Predicate::Transfer) return slot == 'a' ? 1 : 0;
  return static_cast<std::size_t>(slot - 'a');
}

bool sign_allowed(Predicate p, TemplateSign s) {
  switch (p) {
    case Predicate::Comparison:
      return s != TemplateSign::Any;
    case Predicate::Container:
    case Predicate::PartWhole:
      return s == TemplateSign::Any || s == TemplateSign::Question;
    default:
      return s == TemplateSign::Any;
  }
}

[[noreturn]] void schema(const std::string& why) { throw Error(ErrorCode::Schema, why); }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

TemplateSign sign_of(const LogicalForm& form) {
  if (form.predicate != Predicate::Comparison) return TemplateSign::Any;
  const auto v = form.value();
  return v > 0 ? TemplateSign::More : v < 0 ? TemplateSign::Fewer : TemplateSign::Same;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return std::string_view("aeiou").find(c) != std::string_view::npos; }

std::string magnitude_text(std::int64_t v) {
  // |INT64_MIN| does not fit; print it from the unsigned value.
  const auto m = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
  return std::to_string(m);
}

// "a+b" or "a-|b|" for the step a -> a + b.
std::string step_text(std::int64_t from, std::int64_t to) {
  const std::int64_t delta = to - from;
  return std::to_string(from) + (delta < 0 ? "-" : "+") + magnitude_text(delta) + "=" +
         std::to_string(to);
}

}  // namespace

std::string_view to_string(TemplateSign s) noexcept {
  switch (s) {
    case TemplateSign::Any: return "any";
    case TemplateSign::More: return "more";
    case TemplateSign::Fewer: return "fewer";
    case TemplateSign::Same: return "same";
    case TemplateSign::Question: return "question";
  }
  return "?";
}

TemplateSign parse_template_sign(std::string_view text) {
  for (auto s : {TemplateSign::Any, TemplateSign::More, TemplateSign::Fewer, TemplateSign::Same,
                 TemplateSign::Question}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::Parse, "unknown template sign '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// TemplateSet

TemplateSet TemplateSet::defaults() { return parse(kDefaultTemplates); }

TemplateSet TemplateSet::parse(std::string_view text) {
  TemplateSet set;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto first = body.find('|');
    const auto second = first == std::string::npos ? first : body.find('|', first + 1);
    if (second == std::string::npos) {
      throw Error(ErrorCode::Parse, "template line " + std::to_string(lineno) +
                                        ": expected 'predicate|sign|template'");
    }
    try {
      set.add(parse_predicate(trim(body.substr(0, first))),
              parse_template_sign(trim(body.substr(first + 1, second - first - 1))),
              trim(body.substr(second + 1)));
    } catch (const Error& e) {
      throw Error(e.code(), "template line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open template file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void TemplateSet::add(Predicate predicate, TemplateSign sign, std::string text) {
  if (!sign_allowed(predicate, sign)) {
    schema("sign '" + std::string(to_string(sign)) + "' does not apply to " +
           std::string(to_string(predicate)));
  }
  const auto slots = slots_of(text);
  std::string allowed(agent_slots(predicate));
  allowed += "ek";
  allowed += 'u';
  const bool wants_quantity = has_quantity_property(predicate) && sign != TemplateSign::Question &&
                              sign != TemplateSign::Same;
  if (wants_quantity) allowed += 'q';
  for (char c : slots) {
    if (allowed.find(c) == std::string::npos) {
      schema("slot [" + std::string(1, c) + "] does not belong in a " +
             std::string(to_string(predicate)) + " " + std::string(to_string(sign)) + " template");
    }
  }
  std::string required(agent_slots(predicate));
  required += 'e';
  if (wants_quantity) required += 'q';
  for (char c : required) {
    if (!slots.contains(c)) schema("template is missing slot [" + std::string(1, c) + "]");
  }
  entries_.push_back({predicate, sign, std::move(text)});
}

void TemplateSet::validate() const {
  const std::pair<Predicate, TemplateSign> needed[] = {
      {Predicate::Container, TemplateSign::Any},     {Predicate::Container, TemplateSign::Question},
      {Predicate::Comparison, TemplateSign::More},   {Predicate::Comparison, TemplateSign::Fewer},
      {Predicate::Comparison, TemplateSign::Same},   {Predicate::Comparison, TemplateSign::Question},
      {Predicate::Transfer, TemplateSign::Any},      {Predicate::PartWhole, TemplateSign::Any},
      {Predicate::PartWhole, TemplateSign::Question}, {Predicate::CompEq, TemplateSign::Any},
  };
  for (const auto& [p, s] : needed) {
    const bool found = std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) {
      const auto slots = slots_of(e.text);
      return e.predicate == p && e.sign == s && !slots.contains('k') && !slots.contains('u');
    });
    if (!found) {
      schema("no plain template for " + std::string(to_string(p)) + "|" +
             std::string(to_string(s)));
    }
  }
}

std::vector<const std::string*> TemplateSet::candidates(const LogicalForm& form,
                                                        bool question) const {
  const TemplateSign sign = question ? TemplateSign::Question : sign_of(form);
  const bool has_attr = form.entity && form.entity->attribute;
  const bool has_unit = form.entity && form.entity->unit;
  std::vector<const std::string*> out;
  for (const auto& e : entries_) {
    if (e.predicate != form.predicate || e.sign != sign) continue;
    const auto slots = slots_of(e.text);
    if (slots.contains('k') && !has_attr) continue;
    if (slots.contains('u') && !has_unit) continue;
    out.push_back(&e.text);
  }
  return out;
}

std::string TemplateSet::to_text() const {
  std::string out;
  for (const auto& e : entries_) {
    out += std::string(to_string(e.predicate)) + "|" + std::string(to_string(e.sign)) + "|" +
           e.text + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lexicon

Lexicon Lexicon::defaults() {
  Lexicon lex;
  lex.irregular_plurals = {
      {"child", "children"}, {"person", "people"}, {"man", "men"},       {"woman", "women"},
      {"mouse", "mice"},     {"goose", "geese"},   {"tooth", "teeth"},   {"foot", "feet"},
      {"knife", "knives"},   {"leaf", "leaves"},   {"loaf", "loaves"},   {"shelf", "shelves"},
      {"sheep", "sheep"},    {"fish", "fish"},     {"deer", "deer"},     {"potato", "potatoes"},
      {"tomato", "tomatoes"}, {"mango", "mangoes"}, {"hero", "heroes"},  {"soap", "soap"},
  };
  return lex;
}

Lexicon Lexicon::from(const Vocab& vocab) {
  Lexicon lex = defaults();
  lex.hypernyms = vocab.hypernyms;
  return lex;
}

std::string Lexicon::plural(std::string_view noun) const {
  const auto space = noun.rfind(' ');
  const std::string head(space == std::string_view::npos ? std::string_view{} : noun.substr(0, space + 1));
  const std::string word(space == std::string_view::npos ? noun : noun.substr(space + 1));
  if (auto it = irregular_plurals.find(word); it != irregular_plurals.end()) return head + it->second;
  if (ends_with(word, "s") || ends_with(word, "x") || ends_with(word, "z") ||
      ends_with(word, "ch") || ends_with(word, "sh")) {
    return head + word + "es";
  }
  if (word.size() >= 2 && word.back() == 'y' && !is_vowel(word[word.size() - 2])) {
    return head + word.substr(0, word.size() - 1) + "ies";
  }
  return head + word + "s";
}

std::string Lexicon::category(const std::vector<std::string>& entities) const {
  std::vector<std::string> distinct;
  for (const auto& e : entities) {
    if (std::find(distinct.begin(), distinct.end(), e) == distinct.end()) distinct.push_back(e);
  }
  if (distinct.size() == 1) return distinct.front();
  std::optional<std::string> shared;
  for (const auto& e : distinct) {
    auto it = hypernyms.find(e);
    if (it == hypernyms.end() || (shared && *shared != it->second)) return "item";
    shared = it->second;
  }
  return shared.value_or("item");
}

std::string join_names(const std::vector<std::string>& names) {
  if (names.empty()) return {};
  if (names.size() == 1) return names.front();
  if (names.size() == 2) return names[0] + " and " + names[1];
  std::string out;
  for (std::size_t i = 0; i + 1 < names.size(); ++i) out += names[i] + ", ";
  return out + "and " + names.back();
}

std::string render_form(const LogicalForm& form, std::string_view templ, const Lexicon& lexicon) {
  const auto tokens = tokenize(templ);
  const bool explicit_attr = std::any_of(tokens.begin(), tokens.end(),
                                         [](const Token& t) { return t.slot && t.name == 'k'; });
  const bool explicit_unit = std::any_of(tokens.begin(), tokens.end(),
                                         [](const Token& t) { return t.slot && t.name == 'u'; });
  const Entity* entity = form.entity ? &*form.entity : nullptr;
  const bool has_number = form.quantity && !form.quantity->is_placeholder();
  const bool singular = has_number && (form.value() == 1 || form.value() == -1);

  auto need_entity = [&]() -> const Entity& {
    if (!entity) schema("template needs an entity: " + std::string(templ));
    return *entity;
  };

  std::string out;
  for (const auto& t : tokens) {
    if (!t.slot) {
      out += t.text;
      continue;
    }
    switch (t.name) {
      case 'a':
      case 'b':
      case 'c':
      case 'd':
        out += join_names(form.agent(agent_index(form.predicate, t.name)).members);
        break;
      case 'q':
        out += form.predicate == Predicate::Comparison ? magnitude_text(form.value())
                                                       : std::to_string(form.value());
        break;
      case 'k': {
        const auto& e = need_entity();
        if (!e.attribute) schema("template needs an attribute: " + std::string(templ));
        out += *e.attribute;
        break;
      }
      case 'u': {
        const auto& e = need_entity();
        if (!e.unit) schema("template needs a unit: " + std::string(templ));
        out += t.agree && !singular ? lexicon.plural(*e.unit) : *e.unit;
        break;
      }
      case 'e': {
        const auto& e = need_entity();
        const std::string noun = lexicon.category(e.members);
        const bool one = !t.agree || singular;
        if (explicit_unit) {
          out += lexicon.plural(noun);
          break;
        }
        const std::string attr = e.attribute && !explicit_attr ? *e.attribute + " " : "";
        if (e.unit) {
          out += attr + (one ? *e.unit : lexicon.plural(*e.unit)) + " of " + lexicon.plural(noun);
        } else {
          out += attr + (one ? noun : lexicon.plural(noun));
        }
        break;
      }
    }
  }
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

// ---------------------------------------------------------------------------
// Ordering

std::string OrderingPolicy::describe() const {
  switch (kind_) {
    case Kind::Canonical: return "canonical";
    case Kind::MoveToFront: return "move-to-front:" + std::to_string(distance_);
    case Kind::Permutation: {
      std::string out = "permutation:";
      for (std::size_t i = 0; i < order_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(order_[i]);
      }
      return out;
    }
  }
  return {};
}

OrderingPolicy OrderingPolicy::parse(std::string_view text) {
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw Error(ErrorCode::Parse, "bad ordering policy '" + std::string(text) + "'");
    }
    return v;
  };
  if (text == "canonical") return canonical();
  if (text.starts_with("move-to-front:")) return move_to_front(number(text.substr(14)));
  if (text.starts_with("permutation:")) {
    std::vector<std::size_t> order;
    std::string_view rest = text.substr(12);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      order.push_back(number(rest.substr(0, comma)));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return permutation(std::move(order));
  }
  throw Error(ErrorCode::Parse, "bad ordering policy '" + std::string(text) + "'");
}

std::vector<std::size_t> order_positions(const ProofTree& tree, const OrderingPolicy& policy) {
  const std::size_t n = tree.leaves().size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  switch (policy.kind()) {
    case OrderingPolicy::Kind::Canonical:
      return order;
    case OrderingPolicy::Kind::MoveToFront: {
      const std::size_t k = policy.distance();
      if (k >= n) {
        throw Error(ErrorCode::InvalidArgument, "move distance " + std::to_string(k) +
                                                    " needs more than " + std::to_string(n) +
                                                    " leaves");
      }
      if (k == 0) return order;
      if (!only_commutative_rules(tree)) {
        throw Error(ErrorCode::InvalidArgument,
                    "leaves of a tree with non-commutative steps keep canonical order");
      }
      std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                  order.begin() + static_cast<std::ptrdiff_t>(k) + 1);
      return order;
    }
    case OrderingPolicy::Kind::Permutation: {
      const auto& p = policy.order();
      std::vector<bool> seen(n, false);
      if (p.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "permutation has " + std::to_string(p.size()) +
                                                    " entries for " + std::to_string(n) +
                                                    " leaves");
      }
      for (std::size_t i : p) {
        if (i >= n || seen[i]) {
          throw Error(ErrorCode::InvalidArgument, "permutation is not a bijection");
        }
        seen[i] = true;
      }
      if (p != order && !only_commutative_rules(tree)) {
        throw Error(ErrorCode::InvalidArgument,
                    "leaves of a tree with non-commutative steps keep canonical order");
      }
      return p;
    }
  }
  return order;
}

std::vector<std::size_t> order_leaves(const ProofTree& tree, const OrderingPolicy& policy) {
  const auto leaves = tree.leaves();
  std::vector<std::size_t> out;
  for (std::size_t pos : order_positions(tree, policy)) out.push_back(leaves[pos]);
  return out;
}

// ---------------------------------------------------------------------------
// Problems and solutions

std::vector<std::string> RenderedProblem::body_sentences() const {
  std::vector<std::string> out;
  out.reserve(order.size());
  for (std::size_t pos : order) out.push_back(leaf_sentences.at(pos));
  return out;
}

std::string RenderedProblem::body() const {
  std::string out;
  for (const auto& s : body_sentences()) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

std::string RenderedProblem::text() const {
  const std::string b = body();
  return b.empty() ? question : b + " " + question;
}

LogicalForm question_form(const ProofTree& tree) {
  LogicalForm q = tree[ProofTree::root()].label;
  q.quantity = Quantity::placeholder();
  return q;
}

RenderedProblem render_problem(const ProofTree& tree, const OrderingPolicy& policy,
                               const TemplateSet& templates, const Lexicon& lexicon, Rng& rng) {
  RenderedProblem out;
  out.order = order_positions(tree, policy);
  auto draw = [&](const LogicalForm& form, bool question) {
    const auto options = templates.candidates(form, question);
    if (options.empty()) {
      throw Error(ErrorCode::MissingTemplate,
                  std::string("no ") + (question ? "question " : "") + "template for " +
                      encode(form));
    }
    return render_form(form, *options[rng.index(options.size())], lexicon);
  };
  for (std::size_t leaf : tree.leaves()) out.leaf_sentences.push_back(draw(tree[leaf].label, false));
  out.question = draw(question_form(tree), true);
  return out;
}

RenderedProblem reorder(const ProofTree& tree, RenderedProblem rendered,
                        const OrderingPolicy& policy) {
  rendered.order = order_positions(tree, policy);
  return rendered;
}

std::vector<std::string> cot_sentences(const ProofTree& tree, const RenderedProblem& rendered,
                                       const Lexicon& lexicon) {
  const auto leaves = tree.leaves();
  if (rendered.leaf_sentences.size() != leaves.size()) {
    throw Error(ErrorCode::InvalidArgument, "rendered problem does not belong to this tree");
  }
  std::vector<std::size_t> leaf_pos(tree.size(), 0);
  for (std::size_t i = 0; i < leaves.size(); ++i) leaf_pos[leaves[i]] = i;

  std::vector<std::string> out;
  for (std::size_t id : tree.post_order()) {
    const ProofNode& node = tree[id];
    if (node.is_axiom()) {
      out.push_back(rendered.leaf_sentences[leaf_pos[id]]);
      continue;
    }
    const LogicalForm& label = node.label;
    std::vector<const LogicalForm*> premises;
    for (std::size_t c : node.children) premises.push_back(&tree[c].label);

    switch (*node.rule) {
      case RuleId::CompAdd:
      case RuleId::CompEqAdd:
      case RuleId::TransferApply: {
        const LogicalForm* base = nullptr;
        for (const auto* p : premises) {
          if (p->predicate == Predicate::Container) base = p;
        }
        const std::string verb = *node.rule == RuleId::TransferApply ? " now has " : " has ";
        out.push_back(render_form(label, "So [a]" + verb + step_text(base->value(), label.value()) +
                                             " [e]s.",
                                  lexicon));
        break;
      }
      case RuleId::CompDeduce: {
        auto count_of = [&](const Agent& a) {
          for (const auto* p : premises) {
            if (p->agent(0) == a) return p->value();
          }
          throw Error(ErrorCode::LabelMismatch, "comp-deduce premise missing for " + a.name());
        };
        LogicalForm oriented = label;
        if (label.value() < 0) {
          oriented = LogicalForm::comparison(label.agent(1), label.agent(0),
                                             Quantity::of(checked_sub(0, label.value())),
                                             label.ent());
        }
        const std::int64_t x = count_of(oriented.agent(0));
        const std::int64_t y = count_of(oriented.agent(1));
        out.push_back(render_form(oriented,
                                  "So [a] has " + std::to_string(x) + "-" + std::to_string(y) +
                                      "=" + std::to_string(oriented.value()) +
                                      " more [e]s than [b].",
                                  lexicon));
        break;
      }
      case RuleId::PartWholeSum: {
        std::string sum;
        for (const auto* p : premises) {
          if (!sum.empty()) sum += '+';
          sum += std::to_string(p->value());
        }
        out.push_back(render_form(
            label, "Together, [a] have " + sum + "=" + std::to_string(label.value()) + " [e]s.",
            lexicon));
        break;
      }
    }
  }
  if (tree.size() == 1) {
    out.push_back("So the answer is " + std::to_string(tree[ProofTree::root()].label.value()) + ".");
  }
  return out;
}

std::string render_cot(const ProofTree& tree, const RenderedProblem& rendered,
                       const Lexicon& lexicon) {
  std::string out;
  for (const auto& s : cot_sentences(tree, rendered, lexicon)) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

}  // namespace mathgap
