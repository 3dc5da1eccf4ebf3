#include "mathgap/logic.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "mathgap/error.hpp"

namespace mathgap {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Schema: return "schema mismatch";
    case ErrorCode::Overflow: return "arithmetic overflow";
    case ErrorCode::LabelMismatch: return "label mismatch";
    case ErrorCode::Generation: return "generation failure";
    case ErrorCode::VocabularyExhausted: return "vocabulary exhausted";
    case ErrorCode::MissingTemplate: return "missing template";
    case ErrorCode::OracleMismatch: return "oracle mismatch";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Transport: return "transport error";
  }
  return "unknown error";
}

std::string_view to_string(Predicate p) noexcept {
  switch (p) {
    case Predicate::Container: return "container";
    case Predicate::Comparison: return "comparison";
    case Predicate::Transfer: return "transfer";
    case Predicate::PartWhole: return "partwhole";
    case Predicate::CompEq: return "comp-eq";
  }
  return "?";
}

Predicate parse_predicate(std::string_view text) {
  for (Predicate p : kAllPredicates) {
    if (to_string(p) == text) return p;
  }
  throw Error(ErrorCode::Parse, "unknown predicate '" + std::string(text) + "'");
}

const std::string& Agent::name() const {
  if (!is_atomic()) {
    throw Error(ErrorCode::Schema, "expected an atomic agent");
  }
  return members.front();
}

LogicalForm LogicalForm::container(Agent agent, Quantity q, Entity e) {
  LogicalForm f;
  f.predicate = Predicate::Container;
  f.agents[0] = std::move(agent);
  f.quantity = q;
  f.entity = std::move(e);
  return f;
}

LogicalForm LogicalForm::comparison(Agent a, Agent b, Quantity q, Entity e) {
  LogicalForm f;
  f.predicate = Predicate::Comparison;
  f.agents[0] = std::move(a);
  f.agents[1] = std::move(b);
  f.quantity = q;
  f.entity = std::move(e);
  return f;
}

LogicalForm LogicalForm::transfer(Agent receiver, Agent sender, Quantity q, Entity e) {
  LogicalForm f;
  f.predicate = Predicate::Transfer;
  f.agents[0] = std::move(receiver);
  f.agents[1] = std::move(sender);
  f.quantity = q;
  f.entity = std::move(e);
  return f;
}

LogicalForm LogicalForm::partwhole(Agent whole, Quantity q, Entity e) {
  LogicalForm f;
  f.predicate = Predicate::PartWhole;
  f.agents[0] = std::move(whole);
  f.quantity = q;
  f.entity = std::move(e);
  return f;
}

LogicalForm LogicalForm::comp_eq(Agent a, Agent b, Agent c, Agent d, Entity e) {
  LogicalForm f;
  f.predicate = Predicate::CompEq;
  f.agents[0] = std::move(a);
  f.agents[1] = std::move(b);
  f.agents[2] = std::move(c);
  f.agents[3] = std::move(d);
  f.entity = std::move(e);
  return f;
}

const Agent& LogicalForm::agent(std::size_t slot) const {
  if (slot >= agents.size() || !agents[slot]) {
    throw Error(ErrorCode::Schema, std::string(to_string(predicate)) + ": " +
                                       std::string(agent_property_name(predicate, slot)) +
                                       " required");
  }
  return *agents[slot];
}

const Entity& LogicalForm::ent() const {
  if (!entity) {
    throw Error(ErrorCode::Schema, std::string(to_string(predicate)) + ": entity required");
  }
  return *entity;
}

std::int64_t LogicalForm::value() const {
  if (!quantity || quantity->is_placeholder()) {
    throw Error(ErrorCode::Schema,
                std::string(to_string(predicate)) + ": concrete quantity required");
  }
  return *quantity->value;
}

std::size_t agent_arity(Predicate p) noexcept {
  switch (p) {
    case Predicate::Container:
    case Predicate::PartWhole: return 1;
    case Predicate::Comparison:
    case Predicate::Transfer: return 2;
    case Predicate::CompEq: return 4;
  }
  return 0;
}

bool has_quantity_property(Predicate p) noexcept { return p != Predicate::CompEq; }

std::string_view agent_property_name(Predicate p, std::size_t slot) noexcept {
  switch (p) {
    case Predicate::Container: return slot == 0 ? "agent" : "?";
    case Predicate::PartWhole: return slot == 0 ? "whole_agent" : "?";
    case Predicate::Transfer:
      return slot == 0 ? "receiver_agent" : slot == 1 ? "sender_agent" : "?";
    case Predicate::Comparison:
    case Predicate::CompEq: {
      static constexpr std::array<std::string_view, 4> names = {"agentA", "agentB", "agentC",
                                                                "agentD"};
      return slot < agent_arity(p) ? names[slot] : "?";
    }
  }
  return "?";
}

std::string_view entity_property_name(Predicate p) noexcept {
  return p == Predicate::PartWhole ? "whole_entity" : "entity";
}

bool semantically_equal(const LogicalForm& lhs, const LogicalForm& rhs) {
  if (lhs == rhs) return true;
  if (lhs.predicate != Predicate::Comparison || rhs.predicate != Predicate::Comparison) {
    return false;
  }
  if (!lhs.quantity || !rhs.quantity || lhs.quantity->is_placeholder() ||
      rhs.quantity->is_placeholder()) {
    return false;
  }
  return lhs.agents[0] == rhs.agents[1] && lhs.agents[1] == rhs.agents[0] &&
         lhs.entity == rhs.entity && *lhs.quantity->value == -*rhs.quantity->value;
}

namespace {

void check_members(const std::vector<std::string>& members, std::string_view what,
                   std::string_view prop, std::vector<std::string>& out) {
  if (members.empty()) {
    out.push_back(std::string(prop) + " has no members");
    return;
  }
  std::set<std::string_view> seen;
  for (const auto& m : members) {
    if (m.empty()) out.push_back(std::string(prop) + " has an empty name");
    if (!seen.insert(m).second) out.push_back("duplicate " + std::string(what) + " '" + m + "'");
  }
}

}  // namespace

ValidityReport validate_form(const LogicalForm& form, PlaceholderPolicy placeholders) {
  ValidityReport report;
  auto& out = report.violations;
  const Predicate p = form.predicate;
  const std::size_t arity = agent_arity(p);

  for (std::size_t slot = 0; slot < form.agents.size(); ++slot) {
    const auto& agent = form.agents[slot];
    if (slot < arity) {
      if (!agent) {
        out.push_back(std::string(agent_property_name(p, slot)) + " required");
        continue;
      }
      check_members(agent->members, "agent", agent_property_name(p, slot), out);
      if (p != Predicate::PartWhole && agent->members.size() > 1) {
        out.push_back(std::string(agent_property_name(p, slot)) +
                      " must be an atomic agent");
      }
    } else if (agent) {
      out.push_back("unexpected agent in slot " + std::to_string(slot));
    }
  }

  if (has_quantity_property(p)) {
    if (!form.quantity) {
      out.push_back("quantity required");
    } else if (form.quantity->is_placeholder() && placeholders == PlaceholderPolicy::Forbidden) {
      out.push_back("unexpected placeholder");
    }
  } else if (form.quantity) {
    out.push_back("unexpected quantity");
  }

  if (!form.entity) {
    out.push_back(std::string(entity_property_name(p)) + " required");
  } else {
    check_members(form.entity->members, "entity", entity_property_name(p), out);
    if (p != Predicate::PartWhole && form.entity->members.size() > 1) {
      out.push_back("entity conjunction only allowed in partwhole");
    }
    if (form.entity->attribute && form.entity->attribute->empty()) {
      out.push_back("attribute is empty");
    }
    if (form.entity->unit && form.entity->unit->empty()) out.push_back("unit is empty");
  }

  if ((p == Predicate::Comparison || p == Predicate::Transfer) && form.agents[0] &&
      form.agents[1] && form.agents[0] == form.agents[1]) {
    out.push_back("the two agents of a " + std::string(to_string(p)) + " must differ");
  }
  if (p == Predicate::CompEq && form.agents[0] && form.agents[1] && form.agents[2] &&
      form.agents[3] &&
      (form.agents[0] == form.agents[1] || form.agents[2] == form.agents[3])) {
    out.push_back("comp-eq compares an agent with itself");
  }
  return report;
}

LogicalForm substitute_answer(const LogicalForm& question, std::int64_t value) {
  if (!question.has_placeholder()) {
    throw Error(ErrorCode::InvalidArgument, "question has no placeholder quantity");
  }
  LogicalForm answer = question;
  answer.quantity = Quantity::of(value);
  return answer;
}

ValidityReport validate_world_model(const WorldModel& model) {
  ValidityReport report;
  if (model.body.empty()) report.violations.push_back("body is empty");
  for (std::size_t i = 0; i < model.body.size(); ++i) {
    for (const auto& v : validate_form(model.body[i]).violations) {
      report.violations.push_back("body[" + std::to_string(i) + "]: " + v);
    }
  }
  const Predicate qp = model.question.predicate;
  if (qp != Predicate::Container && qp != Predicate::Comparison &&
      qp != Predicate::PartWhole) {
    report.violations.push_back("question predicate must be container, comparison or partwhole");
  }
  for (const auto& v : validate_form(model.question, PlaceholderPolicy::Allowed).violations) {
    report.violations.push_back("question: " + v);
  }
  if (!model.question.has_placeholder()) {
    report.violations.push_back("question: placeholder quantity required");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Canonical encoding

namespace {

constexpr std::string_view kReserved = "\\(),=&?";

void append_escaped(std::string& out, std::string_view name) {
  for (char c : name) {
    if (kReserved.find(c) != std::string_view::npos) out.push_back('\\');
    out.push_back(c);
  }
}

void append_members(std::string& out, const std::vector<std::string>& members) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out.push_back('&');
    append_escaped(out, members[i]);
  }
}

void append_prop(std::string& out, bool& first, std::string_view key) {
  if (!first) out += ", ";
  first = false;
  out += key;
  out.push_back('=');
}

class FormParser {
 public:
  explicit FormParser(std::string_view text) : text_(text) {}

  LogicalForm parse() {
    const auto open = text_.find('(');
    if (open == std::string_view::npos) fail("expected '('");
    LogicalForm form;
    form.predicate = parse_predicate(text_.substr(0, open));
    pos_ = open + 1;
    std::set<std::string> seen;
    std::optional<std::string> attribute;
    std::optional<std::string> unit;
    std::optional<std::vector<std::string>> entity_members;

    if (peek() == ')') {
      ++pos_;
    } else {
      while (true) {
        const std::string key = read_key();
        if (!seen.insert(key).second) fail("duplicate property '" + key + "'");
        auto [members, placeholder] = read_value();
        assign(form, key, std::move(members), placeholder, attribute, unit, entity_members);
        const char c = next();
        if (c == ')') break;
        if (c != ',') fail("expected ',' or ')'");
        if (peek() == ' ') ++pos_;
      }
    }
    if (pos_ != text_.size()) fail("trailing characters");
    if (entity_members) {
      Entity e;
      e.members = std::move(*entity_members);
      e.attribute = std::move(attribute);
      e.unit = std::move(unit);
      form.entity = std::move(e);
    } else if (attribute || unit) {
      fail("attribute/unit given without an entity");
    }
    return form;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::Parse, "cannot parse logical form '" + std::string(text_) +
                                      "': " + why + " at offset " + std::to_string(pos_));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char next() {
    if (pos_ >= text_.size()) fail("unexpected end of input");
    return text_[pos_++];
  }

  std::string read_key() {
    std::string key;
    while (peek() != '=' && peek() != '\0') key.push_back(next());
    if (next() != '=') fail("expected '='");
    return key;
  }

  // Returns the `&`-separated members of a value and whether it was the bare
  // placeholder `?`.
  std::pair<std::vector<std::string>, bool> read_value() {
    std::vector<std::string> members(1);
    bool placeholder = false;
    bool any_escaped = false;
    while (true) {
      const char c = peek();
      if (c == '\0' || c == ',' || c == ')') break;
      ++pos_;
      if (c == '\\') {
        members.back().push_back(next());
        any_escaped = true;
      } else if (c == '&') {
        members.emplace_back();
      } else if (c == '?' ) {
        placeholder = true;
      } else if (kReserved.find(c) != std::string_view::npos) {
        fail(std::string("unescaped '") + c + "'");
      } else {
        members.back().push_back(c);
      }
    }
    if (placeholder && (members.size() != 1 || !members[0].empty() || any_escaped)) {
      fail("'?' must stand alone");
    }
    return {std::move(members), placeholder};
  }

  void assign(LogicalForm& form, const std::string& key, std::vector<std::string> members,
              bool placeholder, std::optional<std::string>& attribute,
              std::optional<std::string>& unit,
              std::optional<std::vector<std::string>>& entity_members) {
    const Predicate p = form.predicate;
    auto single = [&]() -> std::string {
      if (members.size() != 1 || placeholder) fail("'" + key + "' takes a single name");
      return std::move(members.front());
    };
    for (std::size_t slot = 0; slot < agent_arity(p); ++slot) {
      if (key == agent_property_name(p, slot)) {
        if (placeholder) fail("agents cannot be placeholders");
        form.agents[slot] = Agent(std::move(members));
        return;
      }
    }
    if (key == "quantity" && has_quantity_property(p)) {
      if (placeholder) {
        form.quantity = Quantity::placeholder();
        return;
      }
      const std::string digits = single();
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(digits, &used);
      } catch (const std::exception&) {
        fail("bad quantity '" + digits + "'");
      }
      if (used != digits.size()) fail("bad quantity '" + digits + "'");
      form.quantity = Quantity::of(v);
      return;
    }
    if (key == entity_property_name(p)) {
      if (placeholder) fail("entities cannot be placeholders");
      entity_members = std::move(members);
      return;
    }
    if (key == "attribute") {
      attribute = single();
      return;
    }
    if (key == "unit") {
      unit = single();
      return;
    }
    fail("unknown property '" + key + "' for " + std::string(to_string(p)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode(const LogicalForm& form) {
  std::string out(to_string(form.predicate));
  out.push_back('(');
  bool first = true;
  const Predicate p = form.predicate;
  for (std::size_t slot = 0; slot < agent_arity(p); ++slot) {
    if (!form.agents[slot]) continue;
    append_prop(out, first, agent_property_name(p, slot));
    append_members(out, form.agents[slot]->members);
  }
  if (form.quantity && has_quantity_property(p)) {
    append_prop(out, first, "quantity");
    if (form.quantity->is_placeholder()) {
      out.push_back('?');
    } else {
      out += std::to_string(*form.quantity->value);
    }
  }
  if (form.entity) {
    append_prop(out, first, entity_property_name(p));
    append_members(out, form.entity->members);
    if (form.entity->attribute) {
      append_prop(out, first, "attribute");
      append_escaped(out, *form.entity->attribute);
    }
    if (form.entity->unit) {
      append_prop(out, first, "unit");
      append_escaped(out, *form.entity->unit);
    }
  }
  out.push_back(')');
  return out;
}

LogicalForm parse_form(std::string_view text) { return FormParser(text).parse(); }

std::ostream& operator<<(std::ostream& os, const LogicalForm& form) { return os << encode(form); }

}  // namespace mathgap
