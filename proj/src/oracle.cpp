#include "mathgap/oracle.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mathgap/error.hpp"

namespace mathgap {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Sparse row: column -> coefficient, plus right-hand side.
struct Row {
  std::map<std::size_t, Rational> terms;
  Rational rhs;

  void add(std::size_t column, const Rational& c) {
    auto [it, inserted] = terms.try_emplace(column, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    } else if (c == 0) {
      terms.erase(it);
    }
  }
};

class SystemBuilder {
 public:
  std::size_t current(const std::string& agent) {
    auto [it, inserted] = version_.try_emplace(agent, 0);
    return column(agent, it->second);
  }

  std::size_t advance(const std::string& agent) {
    auto [it, inserted] = version_.try_emplace(agent, 0);
    ++it->second;
    return column(agent, it->second);
  }

  std::size_t fresh() { return next_++; }
  std::size_t columns() const { return next_; }

  std::vector<Row> rows;

 private:
  std::size_t column(const std::string& agent, std::size_t version) {
    auto [it, inserted] = columns_.try_emplace({agent, version}, next_);
    if (inserted) ++next_;
    return it->second;
  }

  std::map<std::string, std::size_t> version_;
  std::map<std::pair<std::string, std::size_t>, std::size_t> columns_;
  std::size_t next_ = 0;
};

const std::string& atomic(const LogicalForm& f, std::size_t slot) { return f.agent(slot).name(); }

void add_sentence(SystemBuilder& sys, const LogicalForm& f) {
  Row row;
  switch (f.predicate) {
    case Predicate::Container:
      row.add(sys.current(atomic(f, 0)), 1);
      row.rhs = f.value();
      break;
    case Predicate::Comparison:
      row.add(sys.current(atomic(f, 0)), 1);
      row.add(sys.current(atomic(f, 1)), -1);
      row.rhs = f.value();
      break;
    case Predicate::PartWhole:
      for (const auto& m : f.agent(0).members) row.add(sys.current(m), 1);
      row.rhs = f.value();
      break;
    case Predicate::CompEq:
      row.add(sys.current(atomic(f, 0)), 1);
      row.add(sys.current(atomic(f, 1)), -1);
      row.add(sys.current(atomic(f, 2)), -1);
      row.add(sys.current(atomic(f, 3)), 1);
      break;
    case Predicate::Transfer: {
      const std::string& receiver = atomic(f, 0);
      const std::string& sender = atomic(f, 1);
      for (const auto& [agent, sign] : {std::pair{receiver, 1}, std::pair{sender, -1}}) {
        Row step;
        const std::size_t before = sys.current(agent);
        const std::size_t after = sys.advance(agent);
        step.add(after, 1);
        step.add(before, -1);
        step.rhs = Rational(f.value()) * sign;
        sys.rows.push_back(std::move(step));
      }
      return;
    }
  }
  sys.rows.push_back(std::move(row));
}

// Reduced row echelon form in place. Returns pivot row per column.
std::map<std::size_t, std::size_t> reduce(std::vector<Row>& rows) {
  std::map<std::size_t, std::size_t> pivots;
  std::vector<bool> used(rows.size(), false);
  for (;;) {
    // Next pivot: the sparsest unused row, on its lowest column.
    std::size_t best = rows.size();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (used[r] || rows[r].terms.empty()) continue;
      if (best == rows.size() || rows[r].terms.size() < rows[best].terms.size()) best = r;
    }
    if (best == rows.size()) break;
    used[best] = true;
    Row& pivot = rows[best];
    const std::size_t col = pivot.terms.begin()->first;
    const Rational scale = pivot.terms.begin()->second;
    for (auto& [c, v] : pivot.terms) v /= scale;
    pivot.rhs /= scale;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == best) continue;
      auto it = rows[r].terms.find(col);
      if (it == rows[r].terms.end()) continue;
      const Rational factor = it->second;
      for (const auto& [c, v] : pivot.terms) rows[r].add(c, -factor * v);
      rows[r].rhs -= factor * pivot.rhs;
    }
    pivots[col] = best;
  }
  return pivots;
}

}  // namespace

std::string_view to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::Answer: return "answer";
    case SolveStatus::Underdetermined: return "underdetermined";
    case SolveStatus::Inconsistent: return "inconsistent";
  }
  return "?";
}

SolveResult solve(const WorldModel& model) {
  if (model.body.empty()) throw Error(ErrorCode::Schema, "world model body is empty");
  if (auto report = validate_world_model(model); !report.ok()) {
    throw Error(ErrorCode::Schema, "invalid world model: " + report.violations.front());
  }

  SystemBuilder sys;
  for (const auto& sentence : model.body) add_sentence(sys, sentence);

  const LogicalForm& q = model.question;
  const std::size_t target = sys.fresh();
  Row link;
  link.add(target, 1);
  switch (q.predicate) {
    case Predicate::Container:
      link.add(sys.current(atomic(q, 0)), -1);
      break;
    case Predicate::Comparison:
      link.add(sys.current(atomic(q, 0)), -1);
      link.add(sys.current(atomic(q, 1)), 1);
      break;
    case Predicate::PartWhole:
      for (const auto& m : q.agent(0).members) link.add(sys.current(m), -1);
      break;
    default:
      throw Error(ErrorCode::Schema,
                  "cannot ask about a " + std::string(to_string(q.predicate)) + " form");
  }
  sys.rows.push_back(std::move(link));

  SolveResult result;
  result.variables = sys.columns();
  result.equations = sys.rows.size();

  const auto pivots = reduce(sys.rows);
  for (const auto& row : sys.rows) {
    if (row.terms.empty() && row.rhs != 0) {
      result.status = SolveStatus::Inconsistent;
      return result;
    }
  }
  auto it = pivots.find(target);
  if (it == pivots.end() || sys.rows[it->second].terms.size() != 1) {
    result.status = SolveStatus::Underdetermined;
    return result;
  }
  const Rational& value = sys.rows[it->second].rhs;
  if (boost::multiprecision::denominator(value) != 1) {
    throw Error(ErrorCode::OracleMismatch, "non-integer solution " + value.str());
  }
  const auto num = boost::multiprecision::numerator(value);
  if (num > std::numeric_limits<std::int64_t>::max() ||
      num < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::Overflow, "solution does not fit in 64 bits");
  }
  result.status = SolveStatus::Answer;
  result.answer = num.convert_to<std::int64_t>();
  return result;
}

}  // namespace mathgap
