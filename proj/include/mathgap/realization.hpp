#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mathgap/inference.hpp"
#include "mathgap/rng.hpp"
#include "mathgap/vocab.hpp"

namespace mathgap {

/// Which quantity signs a template line covers. `Question` marks interrogatives.
enum class TemplateSign { Any, More, Fewer, Same, Question };

std::string_view to_string(TemplateSign s) noexcept;
TemplateSign parse_template_sign(std::string_view text);

/// Sentence templates keyed by (predicate, sign).
///
/// Slots: [a] [b] [c] [d] agents, [q] quantity, [e] entity, [k] attribute,
/// [u] unit. A trailing `s` on [e] or [u] asks for number agreement with the
/// quantity. For transfer, [a] is the sender and [b] the receiver. For
/// partwhole, [a] is the list of combined agents.
class TemplateSet {
 public:
  struct Entry {
    Predicate predicate;
    TemplateSign sign;
    std::string text;
  };

  static TemplateSet defaults();
  /// Line format `predicate|sign|template`; blank lines and `#` comments skipped.
  static TemplateSet parse(std::string_view text);
  static TemplateSet load(const std::filesystem::path& path);

  /// Throws Error(Schema) when the slots do not fit the predicate.
  void add(Predicate predicate, TemplateSign sign, std::string text);

  /// Throws Error(Schema) unless every (predicate, sign) combination has a
  /// template that needs neither attribute nor unit.
  void validate() const;

  /// Templates usable for `form`. Attribute- and unit-specific templates are
  /// included only when the form's entity carries them.
  std::vector<const std::string*> candidates(const LogicalForm& form, bool question) const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::string to_text() const;

 private:
  std::vector<Entry> entries_;
};

/// Noun inflection and category names.
struct Lexicon {
  std::map<std::string, std::string> hypernyms;
  std::map<std::string, std::string> irregular_plurals;

  static Lexicon defaults();
  static Lexicon from(const Vocab& vocab);

  std::string plural(std::string_view noun) const;
  /// Noun naming a conjunction of entities: the entity itself when there is one,
  /// the shared category when all have one, otherwise "item".
  std::string category(const std::vector<std::string>& entities) const;
};

/// "A", "A and B", "A, B, and C".
std::string join_names(const std::vector<std::string>& names);

/// Fills `templ` for `form`. The result is capitalized.
std::string render_form(const LogicalForm& form, std::string_view templ, const Lexicon& lexicon);

// ---------------------------------------------------------------------------
// Leaf order

class OrderingPolicy {
 public:
  enum class Kind { Canonical, MoveToFront, Permutation };

  static OrderingPolicy canonical() { return OrderingPolicy(Kind::Canonical, 0, {}); }
  /// The leaf at canonical position `distance` is stated first.
  static OrderingPolicy move_to_front(std::size_t distance) {
    return OrderingPolicy(Kind::MoveToFront, distance, {});
  }
  /// `order[i]` is the canonical position of the i-th stated leaf.
  static OrderingPolicy permutation(std::vector<std::size_t> order) {
    return OrderingPolicy(Kind::Permutation, 0, std::move(order));
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t distance() const noexcept { return distance_; }
  const std::vector<std::size_t>& order() const noexcept { return order_; }

  /// "canonical", "move-to-front:K" or "permutation:i,j,...".
  std::string describe() const;
  static OrderingPolicy parse(std::string_view text);

 private:
  OrderingPolicy(Kind kind, std::size_t distance, std::vector<std::size_t> order)
      : kind_(kind), distance_(distance), order_(std::move(order)) {}

  Kind kind_;
  std::size_t distance_;
  std::vector<std::size_t> order_;
};

/// Canonical leaf positions in stated order. Throws Error(InvalidArgument)
/// when the policy does not fit the tree, including any reordering of a tree
/// that uses a non-commutative rule.
std::vector<std::size_t> order_positions(const ProofTree& tree, const OrderingPolicy& policy);

/// Leaf node indices in stated order.
std::vector<std::size_t> order_leaves(const ProofTree& tree, const OrderingPolicy& policy);

// ---------------------------------------------------------------------------
// Problem text

struct RenderedProblem {
  /// One sentence per leaf, canonical order.
  std::vector<std::string> leaf_sentences;
  /// Canonical positions in stated order.
  std::vector<std::size_t> order;
  std::string question;

  std::vector<std::string> body_sentences() const;
  std::string body() const;
  std::string text() const;
};

/// The root label with its quantity replaced by the placeholder.
LogicalForm question_form(const ProofTree& tree);

/// Draws one template per leaf (canonical order) and one for the question.
RenderedProblem render_problem(const ProofTree& tree, const OrderingPolicy& policy,
                               const TemplateSet& templates, const Lexicon& lexicon, Rng& rng);

/// Re-states an already rendered problem under another order.
RenderedProblem reorder(const ProofTree& tree, RenderedProblem rendered,
                        const OrderingPolicy& policy);

/// Solution trace, one sentence per node in post order. Leaves repeat their
/// body sentences. A tree that is a single axiom gets an extra closing
/// sentence stating the answer.
std::vector<std::string> cot_sentences(const ProofTree& tree, const RenderedProblem& rendered,
                                       const Lexicon& lexicon);
std::string render_cot(const ProofTree& tree, const RenderedProblem& rendered,
                       const Lexicon& lexicon);

}  // namespace mathgap
