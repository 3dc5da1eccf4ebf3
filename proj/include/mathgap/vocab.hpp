#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mathgap {

/// Word lists that fill agent, entity, attribute and unit slots.
struct Vocab {
  std::vector<std::string> agents;
  /// Used instead of `agents` when a problem needs more distinct names.
  std::vector<std::string> extended_agents;
  std::vector<std::string> entities;
  std::vector<std::string> attributes;
  std::vector<std::string> units;
  /// entity -> singular category noun ("apple" -> "fruit").
  std::map<std::string, std::string> hypernyms;

  static Vocab defaults();

  /// Throws Error(InvalidArgument) on empty lists or duplicate entries.
  void validate() const;

  /// Entities grouped by hypernym, only groups with at least two members.
  std::map<std::string, std::vector<std::string>> categories() const;

  /// The agent list large enough for `needed` distinct names. Throws
  /// Error(VocabularyExhausted) when neither list suffices.
  const std::vector<std::string>& agents_for(std::size_t needed) const;
};

/// One token per line, UTF-8. Blank lines and lines starting with '#' are skipped.
std::vector<std::string> load_word_list(const std::filesystem::path& path);

/// Lines of the form `entity|category`.
std::map<std::string, std::string> load_hypernyms(const std::filesystem::path& path);

}  // namespace mathgap
