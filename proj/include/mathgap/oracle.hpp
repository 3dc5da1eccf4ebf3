#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "mathgap/logic.hpp"

namespace mathgap {

enum class SolveStatus { Answer, Underdetermined, Inconsistent };

std::string_view to_string(SolveStatus s) noexcept;

struct SolveResult {
  SolveStatus status = SolveStatus::Underdetermined;
  std::optional<std::int64_t> answer;
  std::size_t variables = 0;
  std::size_t equations = 0;
};

/// Solves a world model as a linear system over per-agent counts, ignoring
/// any proof tree. A transfer starts a new version of both agents' counts;
/// every other sentence refers to the versions current at its position and
/// the question to the final ones.
///
/// Throws Error(Schema) for malformed models and Error(OracleMismatch) when
/// the pinned answer is not an integer.
SolveResult solve(const WorldModel& model);

}  // namespace mathgap
