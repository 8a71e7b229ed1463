#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace compdbn {

// Ordinal competence level. The numeric codes are part of every file format.
enum class Level : int { Low = 0, Medium = 1, High = 2 };

inline constexpr std::size_t kLevelCount = 3;

inline constexpr std::array<Level, kLevelCount> kAllLevels{Level::Low, Level::Medium,
                                                         Level::High};

/// Categorical distribution over {Low, Medium, High}, indexed by level code.
using Distribution = std::array<double, kLevelCount>;

constexpr int to_code(Level level) { return static_cast<int>(level); }

constexpr std::size_t to_index(Level level) { return static_cast<std::size_t>(level); }

inline std::optional<Level> level_from_code(int code) {
  if (code < 0 || code > 2) return std::nullopt;
  return static_cast<Level>(code);
}

constexpr std::string_view level_name(Level level) {
  switch (level) {
    case Level::Low: return "Low";
    case Level::Medium: return "Medium";
    case Level::High: return "High";
  }
  return "?";
}

inline constexpr Distribution kUniform{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

}  // namespace compdbn
