#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string_view>

namespace covsim {

using Day = std::int32_t;
using Persons = std::int64_t;

enum class AgeGroup : std::uint8_t { under_18 = 0, adult = 1, senior = 2 };

inline constexpr std::size_t kAgeGroupCount = 3;
inline constexpr std::array<AgeGroup, kAgeGroupCount> kAgeGroups{
    AgeGroup::under_18, AgeGroup::adult, AgeGroup::senior};

inline constexpr std::size_t index_of(AgeGroup g) { return static_cast<std::size_t>(g); }

inline constexpr std::string_view label(AgeGroup g) {
  switch (g) {
    case AgeGroup::under_18: return "0-17";
    case AgeGroup::adult: return "18-64";
    case AgeGroup::senior: return "65+";
  }
  return "?";
}

inline std::optional<AgeGroup> parse_age_group(std::string_view s) {
  for (auto g : kAgeGroups)
    if (label(g) == s) return g;
  return std::nullopt;
}

/// Persons per age group.
using GroupCounts = std::array<Persons, kAgeGroupCount>;

inline Persons total(const GroupCounts& c) { return std::accumulate(c.begin(), c.end(), Persons{0}); }

}  // namespace covsim
