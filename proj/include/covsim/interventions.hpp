#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covsim/error.hpp"
#include "covsim/types.hpp"

namespace covsim {

enum class MeasureKind : std::uint8_t { media_alerts = 0, school_closures = 1, shelter_in_place = 2 };

inline constexpr std::size_t kMeasureKindCount = 3;
inline constexpr std::array<MeasureKind, kMeasureKindCount> kMeasureKinds{
    MeasureKind::media_alerts, MeasureKind::school_closures, MeasureKind::shelter_in_place};

inline constexpr std::string_view to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::media_alerts: return "media_alerts";
    case MeasureKind::school_closures: return "school_closures";
    case MeasureKind::shelter_in_place: return "shelter_in_place";
  }
  return "?";
}

inline std::optional<MeasureKind> parse_measure_kind(std::string_view s) {
  for (auto k : kMeasureKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// One intervention: from `start_day` the prevalence is scaled down linearly
/// over `ramp_days` until it reaches 1 - reduction, and stays there.
struct DecisionAction {
  MeasureKind kind = MeasureKind::media_alerts;
  Day start_day = 0;
  Day ramp_days = 7;
  double reduction = 0.1;

  bool operator==(const DecisionAction&) const = default;

  std::vector<Diagnostic> validate(const std::string& prefix) const {
    DiagnosticSink sink;
    if (start_day < 0) sink.add(prefix + "start_day", "must be >= 0");
    if (ramp_days < 0) sink.add(prefix + "ramp_days", "must be >= 0");
    if (!std::isfinite(reduction) || reduction < 0.0 || reduction >= 1.0)
      sink.add(prefix + "reduction", "must be in [0, 1)");
    return sink.items();
  }
};

/// Reduction and ramp used when an action is added without explicit values.
struct MeasureDefaults {
  struct Entry {
    double reduction;
    Day ramp_days;
    bool operator==(const Entry&) const = default;
  };
  // Configurable placeholders.
  std::array<Entry, kMeasureKindCount> entries{{{0.10, 7}, {0.25, 7}, {0.50, 7}}};

  bool operator==(const MeasureDefaults&) const = default;

  const Entry& operator[](MeasureKind k) const { return entries[static_cast<std::size_t>(k)]; }
  Entry& operator[](MeasureKind k) { return entries[static_cast<std::size_t>(k)]; }

  DecisionAction make(MeasureKind kind, Day start_day) const {
    return {kind, start_day, (*this)[kind].ramp_days, (*this)[kind].reduction};
  }
};

inline double measure_multiplier(const DecisionAction& action, Day day) {
  if (day < action.start_day) return 1.0;
  const Day elapsed = day - action.start_day;
  if (action.ramp_days <= 0 || elapsed >= action.ramp_days) return 1.0 - action.reduction;
  return 1.0 - action.reduction * (static_cast<double>(elapsed) / static_cast<double>(action.ramp_days));
}

/// Product of the per-measure multipliers. Factors are multiplied in fixed
/// kind order so the result is bitwise independent of the input order.
inline double combined_multiplier(std::span<const DecisionAction> actions, Day day) {
  std::array<double, kMeasureKindCount> factor;
  factor.fill(1.0);
  for (const auto& a : actions) factor[static_cast<std::size_t>(a.kind)] *= measure_multiplier(a, day);
  double product = 1.0;
  for (double f : factor) product *= f;
  return product;
}

/// Checks the "at most one action per kind" rule.
inline std::vector<Diagnostic> validate_timeline(std::span<const DecisionAction> actions,
                                                 const std::string& prefix = "actions") {
  DiagnosticSink sink;
  std::array<int, kMeasureKindCount> seen{};
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string item = prefix + "[" + std::to_string(i) + "].";
    sink.merge(actions[i].validate(item));
    if (++seen[static_cast<std::size_t>(actions[i].kind)] == 2)
      sink.add(item + "kind", "more than one " + std::string(to_string(actions[i].kind)) + " action");
  }
  return sink.items();
}

/// Adds `action` to a timeline, replacing any earlier action of the same kind.
inline std::vector<DecisionAction> with_action(std::vector<DecisionAction> timeline, const DecisionAction& action) {
  std::erase_if(timeline, [&](const DecisionAction& a) { return a.kind == action.kind; });
  timeline.push_back(action);
  return timeline;
}

}  // namespace covsim
