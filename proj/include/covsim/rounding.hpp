#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "covsim/types.hpp"

namespace covsim {

enum class RoundingMode { half_even, stochastic };

inline std::string_view to_string(RoundingMode m) {
  return m == RoundingMode::half_even ? "half_even" : "stochastic";
}

inline std::optional<RoundingMode> parse_rounding_mode(std::string_view s) {
  if (s == "half_even") return RoundingMode::half_even;
  if (s == "stochastic") return RoundingMode::stochastic;
  return std::nullopt;
}

/// Round-half-to-even of a non-negative real count.
inline Persons round_half_even(double x) {
  double fl = std::floor(x);
  double frac = x - fl;
  auto base = static_cast<Persons>(fl);
  if (frac > 0.5) return base + 1;
  if (frac < 0.5) return base;
  return (base % 2 == 0) ? base : base + 1;
}

/// Turns real-valued expected counts into whole persons.
///
/// half_even is stateless. stochastic rounds up with probability equal to the
/// fractional part, drawing from a mt19937_64 stream; the engine calls it in a
/// fixed (day, county, group) order, so a given seed reproduces bit for bit.
/// Uniforms are built from the top 53 bits so results do not depend on the
/// standard library's distribution implementation.
class Rounder {
 public:
  explicit Rounder(RoundingMode mode = RoundingMode::half_even, std::uint64_t seed = 0)
      : mode_(mode), engine_(seed) {}

  RoundingMode mode() const noexcept { return mode_; }

  Persons operator()(double x) {
    if (!(x > 0.0)) return 0;
    if (mode_ == RoundingMode::half_even) return round_half_even(x);
    double fl = std::floor(x);
    double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return static_cast<Persons>(fl) + (u < x - fl ? 1 : 0);
  }

 private:
  RoundingMode mode_;
  std::mt19937_64 engine_;
};

}  // namespace covsim
