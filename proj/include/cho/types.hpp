#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace cho {

/// Simulation clock. All protocol timing is integral milliseconds so that
/// boundary comparisons (TTT, ping-pong window, timers) are exact.
using SimTime = std::chrono::milliseconds;

using CellId = int;
inline constexpr CellId kNoCell = -1;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Azimuth of `to` seen from `from`, degrees in [-180, 180).
inline double azimuth_deg(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  return std::atan2(d.y, d.x) * 180.0 / M_PI;
}

/// Wraps an angle difference into [-180, 180).
inline double wrap_deg(double a) {
  a = std::fmod(a + 180.0, 360.0);
  if (a < 0) a += 360.0;
  return a - 180.0;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

enum class HoMode { BHO, CHO };

inline std::string_view to_string(HoMode m) { return m == HoMode::BHO ? "BHO" : "CHO"; }

inline std::optional<HoMode> parse_mode(std::string_view s) {
  if (s == "BHO") return HoMode::BHO;
  if (s == "CHO") return HoMode::CHO;
  return std::nullopt;
}

/// Invalid or inconsistent configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A protocol or simulation invariant was broken. Always a bug; exit code 3.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cho
