#pragma once

// Exact spin-1/2 predictions for singlet pairs and the sequential
// (reduce-then-measure) sampling law.

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "bellkit/rng.hpp"

namespace bellkit {

inline constexpr double kAnalyticTolerance = 1e-12;

enum class Spin : std::int8_t { minus = -1, plus = 1 };

constexpr int value(Spin s) noexcept { return static_cast<int>(s); }
constexpr Spin operator-(Spin s) noexcept {
  return s == Spin::plus ? Spin::minus : Spin::plus;
}
constexpr Spin spin_of_sign(double x) noexcept {
  return x >= 0.0 ? Spin::plus : Spin::minus;
}

enum class Station { E, P };

std::string_view to_string(Station s) noexcept;

constexpr double degrees_to_radians(double deg) noexcept {
  return deg * std::numbers::pi / 180.0;
}
constexpr double radians_to_degrees(double rad) noexcept {
  return rad * 180.0 / std::numbers::pi;
}

/// An analyzer direction in the plane orthogonal to the flight axis.
/// The angle is stored in radians and only ever used modulo 2*pi.
class MeasurementSetting {
public:
  /// Throws std::invalid_argument for a non-finite angle.
  MeasurementSetting(std::string label, double angle_rad);

  static MeasurementSetting from_degrees(std::string label, double degrees) {
    return MeasurementSetting(std::move(label), degrees_to_radians(degrees));
  }

  const std::string& label() const noexcept { return label_; }
  double angle() const noexcept { return angle_; }
  double degrees() const noexcept { return radians_to_degrees(angle_); }

  /// Same direction, angles compared modulo 2*pi.
  bool same_direction(const MeasurementSetting& other) const noexcept;

private:
  std::string label_;
  double angle_;
};

/// Outcomes of one pair. Spins are +1/-1; a 0/1 bit flip is negation here.
struct OutcomePair {
  Spin e;
  Spin p;
  bool operator==(const OutcomePair&) const = default;
};

enum class EstimateKind { analytic, empirical, inferred };

std::string_view to_string(EstimateKind k) noexcept;
std::optional<EstimateKind> estimate_kind_from_string(std::string_view s);

/// A probability that two binary sequences agree.
struct CoincidenceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  EstimateKind kind = EstimateKind::analytic;
  std::optional<std::uint64_t> n_samples;

  /// Throws std::invalid_argument unless 0 <= v <= 1.
  static CoincidenceEstimate analytic(double v);
  /// Frequency agreements/n with binomial standard error sqrt(v(1-v)/n).
  static CoincidenceEstimate from_counts(std::uint64_t agreements, std::uint64_t n,
                                         EstimateKind kind = EstimateKind::empirical);
};

/// P(e, p) for e, p in {+1, -1}; index with joint_index().
using JointTable = std::array<double, 4>;

constexpr std::size_t joint_index(Spin e, Spin p) noexcept {
  return (e == Spin::plus ? 0 : 2) + (p == Spin::plus ? 0 : 1);
}

/// Agreement probability cos^2(theta/2) of an analyzer at angle theta from
/// the preparation axis. Throws std::invalid_argument for non-finite theta.
CoincidenceEstimate malus_same_prep_coincidence(double theta);

/// Singlet agreement probability (1 - cos theta)/2, theta = angle(a) - angle(b).
CoincidenceEstimate singlet_coincidence(const MeasurementSetting& a,
                                        const MeasurementSetting& b);

/// The raw number behind singlet_coincidence for a relative angle.
double singlet_agreement(double relative_angle) noexcept;

/// Joint law (1 - e*p*cos theta)/4 with e measured along `a`, p along `b`.
/// This is the standard completion of the singlet correlation <e p> = -cos theta
/// with uniform marginals.
JointTable singlet_joint_distribution(const MeasurementSetting& a,
                                      const MeasurementSetting& b);

/// One pair by wave-packet reduction: p is a fair coin, then e = -p with
/// probability cos^2(theta/2). Consumes exactly two draws from `rng`.
OutcomePair sample_pair_sequential(const MeasurementSetting& a,
                                   const MeasurementSetting& b, Rng& rng);

}  // namespace bellkit
