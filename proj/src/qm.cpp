#include "bellkit/qm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellkit {

std::string_view to_string(Station s) noexcept {
  return s == Station::E ? "E" : "P";
}

MeasurementSetting::MeasurementSetting(std::string label, double angle_rad)
    : label_(std::move(label)), angle_(angle_rad) {
  if (!std::isfinite(angle_rad))
    throw std::invalid_argument("setting '" + label_ + "': angle must be finite");
}

bool MeasurementSetting::same_direction(const MeasurementSetting& other) const noexcept {
  double d = std::remainder(angle_ - other.angle_, 2.0 * std::numbers::pi);
  return std::abs(d) <= kAnalyticTolerance;
}

std::string_view to_string(EstimateKind k) noexcept {
  switch (k) {
    case EstimateKind::analytic: return "analytic";
    case EstimateKind::empirical: return "empirical";
    case EstimateKind::inferred: return "inferred-via-A";
  }
  return "?";
}

std::optional<EstimateKind> estimate_kind_from_string(std::string_view s) {
  if (s == "analytic") return EstimateKind::analytic;
  if (s == "empirical") return EstimateKind::empirical;
  if (s == "inferred-via-A") return EstimateKind::inferred;
  return std::nullopt;
}

CoincidenceEstimate CoincidenceEstimate::analytic(double v) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("probability out of [0, 1]: " + std::to_string(v));
  return {v, 0.0, EstimateKind::analytic, std::nullopt};
}

CoincidenceEstimate CoincidenceEstimate::from_counts(std::uint64_t agreements,
                                                     std::uint64_t n, EstimateKind kind) {
  if (n == 0) throw std::invalid_argument("empirical estimate needs n >= 1");
  if (agreements > n) throw std::invalid_argument("more agreements than samples");
  double v = static_cast<double>(agreements) / static_cast<double>(n);
  return {v, std::sqrt(v * (1.0 - v) / static_cast<double>(n)), kind, n};
}

CoincidenceEstimate malus_same_prep_coincidence(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  double c = std::cos(theta / 2.0);
  return CoincidenceEstimate::analytic(std::clamp(c * c, 0.0, 1.0));
}

double singlet_agreement(double relative_angle) noexcept {
  return std::clamp((1.0 - std::cos(relative_angle)) / 2.0, 0.0, 1.0);
}

CoincidenceEstimate singlet_coincidence(const MeasurementSetting& a,
                                        const MeasurementSetting& b) {
  return CoincidenceEstimate::analytic(singlet_agreement(a.angle() - b.angle()));
}

JointTable singlet_joint_distribution(const MeasurementSetting& a,
                                      const MeasurementSetting& b) {
  const double c = std::cos(a.angle() - b.angle());
  JointTable t{};
  for (Spin e : {Spin::plus, Spin::minus})
    for (Spin p : {Spin::plus, Spin::minus})
      t[joint_index(e, p)] = (1.0 - value(e) * value(p) * c) / 4.0;
  return t;
}

OutcomePair sample_pair_sequential(const MeasurementSetting& a,
                                   const MeasurementSetting& b, Rng& rng) {
  const Spin p = rng.bernoulli(0.5) ? Spin::plus : Spin::minus;
  // After reduction the E particle is prepared as -p along b.
  const double anti = 1.0 - singlet_agreement(a.angle() - b.angle());
  const Spin e = rng.bernoulli(anti) ? -p : p;
  return {e, p};
}

}  // namespace bellkit
