#pragma once

// Event geometry of the two stations (one spatial axis, c = 1) and the
// mechanized EACP / no-signaling property checks.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bellkit/models.hpp"

namespace bellkit {

struct SpacetimeEvent {
  double x = 0.0;
  double t = 0.0;
  Station station = Station::E;
  std::uint64_t pair_index = 0;

  /// Throws std::invalid_argument for non-finite coordinates.
  void validate() const;
};

class LorentzObserver {
public:
  /// Throws std::invalid_argument unless |beta| < 1.
  explicit LorentzObserver(double beta);

  double beta() const noexcept { return beta_; }
  double gamma() const noexcept;
  /// t' = gamma * (t - beta * x). Light-travel delays to the observer are
  /// already subtracted in this coordinate, so ordering uses it directly.
  double boosted_time(const SpacetimeEvent& ev) const noexcept;

private:
  double beta_;
};

/// Delta x^2 > Delta t^2.
bool spacelike_separated(const SpacetimeEvent& a, const SpacetimeEvent& b);

enum class Ordering { e_first, p_first, simultaneous };
std::string_view to_string(Ordering o) noexcept;  // "E-P", "P-E", "simultaneous"

struct OrderingResult {
  Ordering order = Ordering::simultaneous;
  /// Set when the events are not spacelike separated: every observer then
  /// sees the same order.
  bool frame_invariant = false;
};

OrderingResult observer_ordering(const LorentzObserver& obs, const SpacetimeEvent& e_event,
                                 const SpacetimeEvent& p_event);

/// Deterministic run generator: same (panel, n, seed) must give the same run.
using RunGenerator =
    std::function<CounterfactualRun(const SettingsPanel&, std::size_t n, std::uint64_t seed)>;

struct PropertyVerdict {
  bool passed = false;
  std::string detail;
};

/// Effect-after-cause check. The run is regenerated with the same seed after
/// re-pointing `later_label` to `alternative_degrees`; passes iff every
/// column at the other station is bit-identical. `later_label` must sit at
/// the station `obs` sees second; for simultaneous events either station is
/// accepted. Throws std::invalid_argument when the generator is not
/// reproducible under a fixed seed or `later_label` is at the earlier station.
PropertyVerdict check_eacp(const RunGenerator& generator, const SettingsPanel& panel,
                           std::size_t n, std::uint64_t seed, const LorentzObserver& obs,
                           const SpacetimeEvent& e_event, const SpacetimeEvent& p_event,
                           std::string_view later_label, double alternative_degrees);

/// No-signaling check: runs `generator` for every panel in `variants` (which
/// differ only at the remote station) with independent derived seeds and
/// compares the +1 frequency of each `station` column across variants;
/// passes iff every difference is within sigma_k combined binomial errors.
PropertyVerdict check_no_signaling(const RunGenerator& generator, Station station,
                                   const std::vector<SettingsPanel>& variants, std::size_t n,
                                   std::uint64_t seed, double sigma_k = 3.0);

/// Generators in the shape the property checks take.
RunGenerator qm_realist_generator(RealistVariant variant, RealistMode mode);
RunGenerator lhv_generator(std::string family);
RunGenerator nonlocal_eacp_generator();

/// Negative controls. The first rewrites the P column from the E setting
/// (a later choice overwriting an earlier outcome); the second copies the
/// sign of the P setting into every E outcome.
RunGenerator eacp_violating_double();
RunGenerator signaling_double();

}  // namespace bellkit
