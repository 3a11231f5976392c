#include "bellkit/relativity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bellkit {

void SpacetimeEvent::validate() const {
  if (!std::isfinite(x) || !std::isfinite(t))
    throw std::invalid_argument("spacetime event coordinates must be finite");
}

LorentzObserver::LorentzObserver(double beta) : beta_(beta) {
  if (!(std::abs(beta) < 1.0)) throw std::invalid_argument("observer speed must satisfy |beta| < 1");
}

double LorentzObserver::gamma() const noexcept { return 1.0 / std::sqrt(1.0 - beta_ * beta_); }

double LorentzObserver::boosted_time(const SpacetimeEvent& ev) const noexcept {
  return gamma() * (ev.t - beta_ * ev.x);
}

bool spacelike_separated(const SpacetimeEvent& a, const SpacetimeEvent& b) {
  a.validate();
  b.validate();
  const double dx = a.x - b.x;
  const double dt = a.t - b.t;
  return dx * dx > dt * dt;
}

std::string_view to_string(Ordering o) noexcept {
  switch (o) {
    case Ordering::e_first: return "E-P";
    case Ordering::p_first: return "P-E";
    case Ordering::simultaneous: return "simultaneous";
  }
  return "?";
}

OrderingResult observer_ordering(const LorentzObserver& obs, const SpacetimeEvent& e_event,
                                 const SpacetimeEvent& p_event) {
  OrderingResult r;
  r.frame_invariant = !spacelike_separated(e_event, p_event);
  const double te = obs.boosted_time(e_event);
  const double tp = obs.boosted_time(p_event);
  if (te < tp)
    r.order = Ordering::e_first;
  else if (tp < te)
    r.order = Ordering::p_first;
  else
    r.order = Ordering::simultaneous;
  return r;
}

namespace {

Station other(Station s) { return s == Station::E ? Station::P : Station::E; }

}  // namespace

PropertyVerdict check_eacp(const RunGenerator& generator, const SettingsPanel& panel,
                           std::size_t n, std::uint64_t seed, const LorentzObserver& obs,
                           const SpacetimeEvent& e_event, const SpacetimeEvent& p_event,
                           std::string_view later_label, double alternative_degrees) {
  const auto order = observer_ordering(obs, e_event, p_event).order;
  const Station later = panel.station(panel.column(later_label));
  if ((order == Ordering::e_first && later != Station::P) ||
      (order == Ordering::p_first && later != Station::E))
    throw std::invalid_argument("check_eacp: '" + std::string(later_label) +
                                "' is at the station this observer sees first");
  const Station earlier = other(later);

  const auto base = generator(panel, n, seed);
  if (!(generator(panel, n, seed) == base))
    throw std::invalid_argument("check_eacp: generator is not deterministic under a fixed seed");
  const auto changed = generator(panel.with_angle(later_label, alternative_degrees), n, seed);

  for (std::size_t c = 0; c < panel.size(); ++c) {
    if (panel.station(c) != earlier) continue;
    auto a = base.column(c);
    auto b = changed.column(c);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) {
        std::ostringstream os;
        os << "column " << panel.setting(c).label() << " changed at pair " << i << " after "
           << later_label << " moved to " << alternative_degrees << " deg (" << to_string(order)
           << " observer)";
        return {false, os.str()};
      }
  }
  std::ostringstream os;
  os << to_string(earlier) << "-side columns unchanged when " << later_label << " moved to "
     << alternative_degrees << " deg (" << to_string(order) << " observer)";
  return {true, os.str()};
}

PropertyVerdict check_no_signaling(const RunGenerator& generator, Station station,
                                   const std::vector<SettingsPanel>& variants, std::size_t n,
                                   std::uint64_t seed, double sigma_k) {
  if (variants.size() < 2) return {true, "fewer than two variants, nothing to compare"};
  if (n == 0) throw std::invalid_argument("check_no_signaling: n must be positive");

  struct Marginal {
    std::string label;
    double freq;
    double se;
  };
  std::vector<std::vector<Marginal>> marginals;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const auto run = generator(variants[v], n, derive_seed(seed, v));
    std::vector<Marginal> row;
    for (std::size_t c = 0; c < variants[v].size(); ++c) {
      if (variants[v].station(c) != station) continue;
      const double f = static_cast<double>(plus_count(run, c)) / static_cast<double>(n);
      row.push_back({variants[v].setting(c).label(), f, std::sqrt(f * (1 - f) / n)});
    }
    marginals.push_back(std::move(row));
  }

  for (std::size_t v = 1; v < marginals.size(); ++v) {
    if (marginals[v].size() != marginals[0].size())
      throw std::invalid_argument("check_no_signaling: variants differ at the tested station");
    for (std::size_t c = 0; c < marginals[0].size(); ++c) {
      const auto& a = marginals[0][c];
      const auto& b = marginals[v][c];
      if (a.label != b.label)
        throw std::invalid_argument("check_no_signaling: variants differ at the tested station");
      const double diff = std::abs(a.freq - b.freq);
      const double tol = sigma_k * std::sqrt(a.se * a.se + b.se * b.se);
      if (diff > tol) {
        std::ostringstream os;
        os << "marginal P(" << a.label << "=+1) moved from " << a.freq << " to " << b.freq
           << " (|diff| " << diff << " > " << tol << ") between variants 0 and " << v;
        return {false, os.str()};
      }
    }
  }
  return {true, std::string(to_string(station)) + "-side marginals agree across " +
                    std::to_string(variants.size()) + " remote-setting variants"};
}

RunGenerator qm_realist_generator(RealistVariant variant, RealistMode mode) {
  return [variant, mode](const SettingsPanel& panel, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return generate_qm_realist_run(panel, n, variant, mode, rng);
  };
}

RunGenerator lhv_generator(std::string family) {
  LhvRegistry::instance().get(family);
  return [family = std::move(family)](const SettingsPanel& panel, std::size_t n,
                                      std::uint64_t seed) {
    Rng rng(seed);
    return generate_lhv_run(panel, n, family, rng);
  };
}

RunGenerator nonlocal_eacp_generator() {
  return [](const SettingsPanel& panel, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return generate_nonlocal_eacp_run(panel, n, rng);
  };
}

RunGenerator eacp_violating_double() {
  return [](const SettingsPanel& panel, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    CounterfactualRun run(panel, n);
    const double e_angle = panel.e_settings.front().angle();
    for (std::size_t i = 0; i < n; ++i) {
      const double phi = 2.0 * std::numbers::pi * rng.uniform();
      for (std::size_t c = 0; c < panel.size(); ++c) {
        // P outcomes are keyed to the E setting instead of their own.
        const double axis = panel.station(c) == Station::E ? panel.setting(c).angle() : e_angle;
        const Spin s = spin_of_sign(std::cos(phi - axis));
        run.mutable_column(c)[i] = panel.station(c) == Station::E ? s : -s;
      }
    }
    for (std::size_t c = 0; c < panel.size(); ++c) run.set_measured(c, true);
    return run;
  };
}

RunGenerator signaling_double() {
  return [](const SettingsPanel& panel, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    CounterfactualRun run(panel, n);
    const Spin copied = spin_of_sign(std::sin(panel.p_settings.front().angle()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < panel.size(); ++c)
        run.mutable_column(c)[i] =
            panel.station(c) == Station::E ? copied : (rng.bernoulli(0.5) ? Spin::plus : Spin::minus);
    for (std::size_t c = 0; c < panel.size(); ++c) run.set_measured(c, true);
    return run;
  };
}

}  // namespace bellkit
