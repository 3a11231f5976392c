#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "bellkit/relativity.hpp"

using namespace bellkit;

namespace {

SpacetimeEvent ev(double x, double t, Station s) { return {x, t, s, 0}; }

const SpacetimeEvent kE = ev(-1, 0, Station::E);
const SpacetimeEvent kP = ev(1, 0, Station::P);

struct Shipped {
  std::string name;
  RunGenerator gen;
  // P-first samplers draw E from the state reduced by P, so they respect
  // EACP only for observers that see P first.
  bool p_first = true;
};

std::vector<Shipped> shipped() {
  std::vector<Shipped> out;
  for (auto mode : {RealistMode::conditional_independence, RealistMode::lemma_exact})
    for (auto var : {RealistVariant::measured_e, RealistVariant::unmeasured_e})
      out.push_back({std::string("qm-realist/") + std::string(to_string(mode)) + "/" +
                         std::string(to_string(var)),
                     qm_realist_generator(var, mode)});
  for (const auto& f : LhvRegistry::instance().names()) out.push_back({"lhv/" + f, lhv_generator(f), false});
  out.push_back({"nonlocal-eacp", nonlocal_eacp_generator()});
  return out;
}

}  // namespace

TEST(Boost, CanonicalEvents) {
  const LorentzObserver obs(0.5);
  EXPECT_NEAR(obs.gamma(), 1.0 / std::sqrt(0.75), 1e-15);
  EXPECT_NEAR(obs.boosted_time(kE), 0.5773502691896258, 1e-15);
  EXPECT_NEAR(obs.boosted_time(kP), -0.5773502691896258, 1e-15);
  EXPECT_EQ(observer_ordering(obs, kE, kP).order, Ordering::p_first);
  EXPECT_EQ(observer_ordering(LorentzObserver(-0.5), kE, kP).order, Ordering::e_first);
  EXPECT_EQ(observer_ordering(LorentzObserver(0.0), kE, kP).order, Ordering::simultaneous);
  EXPECT_FALSE(observer_ordering(obs, kE, kP).frame_invariant);
  EXPECT_TRUE(spacelike_separated(kE, kP));
}

TEST(Boost, InvalidObservers) {
  EXPECT_THROW(LorentzObserver(1.0), std::invalid_argument);
  EXPECT_THROW(LorentzObserver(-1.0), std::invalid_argument);
  EXPECT_THROW(LorentzObserver(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  EXPECT_THROW(ev(std::numeric_limits<double>::infinity(), 0, Station::E).validate(), std::invalid_argument);
}

TEST(Boost, OrderNames) {
  EXPECT_EQ(to_string(Ordering::e_first), "E-P");
  EXPECT_EQ(to_string(Ordering::p_first), "P-E");
  EXPECT_EQ(to_string(Ordering::simultaneous), "simultaneous");
}

TEST(Boost, TimelikeOrderIsInvariant) {
  Rng r(4);
  for (int i = 0; i < 200; ++i) {
    const double dx = r.uniform() * 2 - 1;
    const double dt = std::abs(dx) + 0.01 + r.uniform();
    const auto e = ev(0, 0, Station::E);
    const auto p = ev(dx, (i % 2 ? 1 : -1) * dt, Station::P);
    EXPECT_FALSE(spacelike_separated(e, p));
    const auto base = observer_ordering(LorentzObserver(0.0), e, p);
    EXPECT_TRUE(base.frame_invariant);
    for (double beta = -0.99; beta < 1.0; beta += 0.09) {
      const auto o = observer_ordering(LorentzObserver(beta), e, p);
      EXPECT_EQ(o.order, base.order);
      EXPECT_TRUE(o.frame_invariant);
    }
  }
}

TEST(Boost, SpacelikeOrderFlips) {
  Rng r(5);
  for (int i = 0; i < 100; ++i) {
    const double dx = 0.5 + r.uniform();
    const double dt = (r.uniform() * 2 - 1) * dx * 0.9;
    const auto e = ev(0, 0, Station::E), p = ev(dx, dt, Station::P);
    ASSERT_TRUE(spacelike_separated(e, p));
    const double flip = dt / dx;  // observer with this beta sees them simultaneous
    const auto lo = observer_ordering(LorentzObserver(std::max(-0.999, flip - 0.05)), e, p).order;
    const auto hi = observer_ordering(LorentzObserver(std::min(0.999, flip + 0.05)), e, p).order;
    EXPECT_NE(lo, hi);
  }
}

TEST(Eacp, ShippedGeneratorsPass) {
  const auto panel = SettingsPanel::canonical();
  const LorentzObserver pe(0.5), ep(-0.5);
  for (const auto& g : shipped()) {
    for (const char* label : {"E", "E'"}) {
      const auto v = check_eacp(g.gen, panel, 2000, 7, pe, kE, kP, label, 30.0);
      EXPECT_TRUE(v.passed) << g.name << ": " << v.detail;
    }
    if (g.p_first) continue;
    for (const char* label : {"P", "P'"}) {
      const auto v = check_eacp(g.gen, panel, 2000, 7, ep, kE, kP, label, 10.0);
      EXPECT_TRUE(v.passed) << g.name << ": " << v.detail;
    }
  }
}

TEST(Eacp, PFirstSamplersFailForEpObservers) {
  // An E-P observer sees E fixed before P is chosen; a P-first sampler
  // redraws E when P moves. This is the frame dependence behind the
  // assembled generator.
  const auto panel = SettingsPanel::canonical();
  for (const auto& g : shipped()) {
    if (!g.p_first) continue;
    EXPECT_FALSE(check_eacp(g.gen, panel, 2000, 7, LorentzObserver(-0.5), kE, kP, "P", 10.0).passed) << g.name;
    // Moving only P' leaves E alone: P' is an independent coin.
    EXPECT_TRUE(check_eacp(g.gen, panel, 2000, 7, LorentzObserver(-0.5), kE, kP, "P'", 10.0).passed) << g.name;
  }
}

TEST(Eacp, SimultaneousAcceptsEitherStation) {
  const auto g = lhv_generator("sign");
  const LorentzObserver rest(0.0);
  EXPECT_TRUE(check_eacp(g, SettingsPanel::canonical(), 500, 1, rest, kE, kP, "P", 0).passed);
  EXPECT_TRUE(check_eacp(g, SettingsPanel::canonical(), 500, 1, rest, kE, kP, "E", 0).passed);
}

TEST(Eacp, NegativeControlsFail) {
  const auto panel = SettingsPanel::canonical();
  const auto v = check_eacp(eacp_violating_double(), panel, 2000, 7, LorentzObserver(0.5), kE, kP, "E", 30.0);
  EXPECT_FALSE(v.passed);
  EXPECT_NE(v.detail.find("changed"), std::string::npos);
  const auto s = check_eacp(signaling_double(), panel, 2000, 7, LorentzObserver(-0.5), kE, kP, "P", -45.0);
  EXPECT_FALSE(s.passed);
}

TEST(Eacp, Misuse) {
  const auto panel = SettingsPanel::canonical();
  EXPECT_THROW(check_eacp(lhv_generator("sign"), panel, 10, 1, LorentzObserver(0.5), kE, kP, "P", 0),
               std::invalid_argument);
  RunGenerator flaky = [calls = std::make_shared<int>(0)](const SettingsPanel& p, std::size_t n, std::uint64_t s) {
    Rng rng(s + static_cast<std::uint64_t>((*calls)++));
    return generate_lhv_run(p, n, "sign", rng);
  };
  EXPECT_THROW(check_eacp(flaky, panel, 100, 1, LorentzObserver(0.5), kE, kP, "E", 0), std::invalid_argument);
  EXPECT_THROW(check_eacp(lhv_generator("sign"), panel, 10, 1, LorentzObserver(0.5), kE, kP, "Z", 0),
               std::invalid_argument);
}

TEST(NoSignaling, ShippedGeneratorsPass) {
  const auto base = SettingsPanel::canonical();
  const std::vector<SettingsPanel> p_moves{base, base.with_angle("P", -45), base.with_angle("P", 130),
                                           base.with_angle("P'", 80)};
  const std::vector<SettingsPanel> e_moves{base, base.with_angle("E", 60), base.with_angle("E'", 170)};
  for (const auto& g : shipped()) {
    const auto a = check_no_signaling(g.gen, Station::E, p_moves, 50000, 3);
    EXPECT_TRUE(a.passed) << g.name << ": " << a.detail;
    const auto b = check_no_signaling(g.gen, Station::P, e_moves, 50000, 3);
    EXPECT_TRUE(b.passed) << g.name << ": " << b.detail;
  }
}

TEST(NoSignaling, NegativeControlFails) {
  const auto base = SettingsPanel::canonical();
  const auto v = check_no_signaling(signaling_double(), Station::E, {base, base.with_angle("P", -45)}, 10000, 3);
  EXPECT_FALSE(v.passed);
  EXPECT_NE(v.detail.find("moved"), std::string::npos);
}

TEST(NoSignaling, Misuse) {
  const auto base = SettingsPanel::canonical();
  EXPECT_TRUE(check_no_signaling(lhv_generator("sign"), Station::E, {base}, 10, 1).passed);
  EXPECT_THROW(check_no_signaling(lhv_generator("sign"), Station::E, {base, base}, 0, 1), std::invalid_argument);
  EXPECT_THROW(check_no_signaling(lhv_generator("sign"), Station::E,
                                  {base, base.with_angle("E", 3)}, 0, 1),
               std::invalid_argument);
  auto relabeled = base;
  relabeled.e_settings[1] = MeasurementSetting::from_degrees("F", 90);
  EXPECT_THROW(check_no_signaling(lhv_generator("sign"), Station::E, {base, relabeled}, 100, 1),
               std::invalid_argument);
  EXPECT_THROW(lhv_generator("nope"), std::invalid_argument);
}
