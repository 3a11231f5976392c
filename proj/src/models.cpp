#include "bellkit/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

namespace bellkit {

namespace {

Spin coin(Rng& rng) { return rng.bernoulli(0.5) ? Spin::plus : Spin::minus; }

// Outcome that agrees with `anchor` with probability `agree`.
Spin follow(Spin anchor, double agree, Rng& rng) {
  return rng.bernoulli(agree) ? anchor : -anchor;
}

double agreement(const MeasurementSetting& a, const MeasurementSetting& b) {
  return singlet_agreement(a.angle() - b.angle());
}

void check_label(const std::string& label) {
  if (label.empty()) throw std::invalid_argument("setting labels must be non-empty");
  for (char c : label)
    if (c == ',' || c == '/' || c == '"' || std::isspace(static_cast<unsigned char>(c)))
      throw std::invalid_argument("setting label '" + label +
                                  "' may not contain ',', '/', '\"' or whitespace");
}

std::int64_t direction_key(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a < 0) a += two_pi;
  const auto full = std::llround(two_pi * 1e9);
  auto key = std::llround(a * 1e9);
  return key >= full ? 0 : key;
}

HiddenVariableStrategy sign_family() {
  return {
      "sign",
      "lambda uniform on the circle; outcome = sign(cos(lambda - setting)), P negated",
      [](Rng& rng) { return HiddenVariable{2.0 * std::numbers::pi * rng.uniform(), 0}; },
      [](Station st, const MeasurementSetting& s, const HiddenVariable& hv) {
        const Spin e = spin_of_sign(std::cos(hv.phi - s.angle()));
        return st == Station::E ? e : -e;
      }};
}

HiddenVariableStrategy table_family() {
  return {
      "anticorrelated-table",
      "independent fair response per direction drawn from a 64-bit tag; P negated",
      [](Rng& rng) { return HiddenVariable{0.0, rng.next()}; },
      [](Station st, const MeasurementSetting& s, const HiddenVariable& hv) {
        const auto key = static_cast<std::uint64_t>(direction_key(s.angle()));
        const Spin e = (splitmix64(hv.tag ^ splitmix64(key)) & 1U) ? Spin::plus : Spin::minus;
        return st == Station::E ? e : -e;
      }};
}

}  // namespace

// --- SettingsPanel ---------------------------------------------------------

SettingsPanel SettingsPanel::canonical(bool with_p_prime) {
  SettingsPanel panel;
  panel.e_settings = {MeasurementSetting::from_degrees("E", 0.0),
                      MeasurementSetting::from_degrees("E'", 90.0)};
  panel.p_settings = {MeasurementSetting::from_degrees("P", 45.0)};
  if (with_p_prime) panel.p_settings.push_back(MeasurementSetting::from_degrees("P'", -45.0));
  return panel;
}

void SettingsPanel::validate() const {
  if (e_settings.empty() || p_settings.empty())
    throw std::invalid_argument("panel needs at least one setting per station");
  std::set<std::string, std::less<>> seen;
  for (const auto& label : labels()) {
    check_label(label);
    if (!seen.insert(label).second)
      throw std::invalid_argument("duplicate setting label '" + label + "'");
  }
}

std::vector<std::string> SettingsPanel::labels() const {
  std::vector<std::string> out;
  out.reserve(size());
  for (const auto& s : e_settings) out.push_back(s.label());
  for (const auto& s : p_settings) out.push_back(s.label());
  return out;
}

const MeasurementSetting& SettingsPanel::setting(std::size_t column) const {
  if (column < e_settings.size()) return e_settings[column];
  return p_settings.at(column - e_settings.size());
}

std::size_t SettingsPanel::column(std::string_view label) const {
  for (std::size_t c = 0; c < size(); ++c)
    if (setting(c).label() == label) return c;
  throw std::invalid_argument("unknown setting label '" + std::string(label) + "'");
}

bool SettingsPanel::contains(std::string_view label) const noexcept {
  for (std::size_t c = 0; c < size(); ++c)
    if (setting(c).label() == label) return true;
  return false;
}

SettingsPanel SettingsPanel::with_angle(std::string_view label, double degrees) const {
  SettingsPanel out = *this;
  const auto c = column(label);
  auto& slot = c < e_settings.size() ? out.e_settings[c] : out.p_settings[c - e_settings.size()];
  slot = MeasurementSetting::from_degrees(slot.label(), degrees);
  return out;
}

std::size_t SettingsPanel::e_column(std::size_t role) const {
  if (role >= e_settings.size())
    throw std::invalid_argument(role == 1 ? "panel has no E' setting (second E entry)"
                                          : "panel lacks a required E-side setting");
  return role;
}

std::size_t SettingsPanel::p_column(std::size_t role) const {
  if (role >= p_settings.size())
    throw std::invalid_argument(role == 1 ? "panel has no P' setting (second P entry)"
                                          : "panel lacks a required P-side setting");
  return e_settings.size() + role;
}

// --- records and runs ------------------------------------------------------

Spin CounterfactualRecord::value(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::invalid_argument("unknown label '" + std::string(label) + "'");
  return values[static_cast<std::size_t>(it - labels.begin())];
}

bool CounterfactualRecord::is_measured(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::invalid_argument("unknown label '" + std::string(label) + "'");
  return measured[static_cast<std::size_t>(it - labels.begin())];
}

CounterfactualRun::CounterfactualRun(SettingsPanel panel, std::size_t n, std::uint64_t first_index)
    : panel_(std::move(panel)), n_(n), first_index_(first_index) {
  panel_.validate();
  labels_ = panel_.labels();
  columns_.assign(labels_.size(), std::vector<Spin>(n, Spin::plus));
  measured_.assign(labels_.size(), false);
}

CounterfactualRecord CounterfactualRun::record(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("record index past end of run");
  CounterfactualRecord r;
  r.pair_index = first_index_ + i;
  r.labels = labels_;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    r.values.push_back(columns_[c][i]);
    r.measured.push_back(measured_[c]);
  }
  return r;
}

bool CounterfactualRun::operator==(const CounterfactualRun& o) const {
  return labels_ == o.labels_ && n_ == o.n_ && first_index_ == o.first_index_ &&
         columns_ == o.columns_ && measured_ == o.measured_;
}

std::uint64_t agreement_count(const CounterfactualRun& run, std::size_t a, std::size_t b) {
  auto ca = run.column(a);
  auto cb = run.column(b);
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < ca.size(); ++i) k += (ca[i] == cb[i]);
  return k;
}

std::uint64_t plus_count(const CounterfactualRun& run, std::size_t c) {
  auto col = run.column(c);
  return static_cast<std::uint64_t>(std::count(col.begin(), col.end(), Spin::plus));
}

CoincidenceEstimate coincidence(const CounterfactualRun& run, std::string_view a,
                                std::string_view b) {
  const auto ca = run.panel().column(a);
  const auto cb = run.panel().column(b);
  const auto kind = run.measured(ca) && run.measured(cb) ? EstimateKind::empirical
                                                         : EstimateKind::inferred;
  return CoincidenceEstimate::from_counts(agreement_count(run, ca, cb), run.size(), kind);
}

// --- generators ------------------------------------------------------------

std::string_view to_string(RealistVariant v) noexcept {
  return v == RealistVariant::measured_e ? "measured-E" : "unmeasured-E";
}

std::string_view to_string(RealistMode m) noexcept {
  return m == RealistMode::conditional_independence ? "conditional-independence"
                                                    : "lemma-exact";
}

RealistVariant realist_variant_from_string(std::string_view s) {
  if (s == "measured-E") return RealistVariant::measured_e;
  if (s == "unmeasured-E") return RealistVariant::unmeasured_e;
  throw std::invalid_argument("unknown variant '" + std::string(s) +
                              "' (expected measured-E or unmeasured-E)");
}

RealistMode realist_mode_from_string(std::string_view s) {
  if (s == "conditional-independence") return RealistMode::conditional_independence;
  if (s == "lemma-exact") return RealistMode::lemma_exact;
  throw std::invalid_argument("unknown mode '" + std::string(s) +
                              "' (expected conditional-independence or lemma-exact)");
}

CounterfactualRun generate_qm_realist_run(const SettingsPanel& panel, std::size_t n,
                                          RealistVariant variant, RealistMode mode,
                                          Rng& rng, std::uint64_t first_index) {
  CounterfactualRun run(panel, n, first_index);
  const std::size_t p0 = panel.p_column(0);
  const std::size_t e0 = panel.e_column(0);
  panel.e_column(1);

  const auto& p_set = panel.setting(p0);
  const std::size_t n_e = panel.e_settings.size();
  const std::size_t n_p = panel.p_settings.size();

  std::vector<double> e_agree(n_e);
  for (std::size_t k = 0; k < n_e; ++k) e_agree[k] = agreement(panel.e_settings[k], p_set);

  // P side first, then E side: nothing drawn at P reads an E setting.
  for (std::size_t i = 0; i < n; ++i) {
    const Spin p = coin(rng);
    run.mutable_column(p0)[i] = p;
    for (std::size_t k = 1; k < n_p; ++k) run.mutable_column(n_e + k)[i] = coin(rng);
    run.mutable_column(e0)[i] = follow(p, e_agree[0], rng);
    for (std::size_t k = 1; k < n_e; ++k) {
      Spin v = (mode == RealistMode::lemma_exact) ? coin(rng) : follow(p, e_agree[k], rng);
      run.mutable_column(k)[i] = v;
    }
  }

  run.set_measured(p0, true);
  run.set_measured(e0, variant == RealistVariant::measured_e);
  return run;
}

LhvRegistry::LhvRegistry() {
  add(sign_family());
  add(table_family());
}

LhvRegistry& LhvRegistry::instance() {
  static LhvRegistry registry;
  return registry;
}

void LhvRegistry::add(HiddenVariableStrategy strategy) {
  if (!strategy.draw || !strategy.respond)
    throw std::invalid_argument("strategy '" + strategy.name + "' is incomplete");
  auto name = strategy.name;
  families_.insert_or_assign(std::move(name), std::move(strategy));
}

const HiddenVariableStrategy& LhvRegistry::get(std::string_view name) const {
  auto it = families_.find(name);
  if (it == families_.end())
    throw std::invalid_argument("unknown hidden-variable family '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> LhvRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : families_) out.push_back(name);
  return out;
}

CounterfactualRun generate_lhv_run(const SettingsPanel& panel, std::size_t n,
                                   const HiddenVariableStrategy& strategy, Rng& rng,
                                   std::uint64_t first_index) {
  CounterfactualRun run(panel, n, first_index);
  const std::size_t cols = panel.size();
  for (std::size_t i = 0; i < n; ++i) {
    const HiddenVariable hv = strategy.draw(rng);
    for (std::size_t c = 0; c < cols; ++c)
      run.mutable_column(c)[i] = strategy.respond(panel.station(c), panel.setting(c), hv);
  }
  for (std::size_t c = 0; c < cols; ++c) run.set_measured(c, true);
  return run;
}

CounterfactualRun generate_lhv_run(const SettingsPanel& panel, std::size_t n,
                                   std::string_view family, Rng& rng,
                                   std::uint64_t first_index) {
  return generate_lhv_run(panel, n, LhvRegistry::instance().get(family), rng, first_index);
}

CounterfactualRun generate_nonlocal_eacp_run(const SettingsPanel& panel, std::size_t n,
                                             Rng& rng, std::uint64_t first_index) {
  CounterfactualRun run(panel, n, first_index);
  const std::size_t p0 = panel.p_column(0);
  const std::size_t e0 = panel.e_column(0);
  panel.e_column(1);
  panel.p_column(1);

  const std::size_t n_e = panel.e_settings.size();
  const std::size_t n_p = panel.p_settings.size();
  std::vector<double> e_agree(n_e);
  for (std::size_t k = 0; k < n_e; ++k)
    e_agree[k] = agreement(panel.e_settings[k], panel.setting(p0));

  for (std::size_t i = 0; i < n; ++i) {
    const Spin p = coin(rng);
    run.mutable_column(p0)[i] = p;
    for (std::size_t k = 0; k < n_e; ++k) run.mutable_column(k)[i] = follow(p, e_agree[k], rng);
    for (std::size_t k = 1; k < n_p; ++k) run.mutable_column(n_e + k)[i] = coin(rng);
  }
  run.set_measured(p0, true);
  run.set_measured(e0, true);
  return run;
}

CounterfactualRun parity_flip(CounterfactualRun run, std::string_view label) {
  auto col = run.mutable_column(run.panel().column(label));
  for (auto& v : col) v = -v;
  return run;
}

void write_csv(const CounterfactualRun& run, std::ostream& out, bool header) {
  const auto& labels = run.labels();
  if (header) {
    out << "pair_index";
    for (const auto& l : labels) out << ',' << l;
    for (const auto& l : labels) out << ",measured_" << l;
    out << '\n';
  }
  for (std::size_t i = 0; i < run.size(); ++i) {
    out << run.first_index() + i;
    for (std::size_t c = 0; c < labels.size(); ++c) out << ',' << value(run.column(c)[i]);
    for (std::size_t c = 0; c < labels.size(); ++c) out << ',' << (run.measured(c) ? 1 : 0);
    out << '\n';
  }
}

}  // namespace bellkit
