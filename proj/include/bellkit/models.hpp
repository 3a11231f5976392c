#pragma once

// Augmentation models: generators that give every setting of the panel a
// definite +1/-1 value on every pair, whether or not it was "performed".

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bellkit/qm.hpp"
#include "bellkit/rng.hpp"

namespace bellkit {

/// Settings at both stations. Positions carry roles: e_settings[0] is the
/// actual E setting, e_settings[1] its counterfactual alternative E';
/// p_settings[0] is P and p_settings[1] (when present) is P'.
struct SettingsPanel {
  std::vector<MeasurementSetting> e_settings;
  std::vector<MeasurementSetting> p_settings;

  /// E:0, E':90, P:+45 and, with `with_p_prime`, P':-45 (degrees).
  static SettingsPanel canonical(bool with_p_prime = true);

  /// Throws std::invalid_argument on empty station lists or duplicate labels.
  void validate() const;

  /// E labels first, then P labels; this is the column order of a run.
  std::vector<std::string> labels() const;
  std::size_t size() const noexcept { return e_settings.size() + p_settings.size(); }

  const MeasurementSetting& setting(std::size_t column) const;
  Station station(std::size_t column) const noexcept {
    return column < e_settings.size() ? Station::E : Station::P;
  }
  /// Column of `label`; throws std::invalid_argument if absent.
  std::size_t column(std::string_view label) const;
  bool contains(std::string_view label) const noexcept;

  /// Replaces the angle of the setting called `label` (degrees).
  SettingsPanel with_angle(std::string_view label, double degrees) const;

  std::size_t e_column(std::size_t role) const;
  std::size_t p_column(std::size_t role) const;
};

/// One pair of a run, materialized.
struct CounterfactualRecord {
  std::uint64_t pair_index = 0;
  std::vector<std::string> labels;
  std::vector<Spin> values;
  std::vector<bool> measured;

  Spin value(std::string_view label) const;
  bool is_measured(std::string_view label) const;
};

/// A run of pairs stored by column. Every label has a value on every pair;
/// `measured` marks which columns were performed rather than inferred.
class CounterfactualRun {
public:
  CounterfactualRun(SettingsPanel panel, std::size_t n, std::uint64_t first_index = 0);

  const SettingsPanel& panel() const noexcept { return panel_; }
  std::size_t size() const noexcept { return n_; }
  std::uint64_t first_index() const noexcept { return first_index_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::span<const Spin> column(std::size_t c) const { return columns_.at(c); }
  std::span<const Spin> column(std::string_view label) const {
    return column(panel_.column(label));
  }
  std::span<Spin> mutable_column(std::size_t c) { return columns_.at(c); }

  bool measured(std::size_t c) const { return measured_.at(c); }
  void set_measured(std::size_t c, bool m) { measured_.at(c) = m; }

  CounterfactualRecord record(std::size_t i) const;

  bool operator==(const CounterfactualRun&) const;

private:
  SettingsPanel panel_;
  std::vector<std::string> labels_;
  std::size_t n_;
  std::uint64_t first_index_;
  std::vector<std::vector<Spin>> columns_;
  std::vector<bool> measured_;
};

/// Number of pairs on which two columns agree.
std::uint64_t agreement_count(const CounterfactualRun& run, std::size_t a, std::size_t b);
/// Number of +1 entries in a column.
std::uint64_t plus_count(const CounterfactualRun& run, std::size_t c);

/// Empirical agreement of two labelled columns. The kind is `empirical` when
/// both columns were measured, `inferred` otherwise.
CoincidenceEstimate coincidence(const CounterfactualRun& run, std::string_view a,
                                std::string_view b);

/// Which E-side outcome was actually registered.
enum class RealistVariant { measured_e, unmeasured_e };

/// How the counterfactual E' column is tied to the others. No joint law
/// reproduces all three of the P=E, P=E', E=E' values at once, so each mode
/// honours a different subset:
///  - conditional_independence: E and E' each follow the Malus law against P
///    independently; P=E and P=E' are right, E=E' comes out p^2+(1-p)^2.
///  - lemma_exact: E' is a fair coin independent of P and E; P=E and E=E'=1/2
///    are right, P=E' comes out 1/2.
enum class RealistMode { conditional_independence, lemma_exact };

std::string_view to_string(RealistVariant v) noexcept;
std::string_view to_string(RealistMode m) noexcept;
RealistVariant realist_variant_from_string(std::string_view s);
RealistMode realist_mode_from_string(std::string_view s);

/// Classical-realist augmentation of QM, sampled P first.
///
/// Per pair: P is a fair coin; E is drawn from the state reduced by P. Further
/// E-side settings follow the Malus law against P (or are fair coins in
/// lemma_exact mode). The model says nothing about P-side alternatives, so
/// those are independent fair coins drawn with P. Each column consumes one
/// draw per pair, so the variant and the settings never shift the random
/// stream. Throws std::invalid_argument if the panel lacks E'.
CounterfactualRun generate_qm_realist_run(const SettingsPanel& panel, std::size_t n,
                                          RealistVariant variant, RealistMode mode,
                                          Rng& rng, std::uint64_t first_index = 0);

/// Hidden variable of a local model: an angle on the measurement circle plus
/// a 64-bit tag for families that need a table of independent responses.
struct HiddenVariable {
  double phi = 0.0;
  std::uint64_t tag = 0;
};

/// A deterministic local response rule. `respond` only sees its own
/// station's setting.
struct HiddenVariableStrategy {
  std::string name;
  std::string description;
  std::function<HiddenVariable(Rng&)> draw;
  std::function<Spin(Station, const MeasurementSetting&, const HiddenVariable&)> respond;
};

/// Named local families. Ships with "sign" (outcome = sign of the projection
/// of lambda on the setting, P negated) and "anticorrelated-table" (an
/// independent fair response per direction, P the negation of E at equal
/// directions).
class LhvRegistry {
public:
  static LhvRegistry& instance();

  void add(HiddenVariableStrategy strategy);
  /// Throws std::invalid_argument for an unknown name.
  const HiddenVariableStrategy& get(std::string_view name) const;
  std::vector<std::string> names() const;

private:
  LhvRegistry();
  std::map<std::string, HiddenVariableStrategy, std::less<>> families_;
};

/// One lambda per pair, every column read off the local responses. All
/// columns count as measured.
CounterfactualRun generate_lhv_run(const SettingsPanel& panel, std::size_t n,
                                   const HiddenVariableStrategy& strategy, Rng& rng,
                                   std::uint64_t first_index = 0);
CounterfactualRun generate_lhv_run(const SettingsPanel& panel, std::size_t n,
                                   std::string_view family, Rng& rng,
                                   std::uint64_t first_index = 0);

/// EACP without locality in its strongest form: P fair; every E-side column
/// follows the Malus law against P; P' and any further P-side setting is an
/// independent fair coin, so E'=P' agrees with probability 1/2. E=P' is 1/2
/// as well (it cannot be both that and the QM value in one joint law).
/// Throws if the panel lacks E' or P'.
CounterfactualRun generate_nonlocal_eacp_run(const SettingsPanel& panel, std::size_t n,
                                             Rng& rng, std::uint64_t first_index = 0);

/// Negates the column called `label`, the +1/-1 form of the 0/1 flip
/// E''_i = 1 - E'_i. Throws std::invalid_argument for an unknown label.
CounterfactualRun parity_flip(CounterfactualRun run, std::string_view label);

/// CSV: pair_index, one +1/-1 column per label, then measured_<label> as 0/1.
void write_csv(const CounterfactualRun& run, std::ostream& out, bool header = true);

}  // namespace bellkit
