#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qst/basis.hpp"
#include "qst/state.hpp"
#include "qst/types.hpp"

namespace qst {

/// Sampling budget for estimators: either the infinite-shot bypass (exact
/// moments, no randomness) or a finite shot count with a master seed.
/// Stream seeds are derived per setting so results do not depend on the
/// order settings are evaluated in.
class ShotBudget {
 public:
  static ShotBudget exact() { return ShotBudget(true, 0, 0); }
  static ShotBudget sampled(long shots, std::uint64_t seed) {
    if (shots < 1) throw InvalidShots("shot count must be >= 1");
    return ShotBudget(false, shots, seed);
  }

  bool is_exact() const { return exact_; }
  long shots() const { return shots_; }
  std::uint64_t seed() const { return seed_; }

 private:
  ShotBudget(bool exact, long shots, std::uint64_t seed)
      : exact_(exact), shots_(shots), seed_(seed) {}
  bool exact_;
  long shots_;
  std::uint64_t seed_;
};

/// Per-site measurement labels for a product-basis operator: 0 selects the
/// identity, r in 1..d^2-1 selects basis element r-1 of that site's basis.
using SettingLabels = std::vector<int>;

/// One measurement configuration: which sites, which product-basis
/// operator, how many shots, and the stream seed.
struct MeasurementSetting {
  std::vector<int> sites;
  SettingLabels basis_labels;
  long shots = 1;
  std::uint64_t seed = 0;
};

struct MomentEstimate {
  SettingLabels labels;
  std::string label;  // printable form, e.g. "XZ" or "g3.g0"
  double estimate = 0.0;
  double std_error = 0.0;
};

struct TomographyEstimate {
  /// PSD-projected reconstruction; a valid state for entropy and spectrum
  /// work.
  DensityMatrix rho_hat;
  /// Unprojected linear inversion. Expectation values contracted against it
  /// stay linear in the moments, so they are unbiased and their propagated
  /// standard errors are exact; the projection would bias extremal values.
  Matrix raw_inversion;
  std::vector<MomentEstimate> raw_moments;
  long shots_used = 0;
};

/// Printable label for a setting over the given site dimensions.
std::string setting_label(const std::vector<int>& dims, const SettingLabels& labels);

/// Product-basis operator selected by the labels, over sites of the given
/// dimensions (identity factors included).
Matrix setting_operator(const std::vector<int>& dims, const SettingLabels& labels);

/// Simulated projective measurement of a Hermitian block on a site tuple:
/// draws `shots` eigenvalue outcomes from the Born distribution and returns
/// (sample mean, sample std / sqrt(shots)). Deterministic per seed. Mixed
/// sources sample the same distribution through their marginal.
std::pair<double, double> sample_observable(const PureState& state,
                                            const std::vector<int>& sites,
                                            const Matrix& block, long shots,
                                            std::uint64_t seed);
std::pair<double, double> sample_observable(const DensityMatrix& source,
                                            const std::vector<int>& sites,
                                            const Matrix& block, long shots,
                                            std::uint64_t seed);

/// Same for a labelled product-basis setting.
std::pair<double, double> sample_expectation(const PureState& state,
                                             const std::vector<int>& sites,
                                             const SettingLabels& labels, long shots,
                                             std::uint64_t seed);
std::pair<double, double> sample_expectation(const PureState& state,
                                             const MeasurementSetting& setting);

/// Eigenvalue truncation at zero followed by trace renormalization;
/// idempotent and trace-preserving.
Matrix psd_project(const Matrix& hermitian);

/// Linear-inversion state reconstruction over the D^2-1 product-basis
/// settings of a site tuple, followed by PSD projection. The exact budget
/// bypasses sampling and reproduces the partial trace.
TomographyEstimate reconstruct_rdm(const PureState& state, const std::vector<int>& sites,
                                   const ShotBudget& budget,
                                   int site_cap = kDefaultRdmSiteCap);
TomographyEstimate reconstruct_rdm(const DensityMatrix& source,
                                   const std::vector<int>& sites, const ShotBudget& budget,
                                   int site_cap = kDefaultRdmSiteCap);

struct ScanPoint {
  long shots = 0;
  double empirical_std = 0.0;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  /// Log-log slope of std vs shots; absent when fewer than two usable points.
  std::optional<double> slope;
};

/// Empirical standard deviation of the sampled estimator across repetitions
/// for each shot count, plus a log-log slope fit when defined.
ScanResult error_scaling_scan(const PureState& state, const std::vector<int>& sites,
                              const Matrix& block, const std::vector<long>& shot_list,
                              int repetitions, std::uint64_t seed);

}  // namespace qst
