#include "qst/tomography.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "qst/rng.hpp"

namespace qst {

namespace {

const OperatorBasis& cached_gellmann(int d) {
  static std::mutex mu;
  static std::map<int, OperatorBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, OperatorBasis::gellmann(d)).first;
  return it->second;
}

void check_labels(const std::vector<int>& dims, const SettingLabels& labels) {
  if (labels.size() != dims.size())
    throw InvalidLabel("one label per measured site required");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int max_label = dims[i] * dims[i] - 1;
    if (labels[i] < 0 || labels[i] > max_label)
      throw InvalidLabel("label " + std::to_string(labels[i]) + " out of range for a " +
                         std::to_string(dims[i]) + "-level site");
  }
}

std::uint64_t setting_seed(std::uint64_t master, const std::vector<int>& sites,
                           const SettingLabels& labels) {
  std::uint64_t h = derive_seed(master, {0x5E771ull});
  for (int s : sites) h = hash_mix(h, static_cast<std::uint64_t>(s) + 1);
  h = hash_mix(h, 0xFFFFull);
  for (int l : labels) h = hash_mix(h, static_cast<std::uint64_t>(l) + 1);
  return h;
}

}  // namespace

std::string setting_label(const std::vector<int>& dims, const SettingLabels& labels) {
  check_labels(dims, labels);
  const bool all_qubit = std::all_of(dims.begin(), dims.end(), [](int d) { return d == 2; });
  if (all_qubit) {
    static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
    std::string out;
    for (int l : labels) out.push_back(kChars[l]);
    return out;
  }
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out.push_back('.');
    out += labels[i] == 0 ? std::string("i") : "g" + std::to_string(labels[i]);
  }
  return out;
}

Matrix setting_operator(const std::vector<int>& dims, const SettingLabels& labels) {
  check_labels(dims, labels);
  Matrix op = Matrix::Identity(1, 1);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int d = dims[i];
    const Matrix factor = labels[i] == 0 ? Matrix(Matrix::Identity(d, d))
                                         : cached_gellmann(d).op(labels[i] - 1);
    op = tensor_product(op, factor);
  }
  return op;
}

namespace {

// Born sampling against an already-reduced marginal.
std::pair<double, double> sample_from_marginal(const DensityMatrix& rho, const Matrix& block,
                                               long shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidShots("shot count must be >= 1");
  const auto d = static_cast<Eigen::Index>(rho.dim());
  if (block.rows() != d || block.cols() != d)
    throw ShapeError("observable block does not match the site tuple dimension");
  if ((block - block.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidDensityMatrix("observable block must be Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix> es(block);
  const auto& outcomes = es.eigenvalues();
  // Born weights of the eigenbasis outcomes, as a cumulative table.
  std::vector<double> cum(static_cast<std::size_t>(d));
  double total = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double p = std::max(
        0.0,
        (es.eigenvectors().col(k).adjoint() * rho.matrix() * es.eigenvectors().col(k))(0)
            .real());
    total += p;
    cum[static_cast<std::size_t>(k)] = total;
  }
  for (double& c : cum) c /= total;

  SplitMix64 rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (long shot = 0; shot < shots; ++shot) {
    const double u = rng.next_double();
    std::size_t k = 0;
    while (k + 1 < cum.size() && u >= cum[k]) ++k;
    const double w = outcomes(static_cast<Eigen::Index>(k));
    sum += w;
    sumsq += w * w;
  }
  const double mean = sum / static_cast<double>(shots);
  double std_error = 0.0;
  if (shots > 1) {
    const double var =
        std::max(0.0, (sumsq - static_cast<double>(shots) * mean * mean) /
                          static_cast<double>(shots - 1));
    std_error = std::sqrt(var / static_cast<double>(shots));
  }
  return {mean, std_error};
}

}  // namespace

std::pair<double, double> sample_observable(const PureState& state,
                                            const std::vector<int>& sites,
                                            const Matrix& block, long shots,
                                            std::uint64_t seed) {
  return sample_from_marginal(partial_trace(state, sites), block, shots, seed);
}

std::pair<double, double> sample_observable(const DensityMatrix& source,
                                            const std::vector<int>& sites,
                                            const Matrix& block, long shots,
                                            std::uint64_t seed) {
  return sample_from_marginal(partial_trace(source, sites), block, shots, seed);
}

std::pair<double, double> sample_expectation(const PureState& state,
                                             const std::vector<int>& sites,
                                             const SettingLabels& labels, long shots,
                                             std::uint64_t seed) {
  std::vector<int> dims;
  dims.reserve(sites.size());
  for (int s : sites) dims.push_back(state.shape().dim(s));
  return sample_observable(state, sites, setting_operator(dims, labels), shots, seed);
}

std::pair<double, double> sample_expectation(const PureState& state,
                                             const MeasurementSetting& setting) {
  return sample_expectation(state, setting.sites, setting.basis_labels, setting.shots,
                            setting.seed);
}

Matrix psd_project(const Matrix& hermitian) {
  if (hermitian.rows() != hermitian.cols())
    throw ShapeError("PSD projection requires a square matrix");
  const Matrix sym = (hermitian + hermitian.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  RealVector ev = es.eigenvalues().cwiseMax(0.0);
  const double tr = ev.sum();
  if (tr <= 0.0) throw InvalidDensityMatrix("projection collapsed to the zero matrix");
  ev /= tr;
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

TomographyEstimate reconstruct_from_marginal(const DensityMatrix& exact_rdm,
                                             const std::vector<int>& sites,
                                             const std::vector<int>& dims,
                                             const ShotBudget& budget, int site_cap) {
  if (static_cast<int>(sites.size()) > site_cap)
    throw TooManySites("site tuple exceeds the reconstruction cap of " +
                       std::to_string(site_cap));

  std::size_t setting_count = 1;
  for (int d : dims) setting_count *= static_cast<std::size_t>(d) * d;

  const auto big_d = static_cast<Eigen::Index>(exact_rdm.dim());
  Matrix raw = Matrix::Identity(big_d, big_d) / static_cast<double>(big_d);
  std::vector<MomentEstimate> moments;
  moments.reserve(setting_count - 1);
  long shots_used = 0;

  SettingLabels labels(dims.size(), 0);
  for (std::size_t code = 1; code < setting_count; ++code) {
    std::size_t rem = code;
    for (std::size_t i = dims.size(); i-- > 0;) {
      const auto span = static_cast<std::size_t>(dims[i]) * dims[i];
      labels[i] = static_cast<int>(rem % span);
      rem /= span;
    }
    const Matrix op = setting_operator(dims, labels);
    double est = 0.0, err = 0.0;
    if (budget.is_exact()) {
      est = (exact_rdm.matrix() * op).trace().real();
    } else {
      std::tie(est, err) = sample_from_marginal(exact_rdm, op, budget.shots(),
                                                setting_seed(budget.seed(), sites, labels));
      shots_used += budget.shots();
    }
    // Tr(op^2) factors as d per identity site and 2 per basis-element site.
    double op_norm = 1.0;
    for (std::size_t i = 0; i < dims.size(); ++i)
      op_norm *= labels[i] == 0 ? static_cast<double>(dims[i]) : 2.0;
    raw += (est / op_norm) * op;
    moments.push_back({labels, setting_label(dims, labels), est, err});
  }

  DensityMatrix rho_hat(exact_rdm.shape(), psd_project(raw));
  return TomographyEstimate{std::move(rho_hat), std::move(raw), std::move(moments),
                            shots_used};
}

}  // namespace

TomographyEstimate reconstruct_rdm(const PureState& state, const std::vector<int>& sites,
                                   const ShotBudget& budget, int site_cap) {
  std::vector<int> dims;
  for (int s : sites) dims.push_back(state.shape().dim(s));
  return reconstruct_from_marginal(partial_trace(state, sites), sites, dims, budget,
                                   site_cap);
}

TomographyEstimate reconstruct_rdm(const DensityMatrix& source,
                                   const std::vector<int>& sites, const ShotBudget& budget,
                                   int site_cap) {
  std::vector<int> dims;
  for (int s : sites) dims.push_back(source.shape().dim(s));
  return reconstruct_from_marginal(partial_trace(source, sites), sites, dims, budget,
                                   site_cap);
}

ScanResult error_scaling_scan(const PureState& state, const std::vector<int>& sites,
                              const Matrix& block, const std::vector<long>& shot_list,
                              int repetitions, std::uint64_t seed) {
  if (shot_list.empty()) throw InvalidShots("shot list must be non-empty");
  if (!std::is_sorted(shot_list.begin(), shot_list.end()))
    throw InvalidShots("shot list must be ascending");
  if (repetitions < 2) throw InvalidShots("need at least two repetitions");

  ScanResult result;
  for (std::size_t mi = 0; mi < shot_list.size(); ++mi) {
    const long shots = shot_list[mi];
    double sum = 0.0, sumsq = 0.0;
    for (int rep = 0; rep < repetitions; ++rep) {
      const std::uint64_t rep_seed = derive_seed(
          seed, {0x5CA2ull, static_cast<std::uint64_t>(mi), static_cast<std::uint64_t>(rep)});
      const auto [est, err] = sample_observable(state, sites, block, shots, rep_seed);
      (void)err;
      sum += est;
      sumsq += est * est;
    }
    const double mean = sum / repetitions;
    const double var = std::max(0.0, (sumsq - repetitions * mean * mean) / (repetitions - 1));
    result.points.push_back({shots, std::sqrt(var)});
  }

  // Least-squares slope on log-log axes over points with nonzero spread.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const ScanPoint& p : result.points) {
    if (p.empirical_std <= 0.0) continue;
    const double x = std::log(static_cast<double>(p.shots));
    const double y = std::log(p.empirical_std);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2) {
    const double denom = sxx - sx * sx / n;
    if (denom > 1e-12) result.slope = (sxy - sx * sy / n) / denom;
  }
  return result;
}

}  // namespace qst
