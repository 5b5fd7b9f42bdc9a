#include "sps/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "sps/bounds.hpp"
#include "sps/errors.hpp"

namespace sps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

// Zero scale is allowed for noiseless diagnostics; bounds reject the zero
// variance proxy where they need it.
void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

}  // namespace

NoiseModel NoiseModel::uniform(double half_width) {
  require_nonnegative(half_width, "noise half-width");
  return {Kind::uniform, half_width, half_width * half_width / 3.0};
}

NoiseModel NoiseModel::gaussian(double stddev) {
  require_nonnegative(stddev, "noise stddev");
  return {Kind::gaussian, stddev, stddev * stddev};
}

NoiseModel NoiseModel::rademacher(double magnitude) {
  require_nonnegative(magnitude, "noise magnitude");
  return {Kind::rademacher, magnitude, magnitude * magnitude};
}

double NoiseModel::sigma() const { return std::sqrt(variance_proxy); }

double NoiseModel::draw(Rng& rng) const {
  switch (kind) {
    case Kind::uniform:
      return rng.symmetric_uniform(scale);
    case Kind::gaussian:
      return rng.gaussian(scale);
    case Kind::rademacher:
      return scale * rng.rademacher();
  }
  throw std::logic_error("unreachable noise kind");
}

RegressorModel RegressorModel::constant(double value) {
  if (value == 0.0) throw std::invalid_argument("constant regressor must be nonzero");
  RegressorModel model;
  model.kind = Kind::constant;
  model.value = value;
  return model;
}

RegressorModel RegressorModel::gaussian_iid(double sigma_phi) {
  require_positive(sigma_phi, "sigma_phi");
  RegressorModel model;
  model.kind = Kind::gaussian_iid;
  model.sigma_phi = sigma_phi;
  return model;
}

RegressorModel RegressorModel::bounded_iid(double phi_min, double phi_max) {
  require_positive(phi_min, "phi_min");
  if (!(phi_max >= phi_min)) {
    throw std::invalid_argument("phi_max must be >= phi_min");
  }
  RegressorModel model;
  model.kind = Kind::bounded_iid;
  model.phi_min = phi_min;
  model.phi_max = phi_max;
  return model;
}

double RegressorModel::draw(Rng& rng) const {
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::gaussian_iid:
      return rng.gaussian(sigma_phi);
    case Kind::bounded_iid:
      return rng.rademacher() * rng.uniform(phi_min, phi_max);
  }
  throw std::logic_error("unreachable regressor kind");
}

GeneratedData generate_dataset(int n, double theta_star,
                               const NoiseModel& noise,
                               const RegressorModel& regressors, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  GeneratedData out;
  out.data.phi.resize(n);
  out.data.y.resize(n);
  out.noise.resize(n);
  for (int t = 0; t < n; ++t) out.data.phi[t] = regressors.draw(rng);
  for (int t = 0; t < n; ++t) out.noise[t] = noise.draw(rng);
  for (int t = 0; t < n; ++t) {
    out.data.y[t] = out.data.phi[t] * theta_star + out.noise[t];
  }
  return out;
}

TrialResult run_trial(const SpsConfig& config, double theta_star,
                      const NoiseModel& noise,
                      const RegressorModel& regressors, Rng& rng) {
  GeneratedData generated =
      generate_dataset(config.n, theta_star, noise, regressors, rng);
  const SpsInstance inst = initialize(config, rng);

  TrialResult result;
  result.lse = least_squares(generated.data);
  result.region = exact_region(generated.data, inst);
  result.covers_true = indicator(theta_star, generated.data, inst);

  if (!result.region.bounded()) {
    result.max_dist_true = kInf;
  } else {
    double max_dist = 0.0;
    for (const Interval& iv : result.region.intervals) {
      max_dist = std::max(max_dist, std::abs(iv.lo - theta_star));
      max_dist = std::max(max_dist, std::abs(iv.hi - theta_star));
    }
    result.max_dist_true = max_dist;
  }

  try {
    result.outer_half_width =
        outer_approximation(generated.data, inst).half_width;
  } catch (const UnboundedRegionError&) {
    result.outer_unbounded = true;
    result.outer_half_width = kInf;
  }
  return result;
}

double empirical_quantile(std::vector<double> samples, double level) {
  if (samples.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("quantile level must lie in (0, 1)");
  }
  std::sort(samples.begin(), samples.end());
  const double scaled = level * static_cast<double>(samples.size());
  auto index = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
  if (index < 1) index = 1;
  if (index > samples.size()) index = samples.size();
  return samples[index - 1];
}

void ExperimentPlan::validate() const {
  SpsConfig probe(m, q, 2, false);  // validates m, q
  (void)probe;
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(noise.variance_proxy > 0.0)) {
    throw std::invalid_argument("experiments need a positive variance proxy");
  }
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (n_grid.empty()) throw std::invalid_argument("n grid must be nonempty");
  for (int n : n_grid) {
    if (n < 2) throw std::invalid_argument("every grid n must be at least 2");
  }
  if (regime == BoundRegime::constant) {
    if (regressors.kind != RegressorModel::Kind::constant ||
        regressors.value != 1.0) {
      throw std::invalid_argument(
          "constant regime expects constant regressors with value 1; use the "
          "bounded regime for other scales");
    }
  }
  if (regime == BoundRegime::bounded &&
      regressors.kind == RegressorModel::Kind::gaussian_iid) {
    throw std::invalid_argument(
        "bounded regime needs regressors bounded away from zero");
  }
  if ((regime == BoundRegime::gaussian || regime == BoundRegime::mgf) &&
      regressors.kind != RegressorModel::Kind::gaussian_iid) {
    throw std::invalid_argument(
        "gaussian/mgf regimes expect gaussian_iid regressors");
  }
}

BoundSpec bound_spec_for(const ExperimentPlan& plan, BoundTarget target) {
  BoundSpec spec;
  spec.target = target;
  const double sigma = plan.noise.sigma();
  switch (plan.regime) {
    case BoundRegime::constant:
      spec.regime = ConstantInNoise{sigma};
      break;
    case BoundRegime::bounded: {
      const double phi_min = plan.regressors.kind == RegressorModel::Kind::constant
                                 ? std::abs(plan.regressors.value)
                                 : plan.regressors.phi_min;
      spec.regime = BoundedRegressor{sigma, phi_min};
      break;
    }
    case BoundRegime::gaussian:
      spec.regime = GaussianRegressor{sigma, plan.regressors.sigma_phi};
      break;
    case BoundRegime::mgf: {
      const double sp2 = plan.regressors.sigma_phi * plan.regressors.sigma_phi;
      spec.regime = UserRegressorMgf{
          sigma, [sp2](double t) { return 1.0 / std::sqrt(1.0 - 2.0 * t * sp2); }};
      break;
    }
  }
  return spec;
}

namespace {

double invert_or_nan(const ExperimentPlan& plan, BoundTarget target, int n,
                     bool* valid) {
  try {
    RadiusQuery query{plan.delta, n, plan.m, plan.q,
                      bound_spec_for(plan, target)};
    const double radius = invert_radius(query);
    if (valid) *valid = true;
    return radius;
  } catch (const SampleSizeError&) {
    if (valid) *valid = false;
    return kNaN;
  } catch (const BoundNotAvailableError&) {
    return kNaN;
  }
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentPlan& plan, int threads) {
  plan.validate();
  if (threads < 1) threads = 1;

  ExperimentSummary summary;
  summary.master_seed = plan.master_seed;
  summary.delta = plan.delta;
  summary.rows.reserve(plan.n_grid.size());

  for (int n : plan.n_grid) {
    const SpsConfig config(plan.m, plan.q, n, plan.fix_signs);
    std::vector<double> max_dist(plan.k);
    std::vector<double> outer_width(plan.k);
    std::vector<char> covers(plan.k);
    std::atomic<int> unbounded{0};

    auto worker = [&](int first, int step) {
      for (int trial = first; trial < plan.k; trial += step) {
        Rng rng(derive_seed(plan.master_seed, static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(trial)));
        const TrialResult tr =
            run_trial(config, plan.theta_star, plan.noise, plan.regressors, rng);
        max_dist[trial] = tr.max_dist_true;
        outer_width[trial] =
            tr.outer_unbounded ? kInf : 2.0 * tr.outer_half_width;
        covers[trial] = tr.covers_true ? 1 : 0;
        if (tr.outer_unbounded) unbounded.fetch_add(1, std::memory_order_relaxed);
      }
    };

    if (threads == 1 || plan.k == 1) {
      worker(0, 1);
    } else {
      const int used = std::min(threads, plan.k);
      std::vector<std::thread> pool;
      pool.reserve(used);
      for (int w = 0; w < used; ++w) pool.emplace_back(worker, w, used);
      for (std::thread& th : pool) th.join();
    }

    SummaryRow row;
    row.n = n;
    row.k = plan.k;
    row.emp_exact = empirical_quantile(max_dist, 1.0 - plan.delta);
    row.emp_outer = empirical_quantile(outer_width, 1.0 - plan.delta);
    long covered = 0;
    for (char c : covers) covered += c;
    row.coverage = static_cast<double>(covered) / plan.k;
    row.unbounded_trials = unbounded.load();
    row.theo_exact =
        invert_or_nan(plan, BoundTarget::exact_region, n, &row.bound_valid);
    row.theo_outer =
        invert_or_nan(plan, BoundTarget::outer_approximation, n, nullptr);
    summary.rows.push_back(row);
  }
  return summary;
}

std::vector<double> lemma_tail_frequencies(int n, const NoiseModel& noise,
                                           const std::vector<double>& eps_grid,
                                           int k, std::uint64_t master_seed) {
  if (n <= 2) throw std::invalid_argument("lemma simulation requires n > 2");
  if (k < 1) throw std::invalid_argument("k must be at least 1");

  std::vector<long> exceed(eps_grid.size(), 0);
  for (int trial = 0; trial < k; ++trial) {
    Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(trial)));
    double weighted = 0.0;
    double weight = 0.0;
    for (int t = 0; t < n; ++t) {
      const int alpha = t == 0 ? 1 : (t == 1 ? -1 : rng.rademacher());
      const double w = noise.draw(rng);
      weighted += (1 + alpha) * w;
      weight += 1 + alpha;
    }
    const double x = std::abs(weighted / weight);
    for (std::size_t j = 0; j < eps_grid.size(); ++j) {
      if (x >= eps_grid[j]) ++exceed[j];
    }
  }

  std::vector<double> freq(eps_grid.size());
  for (std::size_t j = 0; j < eps_grid.size(); ++j) {
    freq[j] = static_cast<double>(exceed[j]) / k;
  }
  return freq;
}

}  // namespace sps
