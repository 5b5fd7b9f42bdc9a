#include "sps/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "sps/errors.hpp"

namespace sps {

namespace {

void check_mq(int m, int q) {
  if (m < 2 || q <= 0 || q >= m) {
    throw std::invalid_argument("need integers 0 < q < m");
  }
}

double prefactor_of(int m, int q) { return 4.0 * (m - q); }

// log(1/2 + 1/2*exp(-x)) for x >= 0, accurate near x = 0.
double log_half_plus_half_exp(double x) {
  return std::log1p(0.5 * std::expm1(-x));
}

double mgf_value(const UserRegressorMgf& reg, double t) {
  const double v = reg.mgf(t);
  if (!(v > 0.0) || v > 1.0) {
    throw std::invalid_argument(
        "mgf evaluator returned a value outside (0, 1] at t = " +
        std::to_string(t));
  }
  return v;
}

// ln(delta / (4(m - q))) / ln(1/2) + 1; the inversion formulas are defined
// only for n strictly above this.
double exact_threshold(double delta, int m, int q) {
  return std::log(delta / prefactor_of(m, q)) / std::log(0.5) + 1.0;
}

[[noreturn]] void throw_below_threshold(int n, double threshold) {
  const int min_n = static_cast<int>(std::floor(threshold)) + 1;
  throw SampleSizeError("sample size " + std::to_string(n) +
                            " is below the inversion validity threshold "
                            "(needs n >= " +
                            std::to_string(min_n) + ")",
                        min_n);
}

}  // namespace

BoundValue lemma_tail(double epsilon, int n, double sigma) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  if (n <= 2) throw std::invalid_argument("lemma_tail requires n > 2");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const double x = epsilon * epsilon / (2.0 * sigma * sigma);
  return BoundValue{2.0, static_cast<double>(n - 1),
                    log_half_plus_half_exp(x)};
}

BoundValue tail_bound(const TailQuery& query) {
  if (!(query.epsilon >= 0.0)) {
    throw std::invalid_argument("epsilon must be >= 0");
  }
  if (query.n < 2) throw std::invalid_argument("n must be at least 2");
  check_mq(query.m, query.q);
  query.spec.validate();
  if (query.spec.target != BoundTarget::exact_region) {
    throw std::invalid_argument(
        "tail_bound handles exact-region targets; use outer_tail_bound");
  }

  const double pref = prefactor_of(query.m, query.q);
  const double eps2 = query.epsilon * query.epsilon;
  const double n1 = static_cast<double>(query.n - 1);

  return std::visit(
      [&](const auto& regime) -> BoundValue {
        using T = std::decay_t<decltype(regime)>;
        const double s2 = regime.sigma * regime.sigma;
        if constexpr (std::is_same_v<T, ConstantInNoise>) {
          return {pref, n1, log_half_plus_half_exp(eps2 / (2.0 * s2))};
        } else if constexpr (std::is_same_v<T, BoundedRegressor>) {
          const double x = eps2 * regime.phi_min * regime.phi_min / (2.0 * s2);
          return {pref, n1, log_half_plus_half_exp(x)};
        } else if constexpr (std::is_same_v<T, GaussianRegressor>) {
          const double y =
              2.0 * eps2 * regime.sigma_phi * regime.sigma_phi / s2;
          const double base_m1 = 0.5 * std::expm1(-0.5 * std::log1p(y));
          return {pref, n1 / 4.0, std::log1p(base_m1)};
        } else {
          const double v = mgf_value(regime, -eps2 / s2);
          return {pref, n1 / 4.0, std::log1p(0.5 * (v - 1.0))};
        }
      },
      query.spec.regime);
}

BoundValue outer_tail_bound(const TailQuery& query) {
  if (!(query.epsilon >= 0.0)) {
    throw std::invalid_argument("epsilon must be >= 0");
  }
  if (query.n < 2) throw std::invalid_argument("n must be at least 2");
  check_mq(query.m, query.q);
  query.spec.validate();
  if (query.spec.target != BoundTarget::outer_approximation) {
    throw std::invalid_argument(
        "outer_tail_bound handles outer-approximation targets");
  }

  const double pref = prefactor_of(query.m, query.q);
  const double eps2 = query.epsilon * query.epsilon;
  const double n1 = static_cast<double>(query.n - 1);

  if (const auto* c = std::get_if<ConstantInNoise>(&query.spec.regime)) {
    const double x = eps2 / (8.0 * c->sigma * c->sigma);
    return {pref, n1, log_half_plus_half_exp(x)};
  }
  if (const auto* b = std::get_if<BoundedRegressor>(&query.spec.regime)) {
    const double x =
        eps2 * b->phi_min * b->phi_min / (8.0 * b->sigma * b->sigma);
    return {pref, n1, log_half_plus_half_exp(x)};
  }
  throw BoundNotAvailableError(
      "no closed-form outer-approximation bound for this regressor regime");
}

double invert_radius(const RadiusQuery& query) {
  if (!(query.delta > 0.0 && query.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  check_mq(query.m, query.q);
  query.spec.validate();

  const double log_d =
      std::log(query.delta / prefactor_of(query.m, query.q));
  const bool outer = query.spec.target == BoundTarget::outer_approximation;

  return std::visit(
      [&](const auto& regime) -> double {
        using T = std::decay_t<decltype(regime)>;
        const double s2 = regime.sigma * regime.sigma;
        if constexpr (std::is_same_v<T, ConstantInNoise> ||
                      std::is_same_v<T, BoundedRegressor>) {
          const double threshold =
              exact_threshold(query.delta, query.m, query.q);
          if (!(query.n > threshold)) throw_below_threshold(query.n, threshold);
          // 2*(delta/(4(m-q)))^(1/(n-1)) - 1, guaranteed positive above the
          // threshold up to rounding.
          const double arg = 2.0 * std::exp(log_d / (query.n - 1)) - 1.0;
          if (!(arg > 0.0)) throw_below_threshold(query.n, threshold);
          const double factor = outer ? 32.0 : 2.0;
          double radius = std::sqrt(-factor * s2 * std::log(arg));
          if constexpr (std::is_same_v<T, BoundedRegressor>) {
            radius /= regime.phi_min;
          }
          return radius;
        } else if constexpr (std::is_same_v<T, GaussianRegressor>) {
          if (outer) {
            throw BoundNotAvailableError(
                "no closed-form outer-approximation inversion for Gaussian "
                "regressors");
          }
          const double threshold =
              4.0 * (exact_threshold(query.delta, query.m, query.q) - 1.0) +
              1.0;
          if (!(query.n > threshold)) throw_below_threshold(query.n, threshold);
          // u = 2*(delta/(4(m-q)))^(4/(n-1)) - 2; then 1/t^2 - 1 with
          // t = 1 + u is expanded to avoid cancellation for t near 1.
          const double u = 2.0 * std::expm1(4.0 * log_d / (query.n - 1));
          const double t = 1.0 + u;
          if (!(t > 0.0)) throw_below_threshold(query.n, threshold);
          const double inv_t2_minus_1 = -u * (2.0 + u) / (t * t);
          return std::sqrt(s2 * inv_t2_minus_1 /
                           (2.0 * regime.sigma_phi * regime.sigma_phi));
        } else {
          throw BoundNotAvailableError(
              "no closed-form inversion for a user-supplied regressor MGF");
        }
      },
      query.spec.regime);
}

int min_valid_sample_size(double delta, int m, int q, const BoundSpec& spec) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  check_mq(m, q);
  spec.validate();
  if (std::holds_alternative<UserRegressorMgf>(spec.regime)) {
    throw BoundNotAvailableError(
        "no closed-form inversion for a user-supplied regressor MGF");
  }
  if (std::holds_alternative<GaussianRegressor>(spec.regime)) {
    if (spec.target == BoundTarget::outer_approximation) {
      throw BoundNotAvailableError(
          "no closed-form outer-approximation inversion for Gaussian "
          "regressors");
    }
    const double threshold = 4.0 * (exact_threshold(delta, m, q) - 1.0) + 1.0;
    return static_cast<int>(std::floor(threshold)) + 1;
  }
  return static_cast<int>(std::floor(exact_threshold(delta, m, q))) + 1;
}

}  // namespace sps
