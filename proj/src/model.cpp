#include "sps/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sps {

namespace {

long long parse_ll(const std::string& text) {
  std::size_t pos = 0;
  long long v = std::stoll(text, &pos);
  if (pos != text.size()) {
    throw std::invalid_argument("trailing characters in number: '" + text +
                                "'");
  }
  return v;
}

}  // namespace

Rational::Rational(long long numerator, long long denominator)
    : num(numerator), den(denominator) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(parse_ll(text.substr(0, slash)),
                    parse_ll(text.substr(slash + 1)));
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    return Rational(parse_ll(text), 1);
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t frac_digits = text.size() - dot - 1;
  if (frac_digits > 17) {
    throw std::invalid_argument("too many decimal digits in '" + text + "'");
  }
  long long den = 1;
  for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
  return Rational(parse_ll(digits), den);
}

SpsConfig::SpsConfig(int m_, int q_, int n_, bool fix)
    : m(m_), q(q_), n(n_), fix_first_two_signs(fix) {
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  if (q <= 0 || q >= m) throw std::invalid_argument("q must satisfy 0 < q < m");
  if (n < 2) throw std::invalid_argument("n must be at least 2");
}

Rational SpsConfig::confidence_level() const { return Rational(m - q, m); }

SpsConfig config_from_level(const Rational& p, int n, bool fix_signs) {
  if (p.num <= 0 || p.num >= p.den) {
    throw std::invalid_argument("confidence level must lie strictly in (0,1)");
  }
  // 1 - p = q/m in lowest terms gives the minimal pair.
  Rational complement(p.den - p.num, p.den);
  int q = static_cast<int>(complement.num);
  int m = static_cast<int>(complement.den);
  return SpsConfig(m, q, n, fix_signs);
}

SpsInstance::SpsInstance(SpsConfig config, std::vector<std::int8_t> signs,
                         std::vector<int> tie_break)
    : config_(config), signs_(std::move(signs)), tie_break_(std::move(tie_break)) {
  const std::size_t expected =
      static_cast<std::size_t>(config_.m - 1) * config_.n;
  if (signs_.size() != expected) {
    throw std::invalid_argument("sign matrix must be (m-1) x n");
  }
  for (std::int8_t s : signs_) {
    if (s != 1 && s != -1) {
      throw std::invalid_argument("sign entries must be +1 or -1");
    }
  }
  if (tie_break_.size() != static_cast<std::size_t>(config_.m)) {
    throw std::invalid_argument("tie-break permutation must have m entries");
  }
  std::vector<char> seen(config_.m, 0);
  for (int label : tie_break_) {
    if (label < 0 || label >= config_.m || seen[label]) {
      throw std::invalid_argument("tie-break is not a permutation of 0..m-1");
    }
    seen[label] = 1;
  }
  if (config_.fix_first_two_signs) {
    for (int i = 1; i < config_.m; ++i) {
      if (sign(i, 0) != 1 || sign(i, 1) != -1) {
        throw std::invalid_argument(
            "fixed-sign instances need each row to start with +1, -1");
      }
    }
  }
}

DataSet::DataSet(std::vector<double> phi_, std::vector<double> y_)
    : phi(std::move(phi_)), y(std::move(y_)) {
  if (phi.size() != y.size()) {
    throw std::invalid_argument("phi and y must have equal length");
  }
  if (phi.empty()) throw std::invalid_argument("data set must be nonempty");
  for (std::size_t t = 0; t < phi.size(); ++t) {
    if (!std::isfinite(phi[t]) || !std::isfinite(y[t])) {
      throw std::invalid_argument("data entries must be finite");
    }
  }
}

double DataSet::sum_phi_squared() const {
  double s = 0.0;
  for (double v : phi) s += v * v;
  return s;
}

bool ConfidenceRegion::contains(double theta) const {
  for (const Interval& iv : intervals) {
    if (theta < iv.lo) return false;
    if (theta <= iv.hi) return true;
  }
  return false;
}

void ConfidenceRegion::validate() const {
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    if (!(intervals[j].lo <= intervals[j].hi)) {
      throw std::logic_error("region component with lo > hi");
    }
    if (j > 0 && !(intervals[j - 1].hi < intervals[j].lo)) {
      throw std::logic_error("region components overlap or touch");
    }
  }
  const bool first_inf =
      !intervals.empty() && std::isinf(intervals.front().lo);
  const bool last_inf = !intervals.empty() && std::isinf(intervals.back().hi);
  if (first_inf != unbounded_low || last_inf != unbounded_high) {
    throw std::logic_error("unbounded flags disagree with interval endpoints");
  }
}

double BoundSpec::sigma() const {
  return std::visit([](const auto& r) { return r.sigma; }, regime);
}

void BoundSpec::validate() const {
  if (!(sigma() > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (const auto* b = std::get_if<BoundedRegressor>(&regime)) {
    if (!(b->phi_min > 0.0)) {
      throw std::invalid_argument("phi_min must be positive");
    }
  } else if (const auto* g = std::get_if<GaussianRegressor>(&regime)) {
    if (!(g->sigma_phi > 0.0)) {
      throw std::invalid_argument("sigma_phi must be positive");
    }
  } else if (const auto* u = std::get_if<UserRegressorMgf>(&regime)) {
    if (!u->mgf) throw std::invalid_argument("mgf evaluator must be set");
  }
}

}  // namespace sps
