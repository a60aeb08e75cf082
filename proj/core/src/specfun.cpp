#include "hetcache/specfun.hpp"

#include <cmath>
#include <limits>

#include "hetcache/errors.hpp"

namespace hetcache {

double gamma_fn(double x) {
  if (std::isnan(x)) throw InvalidArgument("gamma of NaN");
  if (x <= 0.0 && x == std::floor(x)) throw InvalidArgument("gamma pole at a non-positive integer");
  return std::tgamma(x);
}

namespace {

bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double gamma_sign(double x) {
  if (x > 0.0) return 1.0;
  return static_cast<long long>(std::floor(x)) % 2 == 0 ? 1.0 : -1.0;
}

// Sum_{n >= first} (a)_n (b)_n / ((c)_n n!) z^n.
double series(double a, double b, double c, double z, int first) {
  constexpr int kMaxTerms = 20000;
  double term = 1.0;
  double sum = first == 0 ? 1.0 : 0.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && n > 2) return sum;
  }
  throw NumericFailure("hypergeometric series did not converge");
}

bool integer_gap(double a, double b) { return std::abs(a - b - std::round(a - b)) < 1e-12; }

// 2F1 for x in (-inf, -1/2) via the 1/(1-x) connection formula; requires a - b
// away from the integers.
double connection(double a, double b, double c, double x) {
  const double w = 1.0 / (1.0 - x);
  double t1 = 0.0;
  double t2 = 0.0;
  if (!nonpositive_integer(c - a) && !nonpositive_integer(b)) {
    t1 = gamma_ratio({c, b - a}, {b, c - a}) * std::pow(1.0 - x, -a) * series(a, c - b, a - b + 1.0, w, 0);
  }
  if (!nonpositive_integer(a) && !nonpositive_integer(c - b)) {
    t2 = gamma_ratio({c, a - b}, {a, c - b}) * std::pow(1.0 - x, -b) * series(b, c - a, b - a + 1.0, w, 0);
  }
  return t1 + t2;
}

void check_args(double a, double b, double c, double x) {
  if (std::isnan(a) || std::isnan(b) || std::isnan(c) || std::isnan(x))
    throw InvalidArgument("hypergeometric argument is NaN");
  if (x > 0.0) throw InvalidArgument("hyp2f1_neg_arg requires x <= 0");
  if (nonpositive_integer(c)) throw InvalidArgument("hypergeometric c is a non-positive integer");
}

// Below this |x| the plain series has no meaningful cancellation.
bool direct_ok(double b, double x) { return std::abs(x) * std::max(1.0, std::abs(b)) <= 0.5; }

}  // namespace

double gamma_ratio(std::initializer_list<double> num, std::initializer_list<double> den) {
  double log_sum = 0.0;
  double sign = 1.0;
  for (double v : num) {
    if (nonpositive_integer(v)) throw InvalidArgument("gamma pole in ratio numerator");
    log_sum += std::lgamma(v);
    sign *= gamma_sign(v);
  }
  for (double v : den) {
    if (nonpositive_integer(v)) return 0.0;
    log_sum -= std::lgamma(v);
    sign *= gamma_sign(v);
  }
  return sign * std::exp(log_sum);
}

double hyp2f1_neg_arg(double a, double b, double c, double x) {
  check_args(a, b, c, x);
  if (x == 0.0) return 1.0;
  if (direct_ok(b, x)) return series(a, b, c, x, 0);
  const bool degenerate = integer_gap(a, b);
  if (x >= -0.5 || (degenerate && x >= -9.0)) {
    // Pfaff: (1-x)^{-b} 2F1(c-a, b; c; x/(x-1)) with x/(x-1) in (0, 0.9].
    return std::pow(1.0 - x, -b) * series(c - a, b, c, x / (x - 1.0), 0);
  }
  if (degenerate) {
    // Integer a - b puts the connection formula on a removable pole; the
    // symmetric difference in b cancels the first-order error.
    constexpr double eps = 1e-5;
    return 0.5 * (connection(a, b + eps, c, x) + connection(a, b - eps, c, x));
  }
  return connection(a, b, c, x);
}

double hyp2f1_neg_arg_minus_one(double a, double b, double c, double x) {
  check_args(a, b, c, x);
  if (x == 0.0) return 0.0;
  if (direct_ok(b, x)) return series(a, b, c, x, 1);
  return hyp2f1_neg_arg(a, b, c, x) - 1.0;
}

KernelParams kernel_params(const NetworkConfig& cfg, std::size_t j, std::size_t k) {
  KernelParams p;
  p.alpha = cfg.alpha;
  p.antennas_j = cfg.antennas(j);
  p.antennas_k = cfg.antennas(k);
  p.bias_ratio = cfg.bias(j) / cfg.bias(k);
  return p;
}

double kernel_z1(double x, const KernelParams& p) {
  if (!(x >= 0.0)) throw InvalidArgument("kernel argument must be >= 0");
  if (!(p.bias_ratio > 0.0) || !std::isfinite(p.bias_ratio))
    throw InvalidArgument("kernel bias ratio must be positive and finite");
  const double d = 2.0 / p.alpha;
  return hyp2f1_neg_arg_minus_one(-d, p.antennas_j, 1.0 - d, -x / (p.antenna_ratio() * p.bias_ratio));
}

double kernel_z2(double x, const KernelParams& p) {
  if (!(x >= 0.0)) throw InvalidArgument("kernel argument must be >= 0");
  const double d = 2.0 / p.alpha;
  const double m = p.antennas_j;
  return gamma_ratio({1.0 - d, m + d}, {m}) * std::pow(x / p.antenna_ratio(), d);
}

C123 kernels_c123(double x, const NetworkConfig& cfg) {
  if (!(x >= 0.0)) throw InvalidArgument("threshold must be >= 0");
  if (!(cfg.bias_helper > 0.0)) throw InvalidArgument("helper bias must be positive");
  const double d = cfg.delta();
  const double lam12 = cfg.lambda_macro / cfg.lambda_helper;
  const double pb12 = cfg.power_macro * cfg.bias_macro / (cfg.power_helper * cfg.bias_helper);
  const double m12 = static_cast<double>(cfg.antennas_macro) / kHelperAntennas;
  const double b12 = cfg.bias_macro / cfg.bias_helper;
  C123 out;
  out.c1 = lam12 * std::pow(pb12, d) * hyp2f1_neg_arg(-d, cfg.antennas_macro, 1.0 - d, -x / (m12 * b12));
  out.c2 = std::tgamma(1.0 - d) * std::tgamma(1.0 + d) * std::pow(x, d);
  out.c3 = hyp2f1_neg_arg_minus_one(-d, 1.0, 1.0 - d, -x) - out.c2;
  return out;
}

}  // namespace hetcache
