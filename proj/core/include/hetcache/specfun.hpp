#pragma once

#include "hetcache/model.hpp"

namespace hetcache {

double gamma_fn(double x);
/// Ratio prod Gamma(num) / prod Gamma(den), evaluated in log space.
double gamma_ratio(std::initializer_list<double> num, std::initializer_list<double> den);

/**
 * Gauss hypergeometric function 2F1(a, b; c; x) for real x <= 0.
 *
 * Small |x| uses the power series, moderate |x| the Pfaff transform to a
 * positive argument, and |x| > 1/2 the connection formula in 1/(1-x). Throws
 * InvalidArgument for x > 0 or c a non-positive integer, NumericFailure if a
 * series does not converge.
 */
double hyp2f1_neg_arg(double a, double b, double c, double x);

/// 2F1(a, b; c; x) - 1 without cancellation near x = 0.
double hyp2f1_neg_arg_minus_one(double a, double b, double c, double x);

/// Parameters of the interference kernel for interfering tier j seen from
/// serving tier k: antenna counts and the bias ratio B_j / B_k.
struct KernelParams {
  double alpha = 4.0;
  int antennas_j = 1;
  int antennas_k = 1;
  double bias_ratio = 1.0;

  double antenna_ratio() const { return static_cast<double>(antennas_j) / antennas_k; }
};

/// Interference from tier j when interferers are at least as far (in biased
/// power) as the serving station: 2F1(-d, M_j; 1-d; -x/(M_jk B_jk)) - 1.
double kernel_z1(double x, const KernelParams& p);
/// Interference from tier j with no exclusion region:
/// Gamma(1-d) Gamma(M_j+d) / Gamma(M_j) * (x/M_jk)^d.
double kernel_z2(double x, const KernelParams& p);

KernelParams kernel_params(const NetworkConfig& cfg, std::size_t j, std::size_t k);

/// Helper-tier constants at SINR threshold x.
struct C123 {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};
C123 kernels_c123(double x, const NetworkConfig& cfg);

}  // namespace hetcache
