#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "../oracles/frozen_values.hpp"
#include "hetcache/errors.hpp"
#include "hetcache/specfun.hpp"

using namespace hetcache;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Direct power series, usable only for |x| well inside the unit disc.
double series_oracle(double a, double b, double c, double x) {
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < 400; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("gamma function and ratios") {
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)));
  CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(M_PI)));
  CHECK_THROWS_AS(gamma_fn(-2.0), InvalidArgument);
  CHECK_THROWS_AS(gamma_fn(0.0), InvalidArgument);
  CHECK(gamma_ratio({200.5}, {200.0}) == doctest::Approx(std::sqrt(200.0) * (1.0 - 1.0 / 1600.0)).epsilon(1e-6));
  CHECK(gamma_ratio({-0.5, 3.0}, {0.5}) == doctest::Approx(-2.0 * 2.0));
}

TEST_CASE("hypergeometric function matches high-precision references") {
  for (const auto& h : frozen::kHyp2f1) {
    INFO("a=" << h.a << " b=" << h.b << " c=" << h.c << " x=" << h.x);
    CHECK(rel(hyp2f1_neg_arg(h.a, h.b, h.c, h.x), h.value) < 1e-12);
  }
}

TEST_CASE("hypergeometric function agrees with the plain series near zero") {
  const double d = 2.0 / 3.7;
  for (double x : {-1e-8, -1e-3, -0.1, -0.3, -0.45})
    for (double b : {1.0, 2.0, 4.0})
      CHECK(rel(hyp2f1_neg_arg(-d, b, 1.0 - d, x), series_oracle(-d, b, 1.0 - d, x)) < 1e-13);
}

TEST_CASE("transformation branches join continuously") {
  // The evaluator switches method around x = -0.5 and at |x| max(1,|b|) = 0.5.
  const double d = 2.0 / 3.7;
  for (double b : {1.0, 4.0, 16.0}) {
    for (double edge : {-0.5 / b, -0.5, -1.0, -2.0}) {
      const double lo = hyp2f1_neg_arg(-d, b, 1.0 - d, edge * (1.0 + 1e-12));
      const double hi = hyp2f1_neg_arg(-d, b, 1.0 - d, edge * (1.0 - 1e-12));
      CHECK(rel(lo, hi) < 1e-11);
    }
  }
}

TEST_CASE("minus-one variant keeps relative accuracy near zero") {
  const double d = 2.0 / 3.7;
  for (double x : {-1e-12, -1e-9, -1e-6, -1e-3}) {
    // First-order term of the series: a b x / c.
    const double first = -d * 4.0 * x / (1.0 - d);
    const double v = hyp2f1_neg_arg_minus_one(-d, 4.0, 1.0 - d, x);
    CHECK(rel(v, first) < 10.0 * std::abs(x) + 1e-14);
  }
  CHECK(hyp2f1_neg_arg_minus_one(-d, 4.0, 1.0 - d, 0.0) == 0.0);
  CHECK(rel(hyp2f1_neg_arg_minus_one(-d, 4.0, 1.0 - d, -50.0), hyp2f1_neg_arg(-d, 4.0, 1.0 - d, -50.0) - 1.0) <
        1e-14);
}

TEST_CASE("integer a - b is handled") {
  // a - b integer makes the large-argument connection formula degenerate.
  const double v = hyp2f1_neg_arg(-1.0, 2.0, 0.5, -10.0);
  // Polynomial: 1 + a b x / c = 1 + 40.
  CHECK(v == doctest::Approx(41.0).epsilon(1e-12));
  // 30-digit references.
  struct Ref {
    double a, b, c, x, value;
  };
  const Ref refs[] = {{1.5, 1.5, 2.5, -3.0, 0.26034599630094634753},
                      {1.5, 1.5, 2.5, -50.0, 0.014119288027027194152},
                      {0.5, 2.5, 1.2, -200.0, 0.03765363656676614209},
                      {-0.5, 1.5, 0.7, -1e4, 159.5254966125193458},
                      {2.0, 1.0, 3.5, -20.0, 0.10141820854129055027}};
  for (const Ref& r : refs) {
    CAPTURE(r.x);
    CHECK(rel(hyp2f1_neg_arg(r.a, r.b, r.c, r.x), r.value) < 1e-9);
  }
}

TEST_CASE("hypergeometric domain errors") {
  CHECK_THROWS_AS(hyp2f1_neg_arg(0.5, 1.0, 1.5, 0.1), InvalidArgument);
  CHECK_THROWS_AS(hyp2f1_neg_arg(0.5, 1.0, -2.0, -0.1), InvalidArgument);
  CHECK_THROWS_AS(hyp2f1_neg_arg(0.5, 1.0, 1.5, std::nan("")), InvalidArgument);
  CHECK(hyp2f1_neg_arg(0.5, 1.0, 1.5, 0.0) == 1.0);
}

TEST_CASE("interference kernel equals its integral representation") {
  for (const auto& z : frozen::kZ1Integral) {
    KernelParams p{z.alpha, z.m, z.m, 1.0};
    CHECK(rel(kernel_z1(z.x, p), z.value) < 1e-12);
  }
  // Independent double-precision quadrature through Boost.
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double alpha : {2.5, 3.7, 5.0}) {
    for (int m : {1, 2, 4, 8}) {
      for (double x : {0.01, 0.7, 5.0, 60.0}) {
        const double d = 2.0 / alpha;
        const double k = 1.0 / (1.0 - d);
        // u = s^k turns the u^(-delta-1) weight into a smooth integrand.
        const auto f = [&](double s) {
          const double sk = std::pow(s, k);
          return sk > 0.0 ? -std::expm1(-m * std::log1p(x * sk)) / sk : m * x;
        };
        const double val = d * k * ts.integrate(f, 0.0, 1.0);
        CHECK(rel(kernel_z1(x, KernelParams{alpha, m, m, 1.0}), val) < 1e-10);
      }
    }
  }
}

TEST_CASE("kernel scaling by antenna and bias ratios") {
  const KernelParams scaled{3.7, 4, 1, 10.0};
  const KernelParams plain{3.7, 4, 4, 1.0};
  // Z1 only sees x / (M_jk B_jk).
  CHECK(rel(kernel_z1(8.0, scaled), kernel_z1(8.0 / 40.0, plain)) < 1e-14);
  // Z2 for a single antenna reduces to Gamma(1-d) Gamma(1+d) x^d.
  const double d = 2.0 / 3.7;
  CHECK(rel(kernel_z2(2.0, KernelParams{3.7, 1, 1, 1.0}), std::tgamma(1 - d) * std::tgamma(1 + d) * std::pow(2.0, d)) <
        1e-14);
  CHECK_THROWS_AS(kernel_z1(-1.0, plain), InvalidArgument);
  CHECK_THROWS_AS(kernel_z1(1.0, KernelParams{3.7, 1, 1, 0.0}), InvalidArgument);
}

TEST_CASE("helper constants") {
  const NetworkConfig cfg = NetworkConfig::reference();
  const C123 c = kernels_c123(0.3, cfg);
  const double d = cfg.delta();
  CHECK(c.c2 == doctest::Approx(std::tgamma(1 - d) * std::tgamma(1 + d) * std::pow(0.3, d)));
  // C3 = Z1 - Z2 for a single-antenna tier with unit bias ratio.
  const KernelParams p{cfg.alpha, 1, 1, 1.0};
  CHECK(rel(c.c3, kernel_z1(0.3, p) - kernel_z2(0.3, p)) < 1e-12);
  CHECK(c.c1 > 0.0);
  NetworkConfig bad = cfg;
  bad.bias_helper = 0.0;
  CHECK_THROWS_AS(kernels_c123(0.3, bad), InvalidArgument);
}

}
