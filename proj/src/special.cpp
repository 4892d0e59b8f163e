#include "owisac/special.hpp"

#include <cmath>
#include <limits>

#include "owisac/errors.hpp"

namespace owisac {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Continued-fraction tail of E1(z)·e^z for z >= 1 (modified Lentz):
//   E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(...))))
// Converges in a handful of iterations for z >= 1.
double e1_cf_scaled(double z) {
  const double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 300; ++i) {
    const double an = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) return h;
  }
  throw NonConvergence("exp_integral_ei: continued fraction failed");
}

// Power series for Ei(x) on [-1, 0): Ei(x) = gamma + ln|x| + sum x^k/(k·k!).
double ei_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k <= 60; ++k) {
    term *= x / static_cast<double>(k);
    const double add = term / static_cast<double>(k);
    sum += add;
    if (std::fabs(add) < 1e-18 * (std::fabs(sum) + 1.0)) break;
  }
  return kEulerGamma + std::log(-x) + sum;
}

void check_ei_domain(double x) {
  if (!(x < 0.0)) throw DomainError("exp_integral_ei: requires x < 0");
}

void check_ih_domain(double a, double b, double eta) {
  if (!(a > 0.0) || !(b > a)) {
    throw DomainError("ih_integral: requires 0 < a < b");
  }
  if (!(eta <= 0.0)) throw DomainError("ih_integral: requires eta <= 0");
}

}  // namespace

double exp_integral_ei(double x) {
  check_ei_domain(x);
  if (x >= -1.0) return ei_series(x);
  // Ei(x) = -E1(-x); for x < -745 the e^x factor underflows to 0.
  return -std::exp(x) * e1_cf_scaled(-x);
}

double exp_integral_ei_scaled(double x) {
  check_ei_domain(x);
  if (x >= -1.0) return ei_series(x) * std::exp(-x);
  return -e1_cf_scaled(-x);
}

double gaussian_q(double x) {
  return 0.5 * std::erfc(x * M_SQRT1_2);
}

double ih_integral(double a, double b, double eta) {
  check_ih_domain(a, b, eta);
  if (eta == 0.0) return b - a;
  if (eta / b > -700.0) {
    return b * std::exp(eta / b) - a * std::exp(eta / a) +
           eta * (exp_integral_ei(eta / a) - exp_integral_ei(eta / b));
  }
  // Dominant scale e^{eta/b} underflows; recover what precision remains.
  return std::exp(log_ih_integral(a, b, eta));
}

double log_ih_integral(double a, double b, double eta) {
  check_ih_domain(a, b, eta);
  if (eta == 0.0) return std::log(b - a);
  // I_h = e^{eta/b} · (b - a·w + eta·(Eis(eta/a)·w - Eis(eta/b))),
  // w = e^{eta(1/a - 1/b)} <= 1, Eis(x) = Ei(x)·e^{-x}.
  const double w = std::exp(eta * (1.0 / a - 1.0 / b));
  const double scaled = b - a * w +
                        eta * (exp_integral_ei_scaled(eta / a) * w -
                               exp_integral_ei_scaled(eta / b));
  return eta / b + std::log(scaled);
}

double gh_auxiliary(double a, double b, double eta) {
  check_ih_domain(a, b, eta);
  if (eta == 0.0) return (b - a) / (std::log(b) - std::log(a));
  // Numerator and denominator share the factor e^{eta/b}; cancel it so the
  // ratio survives eta far below the underflow threshold of e^{eta/b}.
  const double w = std::exp(eta * (1.0 / a - 1.0 / b));
  const double num = b - a * w;
  const double den =
      exp_integral_ei_scaled(eta / a) * w - exp_integral_ei_scaled(eta / b);
  return num / den + eta;
}

}  // namespace owisac
