#pragma once

#include "owisac/errors.hpp"

namespace owisac {

/// Exponential integral Ei(x) = ∫_{-inf}^{x} e^u/u du for x < 0.
///
/// Strictly negative and strictly decreasing on (-inf, 0): the integrand is
/// negative there, so pushing the upper limit toward 0 only accumulates more
/// negative area. |Ei(x)| <= e^x/|x|, so the value underflows to zero for
/// x < -745 (documented, not an error). Absolute accuracy ~1e-15.
///
/// Throws DomainError for x >= 0 (Ei has a logarithmic singularity at 0 and
/// the solvers here never need the positive axis).
double exp_integral_ei(double x);

/// Ei(x)·e^{-x} for x < 0. Stays representable for arbitrarily negative x
/// (Ei itself underflows); used to evaluate ratios of Ei values whose common
/// exponential scale cancels. Behaves like 1/x as x -> -inf.
double exp_integral_ei_scaled(double x);

/// Standard Gaussian complementary CDF Q(x) = 1 - Phi(x) = erfc(x/√2)/2.
double gaussian_q(double x);

/// I_h(a, b, eta) = ∫_a^b exp(eta/x) dx for 0 < a < b, eta <= 0.
///
/// Closed form: b·e^{eta/b} - a·e^{eta/a} + eta·(Ei(eta/a) - Ei(eta/b)),
/// with the eta = 0 limit returned analytically as b - a (Ei(0) diverges).
/// Throws DomainError for invalid (a, b) or eta > 0.
double ih_integral(double a, double b, double eta);

/// log(I_h(a, b, eta)), computed without forming e^{eta/b}; stays finite
/// where ih_integral itself would underflow (eta/b < -745).
double log_ih_integral(double a, double b, double eta);

/// Auxiliary ratio g_h(eta) = (b·e^{eta/b} - a·e^{eta/a}) /
/// (Ei(eta/a) - Ei(eta/b)) + eta, i.e. ∫ e^{eta/x} dx / ∫ (1/x) e^{eta/x} dx:
/// the reciprocal harmonic mean of the tilted law exp(eta/x) on [a, b].
///
/// Strictly decreasing in eta on (-inf, 0] with g_h(0) = (b-a)/ln(b/a) and
/// g_h(-inf) = b. Evaluated in a scaled form (common factor e^{eta/b}
/// cancelled) so it stays finite for arbitrarily negative eta.
double gh_auxiliary(double a, double b, double eta);

}  // namespace owisac
