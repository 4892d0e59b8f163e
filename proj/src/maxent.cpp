#include "owisac/maxent.hpp"

#include <cmath>

#include "owisac/special.hpp"

namespace owisac {

double EnvelopeConstraints::sigma_max() const {
  return (std::log(b_peak) - std::log(a_min)) / (b_peak - a_min);
}

double EnvelopeConstraints::sigma_min() const {
  return 1.0 / b_peak;
}

ConstraintCase classify_case(const EnvelopeConstraints& c) {
  if (c.b_peak < 1.0 / c.sigma_h) return ConstraintCase::Infeasible;
  if (c.sigma_h >= c.sigma_max()) return ConstraintCase::ConstraintInactive;
  return ConstraintCase::TradeOff;
}

MaxEntropyDistribution solve_max_entropy(const EnvelopeConstraints& c,
                                         double tol_eta) {
  if (!(tol_eta > 0.0)) {
    throw DomainError("solve_max_entropy: tol_eta must be positive");
  }
  const ConstraintCase kase = classify_case(c);
  if (kase == ConstraintCase::Infeasible) {
    throw InfeasibleConstraint(
        "solve_max_entropy: b_peak < 1/sigma_h, no feasible law");
  }

  const double a = c.a_min;
  const double b = c.b_peak;

  if (kase == ConstraintCase::ConstraintInactive) {
    // Uniform law: eta* = 0, exp(mu* - 1) = 1/(B - A).
    return {c, 0.0, 1.0 - std::log(b - a), kase};
  }

  // Trade-off: g_h decreases from (B-A)/ln(B/A) at 0 toward B as eta -> -inf,
  // and ς_min < ς < ς_max puts 1/ς strictly between those limits.
  const double target = 1.0 / c.sigma_h;
  double eta_left = -1.0;
  int doublings = 0;
  while (gh_auxiliary(a, b, eta_left) < target) {
    eta_left *= 2.0;
    if (++doublings > 64) {
      throw NonConvergence("solve_max_entropy: bracket failed to widen");
    }
  }
  double eta_right = 0.0;
  double eta_mid = 0.5 * (eta_left + eta_right);
  // Bisection keeps g_h(eta_left) >= target > g_h(eta_right); iterate on the
  // bracket width and then confirm the residual (value-based termination).
  for (int it = 0; it < 200 && std::fabs(eta_left - eta_right) >= tol_eta;
       ++it) {
    eta_mid = 0.5 * (eta_left + eta_right);
    if (gh_auxiliary(a, b, eta_mid) >= target) {
      eta_left = eta_mid;
    } else {
      eta_right = eta_mid;
    }
  }
  const double eta_star = 0.5 * (eta_left + eta_right);
  if (std::fabs(gh_auxiliary(a, b, eta_star) - target) > 1e-8) {
    throw NonConvergence("solve_max_entropy: residual above 1e-8");
  }
  const double mu_star = 1.0 - log_ih_integral(a, b, eta_star);
  return {c, eta_star, mu_star, kase};
}

double maxent_pdf(const MaxEntropyDistribution& d, double x) {
  if (x < d.constraints.a_min || x > d.constraints.b_peak) return 0.0;
  return std::exp(d.eta_star / x + d.mu_star - 1.0);
}

double maxent_cdf(const MaxEntropyDistribution& d, double x) {
  const double a = d.constraints.a_min;
  const double b = d.constraints.b_peak;
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;
  if (d.eta_star == 0.0) return (x - a) / (b - a);
  return std::exp(log_ih_integral(a, x, d.eta_star) -
                  log_ih_integral(a, b, d.eta_star));
}

double maxent_entropy(const MaxEntropyDistribution& d) {
  const double a = d.constraints.a_min;
  const double b = d.constraints.b_peak;
  if (d.case_id == ConstraintCase::ConstraintInactive || d.eta_star == 0.0) {
    return std::log(b - a);
  }
  const double eta = d.eta_star;
  const double sigma = d.constraints.sigma_h;
  // ln(Ei(eta/A) - Ei(eta/B)) evaluated through the scaled Ei so the
  // common e^{eta/B} factor never underflows.
  const double w = std::exp(eta * (1.0 / a - 1.0 / b));
  const double den_scaled = exp_integral_ei_scaled(eta / a) * w -
                            exp_integral_ei_scaled(eta / b);
  return eta / b + std::log(den_scaled) - std::log(sigma) - eta * sigma;
}

double capacity_lower_bound(const MaxEntropyDistribution& d,
                            double noise_sigma) {
  if (!(noise_sigma > 0.0)) {
    throw DomainError("capacity_lower_bound: noise_sigma must be positive");
  }
  const double h = maxent_entropy(d);
  const double two_pi_e = 2.0 * M_PI * M_E;
  return 0.5 * std::log1p(std::exp(2.0 * h) /
                          (two_pi_e * noise_sigma * noise_sigma));
}

}  // namespace owisac
