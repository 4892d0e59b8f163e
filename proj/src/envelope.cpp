#include "owisac/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "owisac/quadrature.hpp"
#include "owisac/special.hpp"

namespace owisac {

double PamConstellation::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) m += probs[i] * levels[i];
  return m;
}

double PamConstellation::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    v += probs[i] * (levels[i] - m) * (levels[i] - m);
  }
  return v;
}

double PamConstellation::harmonic_mean() const {
  double h = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) h += probs[i] / levels[i];
  return h;
}

double PamConstellation::entropy() const {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

PamConstellation design_low_snr(const EnvelopeConstraints& c) {
  const double a = c.a_min;
  const double b = c.b_peak;
  const double s = c.sigma_h;
  if (b < 1.0 / s) {
    throw InfeasibleConstraint("design_low_snr: b_peak < 1/sigma_h");
  }
  const double x1 = (s >= 1.0 / (2.0 * a)) ? a : 1.0 / (2.0 * s);
  double a1;
  if (s >= 0.5 * (1.0 / a + 1.0 / b)) {
    a1 = 0.5;
  } else if (s < 1.0 / (2.0 * a)) {
    a1 = (s - 1.0 / b) / (2.0 * s - 1.0 / b);
  } else {
    a1 = (s - 1.0 / b) / (1.0 / a - 1.0 / b);
  }
  return {{x1, b}, {a1, 1.0 - a1}};
}

std::vector<double> pam_levels_uniform(const EnvelopeConstraints& c, int m) {
  if (m < 2) throw DomainError("pam_levels_uniform: order must be >= 2");
  std::vector<double> levels(m);
  for (int k = 1; k <= m; ++k) {
    levels[k - 1] = (static_cast<double>(k - 1) * c.b_peak +
                     static_cast<double>(m - k) * c.a_min) /
                    static_cast<double>(m - 1);
  }
  return levels;
}

namespace {

// Discrete counterpart of gh_auxiliary: Σ e^{η/x_m} / Σ (1/x_m)e^{η/x_m},
// evaluated with the largest exponent shifted out (the top level dominates
// for η < 0, so all shifted exponents are <= 0 and underflow is benign).
double gh_discrete(const std::vector<double>& levels, double eta) {
  const double top = levels.back();
  double num = 0.0;
  double den = 0.0;
  for (double x : levels) {
    const double w = std::exp(eta * (1.0 / x - 1.0 / top));
    num += w;
    den += w / x;
  }
  return num / den;
}

}  // namespace

PamConstellation design_high_snr(const EnvelopeConstraints& c, int m,
                                 double tol) {
  if (c.b_peak < 1.0 / c.sigma_h) {
    throw InfeasibleConstraint("design_high_snr: b_peak < 1/sigma_h");
  }
  std::vector<double> levels = pam_levels_uniform(c, m);

  double equal_harmonic = 0.0;
  for (double x : levels) equal_harmonic += 1.0 / x;
  equal_harmonic /= static_cast<double>(m);
  if (equal_harmonic <= c.sigma_h) {
    // Equal probabilities already satisfy the constraint.
    return {levels,
            std::vector<double>(m, 1.0 / static_cast<double>(m))};
  }

  // Same extended bisection contract as the continuous solver.
  const double target = 1.0 / c.sigma_h;
  double eta_left = -1.0;
  int doublings = 0;
  while (gh_discrete(levels, eta_left) < target) {
    eta_left *= 2.0;
    if (++doublings > 64) {
      throw NonConvergence("design_high_snr: bracket failed to widen");
    }
  }
  double eta_right = 0.0;
  for (int it = 0; it < 200 && std::fabs(eta_left - eta_right) >= tol; ++it) {
    const double mid = 0.5 * (eta_left + eta_right);
    if (gh_discrete(levels, mid) >= target) {
      eta_left = mid;
    } else {
      eta_right = mid;
    }
  }
  const double eta_hat = 0.5 * (eta_left + eta_right);
  if (std::fabs(gh_discrete(levels, eta_hat) - target) > 1e-8) {
    throw NonConvergence("design_high_snr: residual above 1e-8");
  }

  std::vector<double> probs(m);
  const double top = levels.back();
  double norm = 0.0;
  for (int i = 0; i < m; ++i) {
    probs[i] = std::exp(eta_hat * (1.0 / levels[i] - 1.0 / top));
    norm += probs[i];
  }
  for (double& p : probs) p /= norm;
  return {std::move(levels), std::move(probs)};
}

double pam_cdf(const PamConstellation& p, double x) {
  double cum = 0.0;
  for (std::size_t i = 0; i < p.levels.size(); ++i) {
    if (p.levels[i] > x) break;
    cum += p.probs[i];
  }
  return cum;
}

double cdf_sup_distance(const PamConstellation& p,
                        const MaxEntropyDistribution& d) {
  // Both CDFs agree (0 and 1) outside [A, B]; the sup is attained at a jump
  // of the step CDF, approached from below or sitting on the jump.
  double dist = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < p.levels.size(); ++i) {
    const double f = maxent_cdf(d, p.levels[i]);
    dist = std::max(dist, std::fabs(f - cum));  // left limit of the step
    cum += p.probs[i];
    dist = std::max(dist, std::fabs(f - cum));  // value at the jump
  }
  return dist;
}

double mutual_information_discrete(const PamConstellation& p,
                                   double noise_sigma) {
  if (!(noise_sigma > 0.0)) {
    throw DomainError(
        "mutual_information_discrete: noise_sigma must be positive");
  }
  const double sig = noise_sigma;
  const double inv_norm = 1.0 / (std::sqrt(2.0 * M_PI) * sig);
  const auto& xs = p.levels;
  const auto& ps = p.probs;
  const auto mixture = [&](double y) {
    double f = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double z = (y - xs[i]) / sig;
      f += ps[i] * std::exp(-0.5 * z * z);
    }
    return f * inv_norm;
  };
  const auto integrand = [&](double y) {
    const double f = mixture(y);
    return (f > 1e-300) ? -f * std::log(f) : 0.0;
  };
  const double lo = xs.front() - 10.0 * sig;
  const double hi = xs.back() + 10.0 * sig;
  const double h_out =
      integrate_adaptive(integrand, lo, hi, xs, 1e-8);
  const double two_pi_e = 2.0 * M_PI * M_E;
  const double mi = h_out - 0.5 * std::log(two_pi_e * sig * sig);
  return std::clamp(mi, 0.0, std::log(static_cast<double>(p.order())));
}

}  // namespace owisac
