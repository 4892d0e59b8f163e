#pragma once

#include "owisac/errors.hpp"

namespace owisac {

/// Envelope constraint triple: amplitude floor A, amplitude peak B and the
/// harmonic-mean threshold ς (E[1/X] <= ς). The floor/peak come from the
/// intensity modulator's unambiguous range, so 0 < A < B <= 1.
struct EnvelopeConstraints {
  double a_min;    ///< envelope floor A, in (0, 1)
  double b_peak;   ///< envelope peak B, in (A, 1]
  double sigma_h;  ///< harmonic-mean threshold ς, > 0

  EnvelopeConstraints(double a, double b, double sigma)
      : a_min(a), b_peak(b), sigma_h(sigma) {
    if (!(a > 0.0 && a < b && b <= 1.0)) {
      throw DomainError("EnvelopeConstraints: need 0 < a_min < b_peak <= 1");
    }
    if (!(sigma > 0.0)) {
      throw DomainError("EnvelopeConstraints: need sigma_h > 0");
    }
  }

  /// Loosest threshold with any bite: harmonic mean of the uniform law,
  /// ς_max = ln(B/A)/(B−A). Above it the constraint is inactive.
  double sigma_max() const;
  /// Tightest attainable threshold ς_min = 1/B (all mass at the peak).
  double sigma_min() const;
};

enum class ConstraintCase {
  Infeasible,          ///< B < 1/ς: no law on [A,B] can satisfy E[1/X] <= ς
  ConstraintInactive,  ///< ς >= ς_max: uniform law already satisfies it
  TradeOff,            ///< ς_min <= ς < ς_max: constraint binds with equality
};

ConstraintCase classify_case(const EnvelopeConstraints& c);

/// Solved max-entropy law f*(x) = exp(η*/x + μ* − 1) on [A, B]: the entropy
/// maximizer under the harmonic-mean constraint (truncated exponential
/// family). η* <= 0 is the harmonic-mean dual variable; μ* normalizes.
struct MaxEntropyDistribution {
  EnvelopeConstraints constraints;
  double eta_star;  ///< harmonic-mean dual variable, <= 0
  double mu_star;   ///< normalization dual variable
  ConstraintCase case_id;
};

/// Solve for the max-entropy distribution by the extended bisection method:
/// bracket [η_l, 0] with η_l = −1 doubled until g_h(η_l) >= 1/ς, then bisect
/// to bracket width < tol_eta. Termination is also value-based: the residual
/// |g_h(η*) − 1/ς| must come below 1e−8 in the trade-off case.
///
/// Throws InfeasibleConstraint when B < 1/ς, NonConvergence if the bracket
/// fails to widen within 64 doublings.
MaxEntropyDistribution solve_max_entropy(const EnvelopeConstraints& c,
                                         double tol_eta = 1e-10);

/// Density of the solved law: exp(η*/x + μ* − 1) on [A, B], 0 elsewhere.
double maxent_pdf(const MaxEntropyDistribution& d, double x);

/// CDF of the solved law: I_h(A, x, η*)/I_h(A, B, η*) on [A, B].
double maxent_cdf(const MaxEntropyDistribution& d, double x);

/// Differential entropy in nats. Trade-off case:
/// ln((Ei(η*/A) − Ei(η*/B))/ς) − η*ς; inactive case: ln(B − A).
double maxent_entropy(const MaxEntropyDistribution& d);

/// Entropy-power-inequality capacity lower bound in nats:
/// ½ ln(1 + exp(2 h(X)) / (2πe σ̃²)) for normalized noise std σ̃ > 0.
double capacity_lower_bound(const MaxEntropyDistribution& d,
                            double noise_sigma);

}  // namespace owisac
