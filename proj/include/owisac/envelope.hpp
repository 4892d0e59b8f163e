#pragma once

#include <vector>

#include "owisac/maxent.hpp"

namespace owisac {

/// Discrete envelope law: PAM levels x_m with probabilities a_m.
/// Levels are strictly increasing within [A, B]; probabilities sum to one.
struct PamConstellation {
  std::vector<double> levels;
  std::vector<double> probs;

  int order() const { return static_cast<int>(levels.size()); }
  double mean() const;
  double variance() const;
  double harmonic_mean() const;  ///< Σ a_m / x_m
  double entropy() const;        ///< −Σ a_m ln a_m, nats
};

/// Max-variance two-point design for the low-SNR regime:
/// x2 = B; x1 = A when ς >= 1/(2A), else 1/(2ς); a1 from the three-branch
/// closed form. Attains the max_variance moments exactly.
/// Throws InfeasibleConstraint when B < 1/ς.
PamConstellation design_low_snr(const EnvelopeConstraints& c);

/// Uniformly spaced PAM levels x_k = ((k−1)B + (M−k)A)/(M−1), endpoints
/// exactly A and B. Throws DomainError for m < 2.
std::vector<double> pam_levels_uniform(const EnvelopeConstraints& c, int m);

/// Max-entropy probability design on uniform levels for the high-SNR regime:
/// a_m ∝ exp(η̂*/x_m) with η̂* from the discrete harmonic-mean dual equation
/// (same extended bisection as the continuous solver); equal probabilities
/// when they already satisfy the constraint.
/// Throws InfeasibleConstraint / NonConvergence.
PamConstellation design_high_snr(const EnvelopeConstraints& c, int m,
                                 double tol = 1e-10);

/// Right-continuous step CDF of the constellation; 0 below the first level,
/// 1 from the last level upward.
double pam_cdf(const PamConstellation& p, double x);

/// Kolmogorov sup-distance between the step CDF and the continuous
/// max-entropy CDF (jumps compared from both sides).
double cdf_sup_distance(const PamConstellation& p,
                        const MaxEntropyDistribution& d);

/// Mutual information I(X;Y) in nats of the discrete-input Gaussian channel
/// Y = X + N(0, σ̃²): h(Y) − ½ln(2πeσ̃²), with h(Y) integrated adaptively
/// over [x_min − 10σ̃, x_max + 10σ̃] to absolute tolerance 1e−8.
/// Result clamped to [0, ln M].
double mutual_information_discrete(const PamConstellation& p,
                                   double noise_sigma);

}  // namespace owisac
