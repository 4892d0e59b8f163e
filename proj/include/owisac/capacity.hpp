#pragma once

#include <map>
#include <string>
#include <vector>

#include "owisac/envelope.hpp"
#include "owisac/maxent.hpp"

namespace owisac {

/// Which branch of the piecewise max-variance solution applies.
enum class VarianceCase {
  BothEndpoints,   ///< ς >= (1/A + 1/B)/2: symmetric two-point law on {A, B}
  InteriorPoint,   ///< ς <= 1/(2A): optimal lower level sits at 1/(2ς) > A
  HarmonicActive,  ///< between the two: lower level at A, harmonic mean = ς
};

/// Largest variance attainable under the constraint triple, together with
/// the moments of the attaining two-point (Bernoulli-type) law.
struct MaxVarianceResult {
  double variance;  ///< σ_X², <= (B−A)²/4
  double mean;      ///< E[X] of the attaining law
  double harmonic;  ///< E[1/X] of the attaining law, <= ς
  VarianceCase case_id;
};

/// Piecewise closed form for the maximum variance:
///   (B−A)²/4                     when ς >= (1/A + 1/B)/2,
///   B(Bς−1)/(4ς)                 when ς <= 1/(2A),
///   (ς − 1/B)(1/A − ς)·A²B²      otherwise.
/// The shared boundary ς = 1/(2A) is assigned to the InteriorPoint branch
/// (the two formulas coincide there). Throws InfeasibleConstraint if B < 1/ς.
MaxVarianceResult max_variance(const EnvelopeConstraints& c);

/// Low-SNR duality upper bound: ½ ln(1 + σ_X²/σ̃²) nats.
double low_snr_upper_bound(const MaxVarianceResult& v, double noise_sigma);

/// Low-SNR asymptote: σ_X²/(2σ̃²) nats.
double low_snr_asymptote(const MaxVarianceResult& v, double noise_sigma);

/// Hyper-parameters of the high-SNR duality bound's output construction
/// (tilted law on [A−δ, B+δ] with Gaussian roll-off outside).
struct HighSnrHyperParams {
  double sigma_star;  ///< ς* = min(ς, 2/(A+B))
  double delta;       ///< roll-off offset δ > 0
  double eta_tilde;   ///< tilt η̃ in [η*, 0]
};

/// Practical recipe: ς* = min(ς, 2/(A+B)); δ = σ̃·ln(1 + A/(2σ̃));
/// η̃ = η*(1 − exp(−ς δ²/(2σ̃²))).
HighSnrHyperParams high_snr_hyperparams(const EnvelopeConstraints& c,
                                        double eta_star, double noise_sigma);

/// High-SNR duality upper bound (nats), assembled closed form with
/// J(δ, η̃) = I_h(A−δ, B+δ, η̃)/(1 − 2Q(δ/σ̃)). Valid (and required) only
/// for δ < A; throws DomainError otherwise.
double high_snr_upper_bound(const EnvelopeConstraints& c,
                            const HighSnrHyperParams& hp, double noise_sigma);

/// High-SNR capacity asymptote (nats):
/// ln((B−A)/σ̃) − ½ln(2πe) + ln((Ei(η*/A) − Ei(η*/B))/((B−A)ς)) − η*ς,
/// where the η* = 0 limit reduces to ln((B−A)/σ̃) − ½ln(2πe).
double high_snr_asymptote(const EnvelopeConstraints& c, double eta_star,
                          double noise_sigma);

/// SNR-independent part of the asymptote (the gap to ln((B−A)/σ̃)); depends
/// only on A/B and the normalized sensing priority.
double high_snr_asymptotic_gap(const EnvelopeConstraints& c, double eta_star);

/// Normalized sensing priority χ = (ς_max − ς)/(ς_max − ς_min) ∈ [0, 1]
/// (χ = 0: constraint inactive; χ = 1: tightest feasible threshold).
double nsp_from_sigma(const EnvelopeConstraints& c);

/// Inverse map: threshold ς for a given priority χ ∈ [0, 1] on [A, B].
double sigma_from_nsp(double a_min, double b_peak, double chi);

/// Per-SNR capacity bookkeeping for one constraint triple. All rates in
/// nats; snr_db is (B−A)/σ̃ in dB.
struct CapacityCurve {
  std::vector<double> snr_db;
  std::vector<double> lower;
  std::vector<double> upper_low;
  std::vector<double> upper_high;
  std::vector<double> asymptote_low;
  std::vector<double> asymptote_high;
  std::map<std::string, std::vector<double>> achievable;
};

/// Noise std for an SNR point: σ̃ = (B−A)/10^(dB/20).
double noise_sigma_from_snr_db(const EnvelopeConstraints& c, double snr_db);

/// Build the full curve: lower bound, both upper bounds, both asymptotes and
/// the achievable rate of each labelled constellation, checking the sandwich
/// invariant lower <= min(upper_low, upper_high) + 1e−9 at every point.
/// Where the high-SNR construction is invalid (δ >= A; only possible at very
/// large σ̃), the upper_high column falls back to the low-SNR bound.
CapacityCurve build_capacity_curve(
    const EnvelopeConstraints& c, const std::vector<double>& snr_grid_db,
    const std::vector<std::pair<std::string, PamConstellation>>&
        constellations);

}  // namespace owisac
