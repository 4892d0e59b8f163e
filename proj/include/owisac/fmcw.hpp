#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "owisac/envelope.hpp"
#include "owisac/errors.hpp"

namespace owisac {

/// Triangular-chirp FMCW parameters. The product R_s·T_F must be an integer
/// sample count and N_s must divide it (each PAM symbol spans a whole number
/// of samples).
struct FmcwConfig {
  double carrier_hz;          ///< optical carrier f_c
  double chirp_bandwidth_hz;  ///< chirp excursion B_f
  double period_s;            ///< FMCW period T_F (up-ramp + down-ramp)
  int symbols_per_period;     ///< PAM symbols per period N_s
  double sample_rate_hz;      ///< complex baseband sample rate R_s
  double light_speed_mps = 3.0e8;

  void validate() const;
  long samples_per_period() const;
  long samples_per_symbol() const;
};

/// Target kinematics, geometry offsets and detector gains.
struct TargetScenario {
  double range_m;             ///< d0 > 0
  double velocity_mps;        ///< v0 (positive = receding)
  double comm_offset_m;       ///< radial offset r_c of the comm receiver
  double sense_offset_m;      ///< radial offset r_s of the retro-reflector
  double reflectivity;        ///< equivalent reflectivity in (0, 1]
  double waist_m;             ///< beam waist w0
  double rayleigh_m;          ///< Rayleigh distance d_R
  double amplitude;           ///< transmitted field amplitude A_T
  double responsivity_comm;   ///< APD-TIA responsivity
  double responsivity_sense;  ///< BPD-TIA responsivity
};

/// Post-detection AWGN levels and the master seed. The sensing noise std is
/// the total complex power: each quadrature receives variance σ_s²/2.
struct NoiseSpec {
  double sigma_comm;
  double sigma_sense;
  std::uint64_t seed = 0;
};

enum class Ramp { Up, Down };

/// Deterministic per-trial random stream: a counter-based split of the
/// master seed, so trial i sees the same draws regardless of how trials are
/// scheduled across threads. Uniforms come from the top 53 bits of a
/// splitmix64-seeded xoshiro256++; normals via Box-Muller.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);
  static RngStream for_trial(std::uint64_t master_seed, std::uint64_t trial);

  double uniform();  ///< [0, 1)
  double normal();   ///< standard normal

 private:
  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Instantaneous chirp frequency offset from the carrier at time t
/// (periodically extended): 2·B_f·t/T_F on the up-ramp, B_f(2 − 2t/T_F) on
/// the down-ramp.
double instantaneous_frequency(double t, const FmcwConfig& cfg);

/// Signed beat frequency for one ramp:
///   up:   2 f_c v0/c + 4 B_f d0/(c T_F)
///   down: 2 f_c v0/c − 4 B_f d0/(c T_F)
/// Throws AliasError when |f_b| >= R_s/2 (outside the complex baseband
/// Nyquist interval).
double beat_frequency(const TargetScenario& s, const FmcwConfig& cfg,
                      Ramp ramp);

struct ChannelGains {
  double h_c;  ///< direct-detection gain (goes as 1/d0²)
  double h_s;  ///< coherent-detection gain (goes as 1/d0)
};

/// Packed amplitude/propagation gains:
///   h_c = A_T² d_R² R_c/d0² · exp(−2 d_R² r_c²/(w0² d0²))
///   h_s = 2 A_T d_R ℛ R_s/d0 · exp(−d_R² r_s²/(w0² d0²))
ChannelGains channel_gains(const TargetScenario& s);

/// One FMCW period of envelope samples: N_s i.i.d. symbols drawn from the
/// constellation, each held for R_s·T_F/N_s samples.
std::vector<double> generate_envelope(const PamConstellation& p,
                                      const FmcwConfig& cfg, RngStream& rng);

struct DetectionResult {
  std::vector<double> y;                 ///< direct-detection samples
  std::vector<std::complex<double>> z;   ///< coherent IQ samples
  double phase;                          ///< φ drawn for this run
  double f_beat_up;
  double f_beat_down;
};

/// Simulate one period of both receivers from an envelope realization:
///   y[n]   = h_c·x[n − round(d0/c·R_s)] + N(0, σ_c²)
///   z[n]   = h_s·√(x[n − round(2d0/c·R_s)])·e^{j(2π f_b t_n + φ)}
///            + N(0, σ_s²/2) per quadrature
/// with φ ~ U[0, 2π) drawn from the stream and the delayed envelope indexed
/// periodically. Only the post-LPF baseband models are synthesized.
DetectionResult simulate_detection(const std::vector<double>& envelope,
                                   const TargetScenario& s,
                                   const FmcwConfig& cfg, const NoiseSpec& n,
                                   RngStream& rng);

/// Sub-optimal envelope estimate from the IQ samples themselves:
/// x̂[n] = (z_I² + z_Q²)/h_s².
std::vector<double> estimate_envelope(
    const std::vector<std::complex<double>>& z_iq, double h_s);

struct BeatRecovery {
  std::vector<std::complex<double>> z;     ///< normalized beat signal
  std::vector<std::uint8_t> degenerate;    ///< per-sample x̂ < 1e−12 flag
  long degenerate_samples = 0;
};

/// Divide out the gain and the envelope estimate:
/// z[n] = (z_I + j z_Q)/(h_s·√(x̂[n])). With zero noise and the exact
/// envelope this is e^{j(2π f_b t + φ)} exactly. Samples with x̂ < 1e−12
/// are flagged degenerate (set to 0, excluded from error metrics).
BeatRecovery recover_beat(const std::vector<std::complex<double>>& z_iq,
                          double h_s, std::span<const double> envelope_est);

/// Half-open sample interval [begin, end).
struct SampleWindow {
  long begin;
  long end;
};

/// Default estimation windows: the portion of each ramp past the round-trip
/// dead zone, trimmed to sample boundaries.
SampleWindow default_window(const TargetScenario& s, const FmcwConfig& cfg,
                            Ramp ramp);

/// Beat-frequency estimate over one window: magnitude-maximal bin of the
/// zero-padded (>= 8x) DFT, refined by three-point parabolic interpolation
/// on log-magnitude. Resolution <= R_s/(8·window length). The window must
/// lie within a single ramp (WindowError otherwise).
double estimate_beat_frequency(std::span<const std::complex<double>> z,
                               SampleWindow window, const FmcwConfig& cfg);

/// Invert the two-ramp beat system:
///   d̂ = (f_up − f_down)·c·T_F/(8 B_f),  v̂ = (f_up + f_down)·c/(4 f_c).
std::pair<double, double> estimate_range_velocity(double f_up, double f_down,
                                                  const FmcwConfig& cfg);

struct SensingRunResult {
  double mse_beat;            ///< mean |z − reference|² per included sample
  double rmse_range_m;
  double rmse_velocity_mps;
  long trials;
  double beat_freq_true_up_hz;
  double beat_freq_true_down_hz;
  long degenerate_samples;
};

/// Monte-Carlo sensing run: per trial a fresh envelope, noise and phase from
/// the trial's own counter-split stream; beat recovery divides by the true
/// delayed envelope (ideal estimate); beat frequencies estimated on the
/// default windows and inverted to range/velocity. The result is identical
/// for a given (seed, trials) regardless of num_threads.
SensingRunResult monte_carlo_sensing(const PamConstellation& p,
                                     const TargetScenario& s,
                                     const FmcwConfig& cfg, const NoiseSpec& n,
                                     long trials, int num_threads = 1);

}  // namespace owisac
