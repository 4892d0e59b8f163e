#include "owisac/fmcw.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace owisac {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : state_) s = splitmix64(sm);
}

RngStream RngStream::for_trial(std::uint64_t master_seed,
                               std::uint64_t trial) {
  // Counter-based split: the constructor's splitmix pass decorrelates
  // consecutive trial indices.
  return RngStream(master_seed ^
                   (0x9E3779B97F4A7C15ULL * (trial + 0x632BE59BD9B4E019ULL)));
}

double RngStream::uniform() {
  // xoshiro256++
  const std::uint64_t result = rotl64(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl64(state_[3], 45);
  return static_cast<double>(result >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

void FmcwConfig::validate() const {
  if (!(carrier_hz > 0.0 && chirp_bandwidth_hz > 0.0 && period_s > 0.0 &&
        sample_rate_hz > 0.0 && light_speed_mps > 0.0 &&
        symbols_per_period > 0)) {
    throw DomainError("FmcwConfig: all parameters must be positive");
  }
  const double count = sample_rate_hz * period_s;
  const double rounded = std::round(count);
  if (std::fabs(count - rounded) > 1e-6 || rounded < 2.0) {
    throw DomainError("FmcwConfig: R_s * T_F must be an integer sample count");
  }
  const long samples = static_cast<long>(rounded);
  if (samples % symbols_per_period != 0) {
    throw DomainError(
        "FmcwConfig: symbols_per_period must divide the per-period samples");
  }
  if (samples % 2 != 0) {
    throw DomainError("FmcwConfig: per-period sample count must be even");
  }
}

long FmcwConfig::samples_per_period() const {
  return static_cast<long>(std::round(sample_rate_hz * period_s));
}

long FmcwConfig::samples_per_symbol() const {
  return samples_per_period() / symbols_per_period;
}

double instantaneous_frequency(double t, const FmcwConfig& cfg) {
  double tau = std::fmod(t, cfg.period_s);
  if (tau < 0.0) tau += cfg.period_s;
  const double half = 0.5 * cfg.period_s;
  if (tau <= half) return 2.0 * cfg.chirp_bandwidth_hz * tau / cfg.period_s;
  return cfg.chirp_bandwidth_hz * (2.0 - 2.0 * tau / cfg.period_s);
}

double beat_frequency(const TargetScenario& s, const FmcwConfig& cfg,
                      Ramp ramp) {
  const double doppler =
      2.0 * cfg.carrier_hz * s.velocity_mps / cfg.light_speed_mps;
  const double range_term = 4.0 * cfg.chirp_bandwidth_hz * s.range_m /
                            (cfg.light_speed_mps * cfg.period_s);
  const double f =
      (ramp == Ramp::Up) ? doppler + range_term : doppler - range_term;
  if (std::fabs(f) >= 0.5 * cfg.sample_rate_hz) {
    throw AliasError("beat_frequency: |f_b| >= R_s/2, outside Nyquist");
  }
  return f;
}

ChannelGains channel_gains(const TargetScenario& s) {
  if (!(s.range_m > 0.0)) {
    throw DomainError("channel_gains: range_m must be positive");
  }
  const double d0 = s.range_m;
  const double ratio = s.rayleigh_m / (s.waist_m * d0);
  const double h_c = s.amplitude * s.amplitude * s.rayleigh_m * s.rayleigh_m *
                     s.responsivity_comm / (d0 * d0) *
                     std::exp(-2.0 * ratio * ratio * s.comm_offset_m *
                              s.comm_offset_m);
  const double h_s = 2.0 * s.amplitude * s.rayleigh_m * s.reflectivity *
                     s.responsivity_sense / d0 *
                     std::exp(-ratio * ratio * s.sense_offset_m *
                              s.sense_offset_m);
  return {h_c, h_s};
}

std::vector<double> generate_envelope(const PamConstellation& p,
                                      const FmcwConfig& cfg, RngStream& rng) {
  cfg.validate();
  const long hold = cfg.samples_per_symbol();
  std::vector<double> cum(p.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    acc += p.probs[i];
    cum[i] = acc;
  }
  std::vector<double> out(static_cast<std::size_t>(cfg.samples_per_period()));
  long pos = 0;
  for (int sym = 0; sym < cfg.symbols_per_period; ++sym) {
    const double u = rng.uniform();
    std::size_t idx = 0;
    while (idx + 1 < cum.size() && u >= cum[idx]) ++idx;
    const double level = p.levels[idx];
    for (long k = 0; k < hold; ++k) out[pos++] = level;
  }
  return out;
}

DetectionResult simulate_detection(const std::vector<double>& envelope,
                                   const TargetScenario& s,
                                   const FmcwConfig& cfg, const NoiseSpec& n,
                                   RngStream& rng) {
  cfg.validate();
  const long total = cfg.samples_per_period();
  if (static_cast<long>(envelope.size()) != total) {
    throw DomainError("simulate_detection: envelope length != R_s * T_F");
  }
  const double f_up = beat_frequency(s, cfg, Ramp::Up);
  const double f_down = beat_frequency(s, cfg, Ramp::Down);
  const ChannelGains g = channel_gains(s);
  const long delay_c = std::lround(s.range_m / cfg.light_speed_mps *
                                   cfg.sample_rate_hz);
  const long delay_s = std::lround(2.0 * s.range_m / cfg.light_speed_mps *
                                   cfg.sample_rate_hz);
  const double phase = 2.0 * M_PI * rng.uniform();
  const double quad_sigma = n.sigma_sense * M_SQRT1_2;

  DetectionResult out;
  out.phase = phase;
  out.f_beat_up = f_up;
  out.f_beat_down = f_down;
  out.y.resize(envelope.size());
  out.z.resize(envelope.size());
  const long half = total / 2;
  for (long i = 0; i < total; ++i) {
    const double t = static_cast<double>(i) / cfg.sample_rate_hz;
    const double xc = envelope[((i - delay_c) % total + total) % total];
    const double xs = envelope[((i - delay_s) % total + total) % total];
    out.y[i] = g.h_c * xc + n.sigma_comm * rng.normal();
    const double fb = (i < half) ? f_up : f_down;
    const double arg = 2.0 * M_PI * fb * t + phase;
    const double amp = g.h_s * std::sqrt(xs);
    out.z[i] = {amp * std::cos(arg) + quad_sigma * rng.normal(),
                amp * std::sin(arg) + quad_sigma * rng.normal()};
  }
  return out;
}

std::vector<double> estimate_envelope(
    const std::vector<std::complex<double>>& z_iq, double h_s) {
  if (!(h_s > 0.0)) {
    throw DomainError("estimate_envelope: h_s must be positive");
  }
  std::vector<double> est(z_iq.size());
  for (std::size_t i = 0; i < z_iq.size(); ++i) {
    est[i] = std::norm(z_iq[i]) / (h_s * h_s);
  }
  return est;
}

BeatRecovery recover_beat(const std::vector<std::complex<double>>& z_iq,
                          double h_s, std::span<const double> envelope_est) {
  if (!(h_s > 0.0)) {
    throw DomainError("recover_beat: h_s must be positive");
  }
  if (envelope_est.size() != z_iq.size()) {
    throw DomainError("recover_beat: estimate length != sample count");
  }
  BeatRecovery out;
  out.z.resize(z_iq.size());
  out.degenerate.assign(z_iq.size(), 0);
  for (std::size_t i = 0; i < z_iq.size(); ++i) {
    if (envelope_est[i] < 1e-12) {
      out.degenerate[i] = 1;
      ++out.degenerate_samples;
      out.z[i] = 0.0;
    } else {
      out.z[i] = z_iq[i] / (h_s * std::sqrt(envelope_est[i]));
    }
  }
  return out;
}

SampleWindow default_window(const TargetScenario& s, const FmcwConfig& cfg,
                            Ramp ramp) {
  const long half = cfg.samples_per_period() / 2;
  const long dead = static_cast<long>(
      std::ceil(2.0 * s.range_m / cfg.light_speed_mps * cfg.sample_rate_hz -
                1e-9));
  if (ramp == Ramp::Up) return {dead, half};
  return {half + dead, 2 * half};
}

namespace {

void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

double estimate_beat_frequency(std::span<const std::complex<double>> z,
                               SampleWindow window, const FmcwConfig& cfg) {
  const long total = static_cast<long>(z.size());
  const long half = total / 2;
  if (window.begin < 0 || window.end > total || window.begin >= window.end) {
    throw WindowError("estimate_beat_frequency: window outside the period");
  }
  if (!(window.end <= half || window.begin >= half)) {
    throw WindowError("estimate_beat_frequency: window crosses ramp boundary");
  }
  const long len = window.end - window.begin;
  if (len < 8) {
    throw WindowError("estimate_beat_frequency: window too short");
  }
  std::size_t nfft = 1;
  while (nfft < static_cast<std::size_t>(8 * len)) nfft <<= 1;
  std::vector<std::complex<double>> buf(nfft, 0.0);
  std::copy(z.begin() + window.begin, z.begin() + window.end, buf.begin());
  fft_inplace(buf);

  std::size_t peak = 0;
  double peak_mag = -1.0;
  for (std::size_t k = 0; k < nfft; ++k) {
    const double mag = std::norm(buf[k]);
    if (mag > peak_mag) {
      peak_mag = mag;
      peak = k;
    }
  }
  // Three-point parabolic refinement on log-magnitude (cyclic neighbors).
  const auto logmag = [&](std::size_t k) {
    return 0.5 * std::log(std::norm(buf[k % nfft]) + 1e-300);
  };
  const double lm = logmag(peak + nfft - 1);
  const double l0 = logmag(peak);
  const double lp = logmag(peak + 1);
  const double denom = lm - 2.0 * l0 + lp;
  double shift = 0.0;
  if (denom != 0.0) {
    shift = 0.5 * (lm - lp) / denom;
    if (!(std::fabs(shift) <= 1.0)) shift = 0.0;
  }
  double bin = static_cast<double>(peak) + shift;
  if (bin >= 0.5 * static_cast<double>(nfft)) {
    bin -= static_cast<double>(nfft);
  }
  return bin * cfg.sample_rate_hz / static_cast<double>(nfft);
}

std::pair<double, double> estimate_range_velocity(double f_up, double f_down,
                                                  const FmcwConfig& cfg) {
  const double range = (f_up - f_down) * cfg.light_speed_mps * cfg.period_s /
                       (8.0 * cfg.chirp_bandwidth_hz);
  const double velocity =
      (f_up + f_down) * cfg.light_speed_mps / (4.0 * cfg.carrier_hz);
  return {range, velocity};
}

namespace {

struct TrialOutcome {
  double mse_sum = 0.0;
  long mse_count = 0;
  double range_sq_err = 0.0;
  double velocity_sq_err = 0.0;
  long degenerate = 0;
};

TrialOutcome run_trial(const PamConstellation& p, const TargetScenario& s,
                       const FmcwConfig& cfg, const NoiseSpec& n,
                       const ChannelGains& g, SampleWindow up,
                       SampleWindow down, std::uint64_t trial) {
  RngStream rng = RngStream::for_trial(n.seed, trial);
  const std::vector<double> envelope = generate_envelope(p, cfg, rng);
  const DetectionResult det = simulate_detection(envelope, s, cfg, n, rng);

  // Ideal envelope estimate: the true delayed envelope (see module notes);
  // noise then enters the recovered beat purely additively.
  const long total = cfg.samples_per_period();
  const long delay_s = std::lround(2.0 * s.range_m / cfg.light_speed_mps *
                                   cfg.sample_rate_hz);
  std::vector<double> est(envelope.size());
  for (long i = 0; i < total; ++i) {
    est[i] = envelope[((i - delay_s) % total + total) % total];
  }
  const BeatRecovery rec = recover_beat(det.z, g.h_s, est);

  TrialOutcome out;
  out.degenerate = rec.degenerate_samples;
  const auto accumulate_mse = [&](SampleWindow w, double fb) {
    for (long i = w.begin; i < w.end; ++i) {
      if (rec.degenerate[i]) continue;
      const double t = static_cast<double>(i) / cfg.sample_rate_hz;
      const std::complex<double> ref =
          std::polar(1.0, 2.0 * M_PI * fb * t + det.phase);
      out.mse_sum += std::norm(rec.z[i] - ref);
      ++out.mse_count;
    }
  };
  accumulate_mse(up, det.f_beat_up);
  accumulate_mse(down, det.f_beat_down);

  const double f_up_hat = estimate_beat_frequency(rec.z, up, cfg);
  const double f_down_hat = estimate_beat_frequency(rec.z, down, cfg);
  const auto [range_hat, velocity_hat] =
      estimate_range_velocity(f_up_hat, f_down_hat, cfg);
  out.range_sq_err = (range_hat - s.range_m) * (range_hat - s.range_m);
  out.velocity_sq_err =
      (velocity_hat - s.velocity_mps) * (velocity_hat - s.velocity_mps);
  return out;
}

}  // namespace

SensingRunResult monte_carlo_sensing(const PamConstellation& p,
                                     const TargetScenario& s,
                                     const FmcwConfig& cfg, const NoiseSpec& n,
                                     long trials, int num_threads) {
  cfg.validate();
  if (trials < 1) {
    throw DomainError("monte_carlo_sensing: trials must be >= 1");
  }
  const ChannelGains g = channel_gains(s);
  const SampleWindow up = default_window(s, cfg, Ramp::Up);
  const SampleWindow down = default_window(s, cfg, Ramp::Down);
  const double f_up = beat_frequency(s, cfg, Ramp::Up);
  const double f_down = beat_frequency(s, cfg, Ramp::Down);

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  const int workers = std::clamp(num_threads, 1,
                                 static_cast<int>(std::min<long>(trials, 64)));
  if (workers == 1) {
    for (long i = 0; i < trials; ++i) {
      outcomes[i] = run_trial(p, s, cfg, n, g, up, down,
                              static_cast<std::uint64_t>(i));
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (long i = w; i < trials; i += workers) {
          outcomes[i] = run_trial(p, s, cfg, n, g, up, down,
                                  static_cast<std::uint64_t>(i));
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Reduce in trial order: results do not depend on the thread count.
  double mse_acc = 0.0;
  double range_acc = 0.0;
  double velocity_acc = 0.0;
  long degenerate = 0;
  for (const TrialOutcome& o : outcomes) {
    mse_acc += (o.mse_count > 0)
                   ? o.mse_sum / static_cast<double>(o.mse_count)
                   : 0.0;
    range_acc += o.range_sq_err;
    velocity_acc += o.velocity_sq_err;
    degenerate += o.degenerate;
  }
  const double inv_trials = 1.0 / static_cast<double>(trials);
  return {mse_acc * inv_trials,
          std::sqrt(range_acc * inv_trials),
          std::sqrt(velocity_acc * inv_trials),
          trials,
          f_up,
          f_down,
          degenerate};
}

}  // namespace owisac
