#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "owisac/capacity.hpp"
#include "owisac/envelope.hpp"

using namespace owisac;

namespace {

// Brute-force oracle for the largest variance: grid search over two-point
// laws {x1 w.p. p, B w.p. 1-p} subject to E[1/X] <= sigma_h, with one zoom
// pass around the coarse argmax. Never consults the closed form.
struct GridMax {
  double variance;
  double x1;
  double p;
};

GridMax two_point_grid_max(const EnvelopeConstraints& c, double x_lo,
                           double x_hi, double p_lo, double p_hi, int n) {
  GridMax best{-1.0, 0.0, 0.0};
  const double b = c.b_peak;
  for (int i = 0; i < n; ++i) {
    const double x1 = x_lo + (x_hi - x_lo) * i / (n - 1);
    if (x1 < c.a_min || x1 > b) continue;
    for (int j = 0; j < n; ++j) {
      const double p = p_lo + (p_hi - p_lo) * j / (n - 1);
      if (p < 0.0 || p > 1.0) continue;
      const double harmonic = p / x1 + (1.0 - p) / b;
      if (harmonic > c.sigma_h) continue;
      const double mean = p * x1 + (1.0 - p) * b;
      const double var =
          p * x1 * x1 + (1.0 - p) * b * b - mean * mean;
      if (var > best.variance) best = {var, x1, p};
    }
  }
  return best;
}

GridMax two_point_oracle(const EnvelopeConstraints& c) {
  const int n = 400;
  const GridMax coarse =
      two_point_grid_max(c, c.a_min, c.b_peak, 0.0, 1.0, n);
  const double dx = (c.b_peak - c.a_min) / (n - 1);
  const double dp = 1.0 / (n - 1);
  return two_point_grid_max(c, coarse.x1 - 2.0 * dx, coarse.x1 + 2.0 * dx,
                            coarse.p - 2.0 * dp, coarse.p + 2.0 * dp, n);
}

}  // namespace

TEST_CASE("max_variance closed-form cases") {
  SUBCASE("both endpoints") {
    const MaxVarianceResult v = max_variance({0.1, 1.0, 6.0});
    CHECK(v.case_id == VarianceCase::BothEndpoints);
    CHECK(v.variance == doctest::Approx(0.2025).epsilon(1e-12));
    CHECK(v.mean == doctest::Approx(0.55).epsilon(1e-12));
    CHECK(v.harmonic == doctest::Approx(5.5).epsilon(1e-12));
  }
  SUBCASE("interior lower point") {
    const MaxVarianceResult v = max_variance({0.1, 1.0, 2.0});
    CHECK(v.case_id == VarianceCase::InteriorPoint);
    CHECK(v.variance == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(v.mean == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(v.harmonic == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("harmonic constraint active at the floor") {
    const MaxVarianceResult v = max_variance({0.1, 1.0, 5.2});
    CHECK(v.case_id == VarianceCase::HarmonicActive);
    CHECK(v.variance == doctest::Approx(0.2016).epsilon(1e-12));
    CHECK(v.mean == doctest::Approx(0.58).epsilon(1e-12));
  }
  SUBCASE("infeasible") {
    CHECK_THROWS_AS(max_variance({0.1, 1.0, 0.8}), InfeasibleConstraint);
  }
  SUBCASE("branch boundary is continuous") {
    // sigma = 1/(2A): InteriorPoint by convention, both formulas coincide.
    const double s = 1.0 / 0.2;
    const MaxVarianceResult v = max_variance({0.1, 1.0, s});
    CHECK(v.case_id == VarianceCase::InteriorPoint);
    const double other = (s - 1.0) * (10.0 - s) * 0.01;
    CHECK(v.variance == doctest::Approx(other).epsilon(1e-12));
  }
}

TEST_CASE("max_variance matches the brute-force two-point oracle") {
  oracle::Rng rng(0xBEEF5u);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.02, 0.5);
    const double b = a + rng.uniform(0.05, 1.0 - a);
    const double sigma = rng.uniform(1.0 / b * 1.02, 1.3 / a);
    const EnvelopeConstraints c(a, b, sigma);
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(sigma);
    const MaxVarianceResult v = max_variance(c);
    const GridMax grid = two_point_oracle(c);
    // Closed form dominates every feasible grid law and meets the refined
    // grid maximum within relative 1e-3.
    CHECK(v.variance >= grid.variance - 1e-12);
    CHECK(v.variance == doctest::Approx(grid.variance).epsilon(1e-3));
    CHECK(v.harmonic <= sigma + 1e-12);
    CHECK(v.mean >= a - 1e-12);
    CHECK(v.mean <= b + 1e-12);
    CHECK(v.variance <= 0.25 * (b - a) * (b - a) + 1e-12);
  }
}

TEST_CASE("two-point law reconstructed from the moments") {
  oracle::Rng rng(99u);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.05, 0.4);
    const double b = a + rng.uniform(0.1, 1.0 - a);
    const double sigma = rng.uniform(1.0 / b * 1.05, 1.2 / a);
    const EnvelopeConstraints c(a, b, sigma);
    const MaxVarianceResult v = max_variance(c);
    // Invert (mean, harmonic) for the {x1, B} support.
    const double r = (v.mean - b) / (v.harmonic - 1.0 / b);
    const double x1 = -r / b;
    const double p = (v.mean - b) / (x1 - b);
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(sigma);
    CHECK(x1 >= a - 1e-9);
    CHECK(x1 <= b + 1e-9);
    CHECK(p >= -1e-12);
    CHECK(p <= 1.0 + 1e-12);
    const double mean = p * x1 + (1.0 - p) * b;
    const double harmonic = p / x1 + (1.0 - p) / b;
    const double var = p * x1 * x1 + (1.0 - p) * b * b - mean * mean;
    CHECK(harmonic <= sigma + 1e-9);
    CHECK(var == doctest::Approx(v.variance).epsilon(1e-10));
  }
}

TEST_CASE("low-SNR bound and asymptote") {
  const MaxVarianceResult v125{0.125, 0.75, 2.0,
                               VarianceCase::InteriorPoint};
  CHECK(low_snr_upper_bound(v125, 0.5) ==
        doctest::Approx(0.5 * std::log(1.5)).epsilon(1e-14));
  const MaxVarianceResult zero{0.0, 0.5, 2.0, VarianceCase::InteriorPoint};
  CHECK(low_snr_upper_bound(zero, 0.5) == 0.0);

  const MaxVarianceResult v2025{0.2025, 0.55, 5.5,
                                VarianceCase::BothEndpoints};
  CHECK(low_snr_asymptote(v2025, 4.5) == doctest::Approx(0.005).epsilon(1e-14));
  // Doubling the noise std quarters the asymptote.
  CHECK(low_snr_asymptote(v2025, 9.0) ==
        doctest::Approx(0.00125).epsilon(1e-14));
  // ln(1+x) <= x.
  CHECK(low_snr_upper_bound(v2025, 4.5) <= low_snr_asymptote(v2025, 4.5));

  // Deep low-SNR Taylor agreement: bound/asymptote within 1% at
  // sigma = 100(B-A).
  const double sigma = 100.0 * 0.9;
  CHECK(low_snr_upper_bound(v2025, sigma) / low_snr_asymptote(v2025, sigma) ==
        doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("high-SNR hyper-parameter recipe") {
  const EnvelopeConstraints c(0.1, 1.0, 2.0);
  const HighSnrHyperParams hp = high_snr_hyperparams(c, -0.2346619717, 0.01);
  CHECK(hp.sigma_star == doctest::Approx(2.0 / 1.1).epsilon(1e-12));
  CHECK(hp.delta == doctest::Approx(0.01 * std::log(6.0)).epsilon(1e-12));
  CHECK(hp.delta == doctest::Approx(0.017918).epsilon(1e-4));
  CHECK(hp.eta_tilde < 0.0);
  CHECK(hp.eta_tilde >= -0.2346619717);

  // eta* = 0 propagates.
  CHECK(high_snr_hyperparams(c, 0.0, 0.01).eta_tilde == 0.0);

  // Vanishing noise: eta_tilde -> eta*.
  const double eta_star = -0.2346619717;
  CHECK(high_snr_hyperparams(c, eta_star, 1e-6).eta_tilde ==
        doctest::Approx(eta_star).epsilon(1e-9));
}

TEST_CASE("high-SNR upper bound sandwich and convergence") {
  for (double sigma_h : {1.156, 2.406}) {
    CAPTURE(sigma_h);
    const EnvelopeConstraints c(0.1, 1.0, sigma_h);
    const MaxEntropyDistribution d = solve_max_entropy(c);
    double prev_gap = 1e100;
    for (double db : {15.0, 20.0, 25.0, 30.0, 40.0, 50.0, 60.0}) {
      const double sig = noise_sigma_from_snr_db(c, db);
      const HighSnrHyperParams hp = high_snr_hyperparams(c, d.eta_star, sig);
      const double ub = high_snr_upper_bound(c, hp, sig);
      const double lb = capacity_lower_bound(d, sig);
      const double gap = ub - high_snr_asymptote(c, d.eta_star, sig);
      CAPTURE(db);
      CHECK(ub >= lb - 1e-9);         // sandwich ordering
      CHECK(std::isfinite(ub));
      CHECK(gap > 0.0);               // the bound approaches from above
      if (db >= 25.0) {
        CHECK(gap < prev_gap);        // monotone convergence on this grid
        prev_gap = gap;
      }
    }
    // By 60 dB the recipe bound has met the asymptote to better than 0.05.
    const double sig60 = noise_sigma_from_snr_db(c, 60.0);
    const HighSnrHyperParams hp60 = high_snr_hyperparams(c, d.eta_star, sig60);
    CHECK(high_snr_upper_bound(c, hp60, sig60) -
              high_snr_asymptote(c, d.eta_star, sig60) <
          0.05);
  }
}

TEST_CASE("high-SNR upper bound rejects an invalid roll-off") {
  const EnvelopeConstraints c(0.1, 1.0, 2.0);
  const HighSnrHyperParams bad{2.0 / 1.1, 0.11, -0.1};
  CHECK_THROWS_AS(high_snr_upper_bound(c, bad, 0.01), DomainError);
}

TEST_CASE("high-SNR asymptote and its gap") {
  const EnvelopeConstraints c(0.1, 1.0, 3.0);
  // Inactive constraint: gap is the conventional peak-limited -ln(2*pi*e)/2.
  const double gap0 = high_snr_asymptotic_gap(c, 0.0);
  CHECK(gap0 == doctest::Approx(-0.5 * std::log(2.0 * M_PI * M_E))
                    .epsilon(1e-15));
  CHECK(high_snr_asymptote(c, 0.0, 0.9) ==
        doctest::Approx(gap0).epsilon(1e-12));  // ln((B-A)/sigma) = 0 there

  // Tighter sensing constraint pushes the (negative) gap further down.
  const EnvelopeConstraints strict(0.1, 1.0, 2.0);
  const MaxEntropyDistribution d = solve_max_entropy(strict);
  CHECK(high_snr_asymptotic_gap(strict, d.eta_star) < gap0);
}

TEST_CASE("scale invariance in (kappa*A, kappa*B, sigma/kappa)") {
  const EnvelopeConstraints base(0.1, 1.0, 2.0);
  const MaxEntropyDistribution d = solve_max_entropy(base, 1e-12);
  for (double kappa : {0.5, 2.0}) {
    if (kappa * base.b_peak > 1.0) continue;  // keep peak within [0,1]
    const EnvelopeConstraints scaled(kappa * 0.1, kappa * 1.0, 2.0 / kappa);
    const MaxEntropyDistribution ds = solve_max_entropy(scaled, 1e-12);
    CAPTURE(kappa);
    CHECK(ds.eta_star == doctest::Approx(kappa * d.eta_star).epsilon(1e-8));
    CHECK(high_snr_asymptotic_gap(scaled, ds.eta_star) ==
          doctest::Approx(high_snr_asymptotic_gap(base, d.eta_star))
              .epsilon(1e-9));
  }
  // kappa = 2 with a smaller base so the peak stays valid.
  const EnvelopeConstraints half(0.05, 0.5, 4.0);
  const MaxEntropyDistribution dh = solve_max_entropy(half, 1e-12);
  const EnvelopeConstraints full(0.1, 1.0, 2.0);
  const MaxEntropyDistribution df = solve_max_entropy(full, 1e-12);
  CHECK(df.eta_star == doctest::Approx(2.0 * dh.eta_star).epsilon(1e-8));
  CHECK(high_snr_asymptotic_gap(full, df.eta_star) ==
        doctest::Approx(high_snr_asymptotic_gap(half, dh.eta_star))
            .epsilon(1e-9));
}

TEST_CASE("normalized sensing priority maps") {
  const EnvelopeConstraints cmax(0.1, 1.0, std::log(10.0) / 0.9);
  CHECK(nsp_from_sigma(cmax) == doctest::Approx(0.0).epsilon(1e-12));
  const EnvelopeConstraints cmin(0.1, 1.0, 1.0);
  CHECK(nsp_from_sigma(cmin) == doctest::Approx(1.0).epsilon(1e-12));
  const EnvelopeConstraints paper(0.1, 1.0, 1.156);
  CHECK(nsp_from_sigma(paper) == doctest::Approx(0.90).epsilon(1e-2));

  // Mutual inverses on a grid.
  for (double chi = 0.0; chi <= 1.0; chi += 0.1) {
    const double sigma = sigma_from_nsp(0.1, 1.0, chi);
    CHECK(nsp_from_sigma({0.1, 1.0, sigma}) ==
          doctest::Approx(chi).epsilon(1e-12));
  }
  CHECK_THROWS_AS(nsp_from_sigma({0.1, 1.0, 5.0}), DomainError);
  CHECK_THROWS_AS(nsp_from_sigma({0.1, 1.0, 0.95}), DomainError);
  CHECK_THROWS_AS(sigma_from_nsp(0.1, 1.0, 1.5), DomainError);
  CHECK_THROWS_AS(sigma_from_nsp(0.1, 1.0, -0.1), DomainError);
}

TEST_CASE("capacity curve assembly") {
  const EnvelopeConstraints c(0.1, 1.0, 2.406);
  std::vector<double> grid;
  for (double db = 0.0; db <= 40.0; db += 5.0) grid.push_back(db);
  const PamConstellation two_pam = design_low_snr(c);
  const PamConstellation high16 = design_high_snr(c, 16);
  const CapacityCurve curve =
      build_capacity_curve(c, grid, {{"pam2_maxvar", two_pam},
                                     {"pam16_maxent", high16}});

  REQUIRE(curve.lower.size() == grid.size());
  // Monotone nondecreasing lower bound along the SNR axis.
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(curve.lower[i] >= curve.lower[i - 1]);
  }
  // Sandwich at every point.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(curve.lower[i] <=
          std::min(curve.upper_low[i], curve.upper_high[i]) + 1e-9);
  }
  // 2-PAM max-variance overlaps the low-SNR bound at 0 dB (within 2%).
  CHECK(curve.achievable.at("pam2_maxvar")[0] >=
        0.98 * curve.upper_low[0]);
  // Lower bound has met the high-SNR asymptote by 40 dB.
  CHECK(std::fabs(curve.lower.back() - curve.asymptote_high.back()) < 0.02);
}

TEST_CASE("lower bound meets the asymptote at 40 dB for both settings") {
  for (double sigma_h : {1.156, 2.406}) {
    CAPTURE(sigma_h);
    const EnvelopeConstraints c(0.1, 1.0, sigma_h);
    const MaxEntropyDistribution d = solve_max_entropy(c);
    const double sig = noise_sigma_from_snr_db(c, 40.0);
    CHECK(std::fabs(capacity_lower_bound(d, sig) -
                    high_snr_asymptote(c, d.eta_star, sig)) < 0.02);
  }
}

TEST_CASE("achievable rates track the asymptote before saturating") {
  // 16-PAM at 35 dB and 64-PAM at 40 dB sit within 0.05 nats of the
  // asymptote for the milder constraint; past those points the discrete
  // entropy ceiling takes over.
  const EnvelopeConstraints c(0.1, 1.0, 2.406);
  const MaxEntropyDistribution d = solve_max_entropy(c);
  const PamConstellation p16 = design_high_snr(c, 16);
  const double sig35 = noise_sigma_from_snr_db(c, 35.0);
  CHECK(std::fabs(mutual_information_discrete(p16, sig35) -
                  high_snr_asymptote(c, d.eta_star, sig35)) < 0.05);
  const PamConstellation p64 = design_high_snr(c, 64);
  const double sig40 = noise_sigma_from_snr_db(c, 40.0);
  CHECK(std::fabs(mutual_information_discrete(p64, sig40) -
                  high_snr_asymptote(c, d.eta_star, sig40)) < 0.05);
}
