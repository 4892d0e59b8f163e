#include "owisac/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace owisac {

namespace {

// Kronrod-15 abscissae on [0, 1] (symmetric) and weights; the odd-indexed
// nodes are the embedded Gauss-7 points.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
  double kronrod;
  double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a,
                   double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double result_g = 0.0;
  double result_k = 0.0;
  for (int j = 0; j < 8; ++j) {
    const double dx = half * kXgk[j];
    const double fsum =
        (j == 7) ? f(center) : f(center - dx) + f(center + dx);
    result_k += kWgk[j] * fsum;
    if (j % 2 == 1) result_g += kWg[j / 2] * fsum;
  }
  result_g *= half;
  result_k *= half;
  return {result_k, std::fabs(result_k - result_g)};
}

double integrate_panel(const std::function<double(double)>& f, double a,
                       double b, double tol, int depth) {
  const PanelEstimate est = gk15(f, a, b);
  if (est.error <= tol || depth <= 0) return est.kronrod;
  const double mid = 0.5 * (a + b);
  return integrate_panel(f, a, mid, 0.5 * tol, depth - 1) +
         integrate_panel(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth) {
  if (!(b >= a)) throw DomainError("integrate_adaptive: requires a <= b");
  if (a == b) return 0.0;
  return integrate_panel(f, a, b, abs_tol, max_depth);
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, std::span<const double> breakpoints,
                          double abs_tol, int max_depth) {
  if (!(b >= a)) throw DomainError("integrate_adaptive: requires a <= b");
  if (a == b) return 0.0;
  std::vector<double> edges{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  const double panel_tol = abs_tol / static_cast<double>(edges.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += integrate_panel(f, edges[i], edges[i + 1], panel_tol, max_depth);
  }
  return total;
}

}  // namespace owisac
