#include "sparsewave/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace spw {

static GaussRule compute_gauss(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  // Newton on P_n with cos initial guesses; converges in a handful of steps.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    double w = 2.0 / ((1 - x * x) * pp * pp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0;
  return r;
}

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
  return it->second;
}

GaussRule gauss_on(int n, double a, double b) {
  const GaussRule& base = gauss_legendre(n);
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.x[i] = mid + half * base.x[i];
    r.w[i] = half * base.w[i];
  }
  return r;
}

GaussRule gauss_segments(int n, const std::vector<double>& breaks) {
  if (breaks.size() < 2) throw std::invalid_argument("gauss_segments: need >= 2 breakpoints");
  GaussRule out;
  for (size_t s = 0; s + 1 < breaks.size(); ++s) {
    if (!(breaks[s + 1] > breaks[s]))
      throw std::invalid_argument("gauss_segments: breakpoints must increase");
    GaussRule seg = gauss_on(n, breaks[s], breaks[s + 1]);
    out.x.insert(out.x.end(), seg.x.begin(), seg.x.end());
    out.w.insert(out.w.end(), seg.w.begin(), seg.w.end());
  }
  return out;
}

}  // namespace spw
