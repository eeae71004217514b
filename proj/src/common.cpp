#include "mdimlab/common.hpp"

#include <cmath>
#include <cstdio>

namespace mdimlab {

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("least_squares: mismatched or empty input");
  LinearFit fit;
  const size_t n = x.size();
  if (n == 1) {
    fit.intercept = y[0];
    return fit;
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) {
    fit.intercept = my;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (size_t i = 0; i < n; ++i) {
    double r = std::fabs(y[i] - (fit.intercept + fit.slope * x[i]));
    if (r > fit.max_residual) fit.max_residual = r;
  }
  return fit;
}

double shannon_entropy(std::span<const double> masses) {
  // Kahan-compensated sum; block entropies are differenced downstream, so
  // accumulation error matters at the 1e-12 scale.
  double h = 0, comp = 0;
  for (double p : masses) {
    if (p < -1e-15) throw std::invalid_argument("shannon_entropy: negative mass");
    if (p > 0) {
      double term = -p * std::log(p) - comp;
      double t = h + term;
      comp = (t - h) - term;
      h = t;
    }
  }
  return h;
}

double binary_entropy(double t) {
  if (t < 0 || t > 1) throw std::invalid_argument("binary_entropy: t outside [0,1]");
  double h = 0;
  if (t > 0) h -= t * std::log(t);
  if (t < 1) h -= (1 - t) * std::log(1 - t);
  return h;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double CounterRng::uniform(uint64_t index) const {
  uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (0x5851f42d4c957f2dULL + stream));
  h = splitmix64(h ^ index);
  return double(h >> 11) * 0x1.0p-53;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

}  // namespace mdimlab
