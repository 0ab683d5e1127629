#include "bfcs/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bfcs/errors.hpp"

namespace bfcs {

double tv(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("total variation of an empty vector");
  double acc = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) acc += std::abs(v[i] - v[i - 1]);
  return acc;
}

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

Vector hard_threshold(std::span<const double> v, std::size_t k) {
  const std::size_t n = v.size();
  if (k > n) {
    throw std::invalid_argument("sparsity K = " + std::to_string(k) + " exceeds length " +
                                std::to_string(n));
  }
  if (k == n) return Vector(v.begin(), v.end());
  Vector out(n, 0.0);
  if (k == 0) return out;

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto before = [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k - 1), idx.end(),
                   before);
  for (std::size_t t = 0; t < k; ++t) out[idx[t]] = v[idx[t]];
  return out;
}

Vector tv_prox(std::span<const double> v, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("tv_prox requires lambda >= 0");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
  Vector out(v.begin(), v.end());
  if (n <= 1 || lambda == 0.0) return out;

  // Condat, "A direct algorithm for 1D total variation denoising" (2013).
  // Tracks the lower/upper candidate segment values vmin/vmax and the running
  // dual residuals umin/umax; a segment is emitted when either bound breaks.
  const double twolambda = 2.0 * lambda;
  const double minlambda = -lambda;
  std::ptrdiff_t k = 0, k0 = 0, kplus = 0, kminus = 0;
  double umin = lambda, umax = minlambda;
  double vmin = v[0] - lambda, vmax = v[0] + lambda;

  for (;;) {
    while (k == n - 1) {
      if (umin < 0.0) {
        do out[k0++] = vmin; while (k0 <= kminus);
        k = kminus = k0;
        vmin = v[k];
        umin = lambda;
        umax = vmin + umin - vmax;
      } else if (umax > 0.0) {
        do out[k0++] = vmax; while (k0 <= kplus);
        k = kplus = k0;
        vmax = v[k];
        umax = minlambda;
        umin = vmax + umax - vmin;
      } else {
        vmin += umin / static_cast<double>(k - k0 + 1);
        do out[k0++] = vmin; while (k0 <= k);
        return out;
      }
    }
    if ((umin += v[k + 1] - vmin) < minlambda) {
      do out[k0++] = vmin; while (k0 <= kminus);
      k = kminus = kplus = k0;
      vmin = v[k];
      vmax = vmin + twolambda;
      umin = lambda;
      umax = minlambda;
    } else if ((umax += v[k + 1] - vmax) > lambda) {
      do out[k0++] = vmax; while (k0 <= kplus);
      k = kminus = kplus = k0;
      vmax = v[k];
      vmin = vmax - twolambda;
      umin = lambda;
      umax = minlambda;
    } else {
      ++k;
      if (umin >= lambda) {
        kminus = k;
        vmin += (umin - lambda) / static_cast<double>(kminus - k0 + 1);
        umin = lambda;
      }
      if (umax <= minlambda) {
        kplus = k;
        vmax += (umax + lambda) / static_cast<double>(kplus - k0 + 1);
        umax = minlambda;
      }
    }
  }
}

double tv_prox_lambda_max(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double partial = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    partial += v[i] - mean;
    best = std::max(best, std::abs(partial));
  }
  return best;
}

namespace {

// d TV(tv_prox(v, lambda)) / d lambda on the linear piece containing u.
// With the segmentation of u fixed, a segment of length L whose left and right
// jumps have signs a and b moves as mean + lambda (b - a) / L, so the slope is
// -sum (a - b)^2 / L.
double tv_prox_slope(std::span<const double> u) {
  const std::size_t n = u.size();
  double slope = 0.0;
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start + 1;
    while (stop < n && u[stop] == u[start]) ++stop;
    const double a = start == 0 ? 0.0 : (u[start] > u[start - 1] ? 1.0 : -1.0);
    const double b = stop == n ? 0.0 : (u[stop] > u[start] ? 1.0 : -1.0);
    slope -= (a - b) * (a - b) / static_cast<double>(stop - start);
    start = stop;
  }
  return slope;
}

}  // namespace

Vector project_tv_ball(std::span<const double> v, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("TV budget must be >= 0");
  if (tv(v) <= eps) return Vector(v.begin(), v.end());

  if (eps == 0.0) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    return Vector(v.size(), mean);
  }

  // TV(tv_prox(v, lambda)) is piecewise linear and nonincreasing in lambda.
  // Newton steps use the exact slope of the current linear piece; whenever the
  // step leaves the bracket an Illinois (modified regula falsi) point is used
  // instead, falling back to the midpoint.
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double lo = 0.0;
  double hi = tv_prox_lambda_max(v);
  double f_lo = tv(v) - eps;  // > 0
  double f_hi = -eps;         // the constant vector has TV 0
  int side = 0;
  const double slope0 = tv_prox_slope(v);
  double next = slope0 < 0.0 ? f_lo / -slope0 : 0.0;
  Vector feasible(v.size(), mean);
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * hi; ++iter) {
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double lambda = next;
    Vector u = tv_prox(v, lambda);
    const double f = tv(u) - eps;
    if (std::abs(f) <= kTvTolerance) return u;
    if (f > 0.0) {
      lo = lambda;
      f_lo = f;
      if (side == 1) f_hi *= 0.5;
      side = 1;
    } else {
      hi = lambda;
      f_hi = f;
      if (side == -1) f_lo *= 0.5;
      side = -1;
    }
    const double slope = tv_prox_slope(u);
    next = slope < 0.0 ? lambda - f / slope : 0.0;
    if (!(next > lo && next < hi)) next = lo + f_lo * (hi - lo) / (f_lo - f_hi);
    if (f <= 0.0) feasible = std::move(u);
  }
  return feasible;
}

Vector project_nonneg(std::span<const double> v) {
  Vector out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::max(x, 0.0); });
  return out;
}

Vector normalize(std::span<const double> v) {
  const double nrm = norm2(v);
  if (nrm == 0.0) throw DegenerateResult("cannot normalize the zero vector");
  Vector out(v.begin(), v.end());
  for (double& x : out) x /= nrm;
  return out;
}

}  // namespace bfcs
