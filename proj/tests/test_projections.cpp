#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bfcs/errors.hpp"
#include "bfcs/projections.hpp"
#include "bfcs/rng.hpp"
#include "oracles.hpp"

namespace bfcs {
namespace {

using testing::dist2;
using testing::tv_ref;

Vector random_vector(GaussianRng& rng, std::size_t n, double scale = 1.0) {
  Vector v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

double mean_of(const Vector& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void expect_vec_near(const Vector& a, const Vector& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "index " << i;
}

TEST(Tv, Examples) {
  EXPECT_DOUBLE_EQ(tv(Vector{1, 2, 3}), 2.0);
  EXPECT_DOUBLE_EQ(tv(Vector{4, 4, 4, 4}), 0.0);
  EXPECT_DOUBLE_EQ(tv(Vector{0, 5, 0}), 10.0);
  EXPECT_DOUBLE_EQ(tv(Vector{7}), 0.0);
  EXPECT_THROW(tv(Vector{}), std::invalid_argument);
}

TEST(HardThreshold, Examples) {
  EXPECT_EQ(hard_threshold(Vector{3, -1, 0.5, 2}, 2), (Vector{3, 0, 0, 2}));
  EXPECT_EQ(hard_threshold(Vector{1, -1, 0}, 1), (Vector{1, 0, 0}));
  EXPECT_EQ(hard_threshold(Vector{-1, 1, 0}, 1), (Vector{-1, 0, 0}));
  EXPECT_EQ(hard_threshold(Vector{0, 2, -2, 2}, 2), (Vector{0, 2, -2, 0}));
  EXPECT_EQ(hard_threshold(Vector{1, 2}, 2), (Vector{1, 2}));
  EXPECT_EQ(hard_threshold(Vector{1, 2}, 0), (Vector{0, 0}));
  EXPECT_THROW(hard_threshold(Vector{1, 2}, 3), std::invalid_argument);
}

TEST(HardThreshold, MatchesExhaustiveSupports) {
  GaussianRng rng(RngSeed{101});
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 1 + rep % 8;
    Vector v = random_vector(rng, n);
    if (rep % 5 == 0) v[0] = v[n - 1];  // repeated magnitudes
    for (std::size_t k = 0; k <= n; ++k) {
      const Vector h = hard_threshold(v, k);
      std::size_t nnz = 0;
      Vector r(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (h[i] != 0.0) {
          ++nnz;
          EXPECT_EQ(h[i], v[i]);
        }
        r[i] = v[i] - h[i];
      }
      EXPECT_LE(nnz, k);
      EXPECT_EQ(testing::canonical_norm(r), testing::best_k_term_residual(v, k)) << "n=" << n << " k=" << k;
    }
  }
}

TEST(HardThreshold, Idempotent) {
  GaussianRng rng(RngSeed{5});
  const Vector v = random_vector(rng, 50);
  const Vector once = hard_threshold(v, 10);
  EXPECT_EQ(hard_threshold(once, 10), once);
}

TEST(TvProx, ZeroLambdaIsIdentity) {
  GaussianRng rng(RngSeed{3});
  const Vector v = random_vector(rng, 17);
  EXPECT_EQ(tv_prox(v, 0.0), v);
}

TEST(TvProx, TwoPointClosedForm) {
  const Vector u = tv_prox(Vector{2, 0}, 0.5);
  expect_vec_near(u, Vector{1.5, 0.5}, 1e-12);

  // Grid search over the objective for confirmation.
  double best = 1e300, bu0 = 0, bu1 = 0;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      const double u0 = -0.5 + i * 0.0075, u1 = -0.5 + j * 0.0075;
      const double f = 0.5 * ((u0 - 2) * (u0 - 2) + u1 * u1) + 0.5 * std::abs(u1 - u0);
      if (f < best) {
        best = f;
        bu0 = u0;
        bu1 = u1;
      }
    }
  }
  EXPECT_NEAR(bu0, 1.5, 0.01);
  EXPECT_NEAR(bu1, 0.5, 0.01);
}

TEST(TvProx, LargeLambdaGivesMean) {
  GaussianRng rng(RngSeed{4});
  for (std::size_t n : {2u, 5u, 30u}) {
    const Vector v = random_vector(rng, n);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double lambda = (*hi - *lo) * static_cast<double>(n);
    const Vector u = tv_prox(v, lambda);
    expect_vec_near(u, Vector(n, mean_of(v)), 1e-12);
  }
  const Vector v{1, 5, -2, 0};
  expect_vec_near(tv_prox(v, tv_prox_lambda_max(v)), Vector(4, 1.0), 1e-12);
}

TEST(TvProx, MatchesBruteForce) {
  GaussianRng rng(RngSeed{8});
  for (int rep = 0; rep < 80; ++rep) {
    const std::size_t n = 2 + rep % 5;
    const Vector v = random_vector(rng, n);
    const double lambda = 0.02 + 0.6 * rng.uniform();
    const Vector u = tv_prox(v, lambda);
    const Vector ref = testing::tv_prox_bruteforce(v, lambda);
    EXPECT_LE(std::sqrt(dist2(u, ref)), 1e-9) << "rep " << rep;
  }
}

TEST(TvProx, MonotoneTvAndMeanPreserved) {
  GaussianRng rng(RngSeed{12});
  for (int rep = 0; rep < 20; ++rep) {
    const Vector v = random_vector(rng, 40);
    double previous = tv_ref(v);
    for (double lambda = 0.0; lambda < 3.0; lambda += 0.05) {
      const Vector u = tv_prox(v, lambda);
      const double t = tv_ref(u);
      EXPECT_LE(t, previous + 1e-12);
      previous = t;
      EXPECT_NEAR(mean_of(u), mean_of(v), 1e-12);
    }
  }
}

TEST(TvProx, NegativeLambdaRejected) {
  EXPECT_THROW(tv_prox(Vector{1, 2}, -0.1), std::invalid_argument);
}

TEST(ProjectTvBall, Examples) {
  const Vector feasible{1, 1.5, 1.2};
  EXPECT_EQ(project_tv_ball(feasible, 1.0), feasible);
  expect_vec_near(project_tv_ball(Vector{1, 2, 3}, 0.0), Vector{2, 2, 2}, 1e-15);
  expect_vec_near(project_tv_ball(Vector{2, 0}, 1.0), Vector{1.5, 0.5}, 1e-9);
  EXPECT_THROW(project_tv_ball(Vector{1, 2}, -1.0), std::invalid_argument);
}

TEST(ProjectTvBall, TwoPointGridSearch) {
  // Dense grid over feasible pairs with |u1 - u0| <= 1.
  double best = 1e300, bu0 = 0, bu1 = 0;
  for (int i = 0; i <= 600; ++i) {
    for (int j = 0; j <= 600; ++j) {
      const double u0 = -0.5 + i * 0.005, u1 = -0.5 + j * 0.005;
      if (std::abs(u1 - u0) > 1.0 + 1e-12) continue;
      const double d = (u0 - 2) * (u0 - 2) + u1 * u1;
      if (d < best) {
        best = d;
        bu0 = u0;
        bu1 = u1;
      }
    }
  }
  EXPECT_NEAR(bu0, 1.5, 0.005);
  EXPECT_NEAR(bu1, 0.5, 0.005);
}

TEST(ProjectTvBall, FeasibleWithinTolerance) {
  GaussianRng rng(RngSeed{21});
  for (int rep = 0; rep < 50; ++rep) {
    const Vector v = random_vector(rng, 200, 1.0 + rep);
    const double eps = tv_ref(v) * rng.uniform();
    const Vector u = project_tv_ball(v, eps);
    EXPECT_LE(tv_ref(u), eps + kTvTolerance);
  }
}

TEST(ProjectTvBall, MatchesBruteForceSmall) {
  GaussianRng rng(RngSeed{33});
  for (int rep = 0; rep < 120; ++rep) {
    const std::size_t n = 1 + rep % 6;
    const Vector v = random_vector(rng, n);
    const double eps = 1.5 * tv_ref(v) * rng.uniform();
    const Vector u = project_tv_ball(v, eps);
    const Vector ref = testing::project_tv_ball_bruteforce(v, eps);
    EXPECT_LE(std::sqrt(dist2(u, ref)), 1e-4) << "rep " << rep << " n " << n;
  }
}

TEST(ProjectTvBall, Idempotent) {
  GaussianRng rng(RngSeed{44});
  for (int rep = 0; rep < 20; ++rep) {
    const Vector v = random_vector(rng, 100);
    const double eps = 0.3 * tv_ref(v);
    const Vector once = project_tv_ball(v, eps);
    const Vector twice = project_tv_ball(once, eps);
    EXPECT_LE(std::sqrt(dist2(once, twice)), 1e-12);
  }
}

TEST(ProjectTvBall, Nonexpansive) {
  GaussianRng rng(RngSeed{55});
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rep % 40;
    const Vector a = random_vector(rng, n);
    const Vector b = random_vector(rng, n);
    const double eps = 0.5 * rng.uniform() * std::max(tv_ref(a), tv_ref(b));
    const double lhs = std::sqrt(dist2(project_tv_ball(a, eps), project_tv_ball(b, eps)));
    EXPECT_LE(lhs, std::sqrt(dist2(a, b)) + 1e-9);
  }
}

TEST(ProjectTvBall, ScalesWithInput) {
  GaussianRng rng(RngSeed{66});
  const Vector v = random_vector(rng, 60);
  const double eps = 0.2 * tv_ref(v);
  const Vector u = project_tv_ball(v, eps);
  Vector v3 = v;
  for (double& x : v3) x *= 3.0;
  const Vector u3 = project_tv_ball(v3, 3.0 * eps);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(u3[i], 3.0 * u[i], 1e-7);
}

TEST(ProjectNonneg, Examples) {
  EXPECT_EQ(project_nonneg(Vector{1, -2, 0}), (Vector{1, 0, 0}));
  EXPECT_EQ(project_nonneg(Vector{0.5, 2}), (Vector{0.5, 2}));
  EXPECT_EQ(project_nonneg(Vector{-1, -3}), (Vector{0, 0}));
  const Vector once = project_nonneg(Vector{3, -1, 2, -5});
  EXPECT_EQ(project_nonneg(once), once);
}

TEST(Normalize, Examples) {
  expect_vec_near(normalize(Vector{3, 4}), Vector{0.6, 0.8}, 1e-15);
  expect_vec_near(normalize(Vector{0, 1, 0}), Vector{0, 1, 0}, 0.0);
  EXPECT_THROW(normalize(Vector{0, 0}), DegenerateResult);
  GaussianRng rng(RngSeed{77});
  const Vector once = normalize(random_vector(rng, 30));
  const Vector twice = normalize(once);
  EXPECT_LE(std::sqrt(dist2(once, twice)), 1e-12);
}

}  // namespace
}  // namespace bfcs
