#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>

#include "test_support.hpp"
#include "wkam/minplus.hpp"

namespace wkam {
namespace {

// Dyadic entries keep every sum exact, so "exact" properties hold bitwise.
double dyadic(std::mt19937_64& rng, int range) {
  return static_cast<double>(std::uniform_int_distribution<int>(-range, range)(rng)) / 1024.0;
}

MinPlusMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  MinPlusMatrix m(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = dyadic(rng, 4096);
  return m;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = dyadic(rng, 4096);
  return v;
}

// Minimum cycle mean by enumerating all simple cycles (small n only).
double brute_min_cycle_mean(const MinPlusMatrix& k) {
  const std::size_t n = k.size();
  double best = 1e300;
  std::vector<std::size_t> path;
  std::vector<bool> used(n, false);
  std::function<void(std::size_t, double)> dfs = [&](std::size_t v, double w) {
    const std::size_t s = path.front();
    if (k(v, s) < kMinPlusZero) best = std::min(best, (w + k(v, s)) / static_cast<double>(path.size()));
    for (std::size_t u = s + 1; u < n; ++u) {
      if (used[u] || !(k(v, u) < kMinPlusZero)) continue;
      used[u] = true;
      path.push_back(u);
      dfs(u, w + k(v, u));
      path.pop_back();
      used[u] = false;
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    path = {s};
    used.assign(n, false);
    used[s] = true;
    dfs(s, 0.0);
  }
  return best;
}

TEST(MinPlusApply, IdentityAndBruteForce) {
  const auto id = MinPlusMatrix::identity(3);
  const std::vector<double> u{0.5, -1.25, 3.0};
  EXPECT_EQ(min_plus_apply(id, u), u);
  MinPlusMatrix k(3, std::vector<double>{0.0, 2.0, 7.0, 1.0, 0.5, -1.0, 4.0, 3.0, 0.0});
  const auto out = min_plus_apply(k, u);
  for (std::size_t i = 0; i < 3; ++i) {
    double best = 1e300;
    for (std::size_t j = 0; j < 3; ++j) best = std::min(best, u[j] + k(j, i));
    EXPECT_EQ(out[i], best);
  }
  const auto up = max_plus_apply(k, u);
  for (std::size_t i = 0; i < 3; ++i) {
    double best = -1e300;
    for (std::size_t j = 0; j < 3; ++j) best = std::max(best, u[j] - k(i, j));
    EXPECT_EQ(up[i], best);
  }
}

TEST(MinPlusApply, LowestIndexTieBreak) {
  MinPlusMatrix k(3, 0.0);
  std::vector<std::size_t> arg;
  min_plus_apply(k, std::vector<double>{1.0, 1.0, 1.0}, {}, &arg);
  EXPECT_EQ(arg, (std::vector<std::size_t>{0, 0, 0}));
}

TEST(MinPlusProperties, MonotoneEquivariantNonExpansiveOnRandomCases) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const auto k = random_matrix(rng, n);
    const auto u = random_vector(rng, n);
    auto v = u;
    for (auto& x : v) x += std::abs(dyadic(rng, 512));
    const double a = dyadic(rng, 2048);
    auto ua = u;
    for (auto& x : ua) x += a;
    const auto tu = min_plus_apply(k, u);
    const auto tv = min_plus_apply(k, v);
    const auto tua = min_plus_apply(k, ua);
    const auto w = random_vector(rng, n);
    const auto tw = min_plus_apply(k, w);
    double duw = 0.0, dtuw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_LE(tu[i], tv[i]);
      ASSERT_EQ(tua[i], tu[i] + a);
      duw = std::max(duw, std::abs(u[i] - w[i]));
      dtuw = std::max(dtuw, std::abs(tu[i] - tw[i]));
    }
    ASSERT_LE(dtuw, duw);
  }
}

TEST(MinPlusProduct, BruteForceAndAssociativity) {
  MinPlusMatrix a(2, std::vector<double>{1.0, 4.0, 2.0, 0.5});
  MinPlusMatrix b(2, std::vector<double>{0.0, 3.0, -1.0, 2.0});
  const auto p = min_plus_product(a, b);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(p(i, j), std::min(a(i, 0) + b(0, j), a(i, 1) + b(1, j)));
  EXPECT_EQ(min_plus_product(a, MinPlusMatrix::identity(2)), a);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_matrix(rng, 7);
    const auto y = random_matrix(rng, 7);
    const auto z = random_matrix(rng, 7);
    EXPECT_EQ(min_plus_product(min_plus_product(x, y), z), min_plus_product(x, min_plus_product(y, z)));
  }
}

TEST(MinPlusProduct, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(5);
  const auto x = random_matrix(rng, 64);
  const auto y = random_matrix(rng, 64);
  EXPECT_EQ(min_plus_product(x, y, {1}), min_plus_product(x, y, {7}));
}

TEST(Karp, SmallCases) {
  EXPECT_EQ(min_mean_cycle(MinPlusMatrix(1, 0.0)), 0.0);
  EXPECT_EQ(min_mean_cycle(MinPlusMatrix(2, std::vector<double>{1.0, 5.0, 0.0, 3.0})), 1.0);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto k = random_matrix(rng, 6);
    EXPECT_NEAR(min_mean_cycle(k), brute_min_cycle_mean(k), 1e-12);
  }
}

TEST(Karp, FreeKernelIsZero) {
  const auto k = assemble_kernel(fixtures::free_hamiltonian(), TorusGrid(1, 64), {1.0, 2, 4});
  EXPECT_NEAR(karp_min_mean_cycle(k), 0.0, 1e-12);
}

TEST(AssembleKernel, FreeHamiltonianClosedForms) {
  const auto k = assemble_kernel(fixtures::free_hamiltonian(), TorusGrid(1, 8), {1.0, 2, 1});
  for (std::size_t a = 0; a < 8; ++a) EXPECT_EQ(k(a, a), 0.0);
  // a = 0, b = 1/2: windings give displacement 1/2 either way.
  EXPECT_NEAR(k(0, 4), 0.125, 1e-12);
  // Translation symmetry.
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) EXPECT_NEAR(k(a, b), k((a + 3) % 8, (b + 3) % 8), 1e-12);
}

TEST(AssembleKernel, PendulumRestingCost) {
  const double t = 0.5;
  const auto k = assemble_kernel(fixtures::pendulum(), TorusGrid(1, 64), {t, 2, 1});
  for (std::size_t a = 0; a < 64; a += 7) {
    const double q = a / 64.0;
    EXPECT_NEAR(k(a, a), -t * std::cos(testing::kTwoPi * q), 1e-9);
  }
}

TEST(AssembleKernel, ResolutionAndValidation) {
  try {
    assemble_kernel(fixtures::free_hamiltonian(), TorusGrid(1, 16), {0.1, 2, 8});
    FAIL() << "expected RESOLUTION";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResolution);
  }
  EXPECT_THROW(assemble_kernel(fixtures::free_hamiltonian(), TorusGrid(1, 16), {-1.0, 2, 1}), Error);
  EXPECT_THROW(assemble_kernel(fixtures::free_hamiltonian(), TorusGrid(1, 16), {1.0, 2, 0}), Error);
}

TEST(AssembleKernel, DeterministicAcrossThreads) {
  const auto a = assemble_kernel(fixtures::pendulum(), TorusGrid(1, 64), {0.5, 2, 8}, {1});
  const auto b = assemble_kernel(fixtures::pendulum(), TorusGrid(1, 64), {0.5, 2, 8}, {5});
  EXPECT_EQ(a, b);
}

TEST(MinPlusMatmul, FreeKernelDoubling) {
  const TorusGrid g(1, 128);
  const auto spec = fixtures::free_hamiltonian();
  const auto kt = assemble_kernel(spec, g, {1.0, 2, 8});
  const auto doubled = minplus_matmul(kt, kt);
  EXPECT_EQ(doubled.horizon(), 2.0);
  const auto k2t = assemble_kernel(spec, g, {2.0, 2, 8});
  const auto k2t_fine = assemble_kernel(spec, g, {2.0, 2, 16});
  double gap = 0.0, semigroup = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      gap = std::max(gap, std::abs(doubled(i, j) - k2t(i, j)));
      semigroup = std::max(semigroup, std::abs(doubled(i, j) - k2t_fine(i, j)));
      // Closed form: (displacement)^2 / (2 * 2t).
      const double d = std::abs(wrap_centered((double(j) - double(i)) / 128.0));
      ASSERT_NEAR(doubled(i, j), d * d / 4.0, 2.0 / 128);
    }
  EXPECT_LE(gap, 2.0 / 128);
  EXPECT_LE(semigroup, 1e-3);
  EXPECT_THROW(ActionKernel(g, 1.0, 2, 1, MinPlusMatrix(g.size(), kMinPlusZero)), Error);
}

TEST(MinPlusMatvec, SignConventions) {
  const auto& k = testing::pendulum_kernel();
  GridField u(k.grid(), 0.0);
  const auto minus = minplus_matvec(k, u, LaxOleinik::kNegative);
  const auto plus = minplus_matvec(k, u, LaxOleinik::kPositive);
  for (std::size_t i = 0; i < k.grid().size(); i += 17) {
    double mn = 1e300, mx = -1e300;
    for (std::size_t j = 0; j < k.grid().size(); ++j) {
      mn = std::min(mn, k(j, i));
      mx = std::max(mx, -k(i, j));
    }
    EXPECT_EQ(minus[i], mn);
    EXPECT_EQ(plus[i], mx);
  }
}

TEST(KarpVsPowerIteration, RandomKernels) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    MinPlusMatrix k(8, 0.0);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) k(i, j) = ud(rng);
    // Cyclicity divides lcm(1..8) = 840 once past the transient.
    std::vector<double> v(8, 0.0);
    constexpr int kBurn = 4000, kPeriod = 840;
    double shift = 0.0;
    for (int it = 1; it <= kBurn + kPeriod; ++it) {
      v = min_plus_apply(k, v);
      const double base = v[0];
      for (auto& x : v) x -= base;
      if (it > kBurn) shift += base;
    }
    EXPECT_NEAR(min_mean_cycle(k), shift / kPeriod, 1e-9);
  }
}

TEST(KernelCache, RoundTripIsBitExact) {
  const auto k = assemble_kernel(fixtures::pendulum(), TorusGrid(1, 32), {0.5, 2, 8});
  const auto path = std::filesystem::temp_directory_path() / "wkam_cache_roundtrip.bin";
  write_kernel_cache(path, k);
  EXPECT_EQ(read_kernel_cache(path), k);
  {
    std::ofstream f(path, std::ios::binary | std::ios::app);
    f.put('x');
  }
  EXPECT_THROW(read_kernel_cache(path), Error);
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << "WKAM2";
  }
  EXPECT_THROW(read_kernel_cache(path), Error);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace wkam
