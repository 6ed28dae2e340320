#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "funcpd/kernels.hpp"
#include "test_util.hpp"

using funcpd::eval_kernel;
using funcpd::GridWeighting;
using funcpd::KernelKind;
using funcpd::KernelSpec;

TEST_CASE("kernel point values", "[kernels]") {
  KernelSpec sign{KernelKind::spatial_sign, 1.0, GridWeighting::euclidean};
  KernelSpec cusum{KernelKind::cusum, 1.0, GridWeighting::euclidean};
  KernelSpec clipped{KernelKind::clipped, 1.0, GridWeighting::euclidean};

  // 0/0 convention: exact tie maps to the zero vector
  std::vector<double> x{1, 2, 3};
  CHECK(eval_kernel(sign, x, x) == std::vector<double>{0, 0, 0});

  CHECK(eval_kernel(sign, std::vector<double>{2, 0},
                    std::vector<double>{0, 0}) == std::vector<double>{1, 0});

  CHECK(eval_kernel(cusum, std::vector<double>{5, 1},
                    std::vector<double>{2, 2}) == std::vector<double>{3, -1});

  // (x-y)/(1+||x-y||) with ||x-y|| = 2
  const auto c = eval_kernel(clipped, std::vector<double>{2, 0},
                             std::vector<double>{0, 0});
  CHECK(c[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(c[1] == 0.0);
}

TEST_CASE("kernel errors", "[kernels]") {
  KernelSpec sign{KernelKind::spatial_sign};
  std::vector<double> a{1, 2}, b{1, 2, 3};
  CHECK_THROWS_AS(eval_kernel(sign, a, b), std::invalid_argument);

  KernelSpec bad{KernelKind::clipped, 0.0, GridWeighting::euclidean};
  CHECK_THROWS_AS(eval_kernel(bad, a, a), std::invalid_argument);
  KernelSpec neg{KernelKind::clipped, -1.0, GridWeighting::euclidean};
  CHECK_THROWS_AS(eval_kernel(neg, a, a), std::invalid_argument);
}

TEST_CASE("kernel properties on random curves", "[kernels][property]") {
  std::mt19937_64 rng(77123);
  std::normal_distribution<double> gauss(0.0, 2.0);
  std::uniform_real_distribution<double> unif(0.1, 5.0);

  for (int rep = 0; rep < 150; ++rep) {
    const std::size_t d = 1 + rng() % 12;
    std::vector<double> x(d), y(d), mu(d);
    for (auto& v : x) v = gauss(rng);
    for (auto& v : y) v = gauss(rng);
    for (auto& v : mu) v = gauss(rng);
    const auto weighting =
        rep % 2 ? GridWeighting::mean : GridWeighting::euclidean;

    for (auto spec : testutil::all_kernels(weighting)) {
      const auto hxy = eval_kernel(spec, x, y);
      const auto hyx = eval_kernel(spec, y, x);
      for (std::size_t c = 0; c < d; ++c)
        CHECK(hxy[c] == -hyx[c]);  // antisymmetry, bitwise up to sign

      CHECK(eval_kernel(spec, x, x) == std::vector<double>(d, 0.0));

      // translation invariance
      std::vector<double> xs(d), ys(d);
      for (std::size_t c = 0; c < d; ++c) {
        xs[c] = x[c] + mu[c];
        ys[c] = y[c] + mu[c];
      }
      const auto ht = eval_kernel(spec, xs, ys);
      for (std::size_t c = 0; c < d; ++c)
        CHECK(ht[c] == Catch::Approx(hxy[c]).margin(1e-12));
    }

    // spatial sign: unit norm away from ties, scale invariance
    KernelSpec sign{KernelKind::spatial_sign, 1.0, weighting};
    const auto s = eval_kernel(sign, x, y);
    const double sn = funcpd::norm(s, weighting);
    CHECK((sn == 0.0 || (sn > 1.0 - 1e-10 && sn < 1.0 + 1e-10)));

    const double scale = unif(rng);
    std::vector<double> cx(d), cy(d);
    for (std::size_t c = 0; c < d; ++c) {
      cx[c] = scale * x[c];
      cy[c] = scale * y[c];
    }
    const auto ss = eval_kernel(sign, cx, cy);
    for (std::size_t c = 0; c < d; ++c)
      CHECK(ss[c] == Catch::Approx(s[c]).margin(1e-12));

    // cusum scales linearly
    KernelSpec cusum{KernelKind::cusum, 1.0, weighting};
    const auto h0 = eval_kernel(cusum, x, y);
    const auto hs = eval_kernel(cusum, cx, cy);
    for (std::size_t c = 0; c < d; ++c)
      CHECK(hs[c] == Catch::Approx(scale * h0[c]).epsilon(1e-12));
  }
}
