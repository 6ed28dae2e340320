#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "funcpd/core.hpp"
#include "test_util.hpp"

using funcpd::FunctionalSample;
using funcpd::GridWeighting;
using funcpd::inner;
using funcpd::norm;

TEST_CASE("inner product, both weightings", "[core]") {
  std::vector<double> e1{1, 0}, e2{0, 1};
  CHECK(inner(e1, e2, GridWeighting::euclidean) == 0.0);

  std::vector<double> u{1, 2}, v{3, 4};
  CHECK(inner(u, v, GridWeighting::euclidean) == 11.0);

  std::vector<double> a{2, 2}, b{1, 1};
  CHECK(inner(a, b, GridWeighting::mean) == Catch::Approx(2.0));  // (1/2)(2+2)

  std::vector<double> w{1, 2, 3};
  CHECK_THROWS_AS(inner(u, w), std::invalid_argument);
  CHECK_THROWS_WITH(inner(u, w), Catch::Matchers::ContainsSubstring("2") &&
                                     Catch::Matchers::ContainsSubstring("3"));
}

TEST_CASE("norm", "[core]") {
  std::vector<double> z{0, 0, 0};
  CHECK(norm(z) == 0.0);

  std::vector<double> p{3, 4};
  CHECK(norm(p, GridWeighting::euclidean) == 5.0);
  CHECK(norm(p, GridWeighting::mean) ==
        Catch::Approx(3.535533905932737622).epsilon(1e-14));  // 5/sqrt(2)
}

TEST_CASE("inner/norm algebra on random inputs", "[core][property]") {
  std::mt19937_64 rng(20240501);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 1 + rng() % 16;
    std::vector<double> u(d), v(d);
    for (auto& x : u) x = gauss(rng);
    for (auto& x : v) x = gauss(rng);
    for (auto w : {GridWeighting::euclidean, GridWeighting::mean}) {
      CHECK(inner(u, v, w) == inner(v, u, w));  // bitwise symmetric
      const double nu = norm(u, w);
      CHECK(nu * nu == Catch::Approx(inner(u, u, w)).epsilon(1e-12));
      CHECK(std::fabs(inner(u, v, w)) <=
            nu * norm(v, w) * (1.0 + 1e-12));  // Cauchy-Schwarz
    }
  }
}

TEST_CASE("sample validation", "[core]") {
  CHECK_THROWS_AS(FunctionalSample(funcpd::CurveMatrix(1, 3)),
                  std::invalid_argument);

  funcpd::CurveMatrix bad(2, 2);
  bad.at(1, 1) = std::nan("");
  CHECK_THROWS_AS(FunctionalSample(std::move(bad)), std::invalid_argument);

  CHECK_THROWS_AS(FunctionalSample::from_rows({{1.0, 2.0}, {3.0}}),
                  std::invalid_argument);

  const auto s = FunctionalSample::from_rows({{1, 2}, {3, 4}, {5, 6}});
  CHECK(s.size() == 3);
  CHECK(s.dim() == 2);
  CHECK(s.row(2)[1] == 6.0);
}
