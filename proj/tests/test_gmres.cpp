#include <doctest.h>

#include <cmath>
#include <random>

#include "kktdd/gmres.hpp"
#include "kktdd/linalg.hpp"
#include "oracles.hpp"

using namespace kktdd;

namespace {

LinearMap dense_map(const oracle::Mat& m) {
  return [m](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m[i].size(); ++j) acc += m[i][j] * x[j];
      y[i] = acc;
    }
  };
}

oracle::Mat random_dd_matrix(int n, double diag_boost, std::mt19937& rng) {
  oracle::Mat m = oracle::zeros(n, n);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = dist(rng);
    m[i][i] += diag_boost;
  }
  return m;
}

}  // namespace

TEST_CASE("identity operator converges in one iteration") {
  std::mt19937 rng(1);
  auto b = oracle::random_vector(8, rng);
  oracle::Mat eye = oracle::zeros(8, 8);
  for (int i = 0; i < 8; ++i) eye[i][i] = 1.0;
  auto res = gmres_solve(dense_map(eye), {}, b, GmresParams{});
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(oracle::rel_err(res.solution, b) <= 1e-12);
}

TEST_CASE("2x2 diagonal map needs at most two iterations") {
  oracle::Mat d = {{1.0, 0.0}, {0.0, 2.0}};
  GmresParams params;
  params.tol = 1e-12;
  auto res = gmres_solve(dense_map(d), {}, std::vector<double>{1.0, 1.0}, params);
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
  CHECK(res.solution[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(res.solution[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("random SPD system matches the dense solve") {
  std::mt19937 rng(33);
  const int n = 20;
  oracle::Mat m = oracle::zeros(n, n);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      m[i][j] = dist(rng);
      m[j][i] = m[i][j];
    }
  for (int i = 0; i < n; ++i) m[i][i] += n;  // SPD by dominance
  auto b = oracle::random_vector(n, rng);
  GmresParams params;
  params.tol = 1e-12;
  auto res = gmres_solve(dense_map(m), {}, b, params);
  CHECK(res.converged);
  CHECK(oracle::rel_err(res.solution, oracle::gauss_solve(m, b)) <= 1e-8);
}

TEST_CASE("iteration count is invariant to rescaling the rhs") {
  std::mt19937 rng(9);
  oracle::Mat m = random_dd_matrix(15, 8.0, rng);
  auto b = oracle::random_vector(15, rng);
  auto res1 = gmres_solve(dense_map(m), {}, b, GmresParams{});
  auto b2 = b;
  for (double& v : b2) v *= 1234.5;
  auto res2 = gmres_solve(dense_map(m), {}, b2, GmresParams{});
  CHECK(res1.iterations == res2.iterations);
}

TEST_CASE("residual history is nonincreasing and tracks the true residual") {
  std::mt19937 rng(14);
  oracle::Mat m = random_dd_matrix(30, 6.0, rng);
  auto b = oracle::random_vector(30, rng);
  auto res = gmres_solve(dense_map(m), {}, b, GmresParams{});
  REQUIRE(res.converged);
  for (std::size_t k = 1; k < res.residual_history.size(); ++k) {
    CHECK(res.residual_history[k] <= res.residual_history[k - 1] * (1.0 + 1e-12) + 1e-15);
  }
  const double est = res.residual_history.back();
  CHECK(res.true_final_relres <= 10.0 * est + 1e-15);
  CHECK(est <= 10.0 * res.true_final_relres + 1e-15);
  CHECK(static_cast<int>(res.residual_history.size()) == res.iterations);
}

TEST_CASE("zero rhs returns the zero solution, converged") {
  oracle::Mat eye = oracle::zeros(4, 4);
  for (int i = 0; i < 4; ++i) eye[i][i] = 1.0;
  auto res = gmres_solve(dense_map(eye), {}, std::vector<double>(4, 0.0), GmresParams{});
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  for (double v : res.solution) CHECK(v == 0.0);
}

TEST_CASE("restarted cycles still converge") {
  std::mt19937 rng(25);
  oracle::Mat m = random_dd_matrix(24, 10.0, rng);
  auto b = oracle::random_vector(24, rng);
  GmresParams params;
  params.restart = 5;
  params.max_iters = 200;
  auto res = gmres_solve(dense_map(m), {}, b, params);
  CHECK(res.converged);
  CHECK(res.true_final_relres <= 10.0 * params.tol);
}

TEST_CASE("right preconditioning reaches the same solution") {
  std::mt19937 rng(42);
  oracle::Mat m = random_dd_matrix(18, 12.0, rng);
  auto b = oracle::random_vector(18, rng);
  std::vector<double> diag(18);
  for (int i = 0; i < 18; ++i) diag[i] = m[i][i];
  LinearMap prec = [diag](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < diag.size(); ++i) y[i] = x[i] / diag[i];
  };
  GmresParams params;
  params.tol = 1e-10;
  auto res = gmres_solve(dense_map(m), prec, b, params);
  CHECK(res.converged);
  CHECK(oracle::rel_err(res.solution, oracle::gauss_solve(m, b)) <= 1e-8);
  CHECK(res.true_final_relres <= 1e-9);
}

TEST_CASE("non-finite Krylov vectors raise a divergence error naming the iteration") {
  LinearMap bad = [](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / 0.0;
  };
  std::vector<double> b = {1.0, 1.0};
  CHECK_THROWS_AS(gmres_solve(bad, {}, b, GmresParams{}), GmresDivergenceError);
  try {
    gmres_solve(bad, {}, b, GmresParams{});
  } catch (const GmresDivergenceError& e) {
    CHECK(e.iteration == 1);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("non-converged runs still report the least-squares iterate") {
  std::mt19937 rng(50);
  oracle::Mat m = random_dd_matrix(40, 4.0, rng);
  auto b = oracle::random_vector(40, rng);
  GmresParams params;
  params.tol = 1e-14;
  params.max_iters = 5;
  auto res = gmres_solve(dense_map(m), {}, b, params);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 5);
  CHECK(res.true_final_relres < 1.0);
  CHECK(res.true_final_relres == doctest::Approx(res.residual_history.back()).epsilon(1e-6));
}
