#include <memory>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hmbem/bem_laplace.hpp"
#include "hmbem/errors.hpp"
#include "hmbem/hmatrix.hpp"
#include "support/test_support.hpp"

using namespace hmbem;
using bem::QuadratureConfig;

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

std::shared_ptr<const SurfaceMesh> cube(unsigned level) {
  return std::make_shared<const SurfaceMesh>(make_cube_mesh(level));
}

}  // namespace

TEST_CASE("kernel values") {
  CHECK(bem::kernel({0, 0, 0}, {1, 0, 0}) == doctest::Approx(0.0795774715459477));
  CHECK(bem::kernel({0, 0, 0}, {0, 2, 0}) == doctest::Approx(1.0 / (8.0 * std::numbers::pi)));
  CHECK(bem::kernel({0, 0, 0}, {1, 1, 1}) == doctest::Approx(1.0 / (kFourPi * std::sqrt(3.0))));
  CHECK_THROWS_AS(bem::kernel({1, 2, 3}, {1, 2, 3}), DomainError);
}

TEST_CASE("parallel unit squares approach 1/(4 pi d)") {
  const Panel p{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  const Panel q{{0, 0, 100}, {1, 0, 0}, {0, 1, 0}};
  const double entry = bem::panel_pair_entry(p, q, {});
  CHECK(std::abs(entry * kFourPi * 100.0 - 1.0) < 1e-3);
  const Panel q5{{0, 0, 5}, {1, 0, 0}, {0, 1, 0}};
  const double oracle = testing::semi_analytic_pair(testing::to_rect(p), testing::to_rect(q5)) / kFourPi;
  CHECK(bem::panel_pair_entry(p, q5, {}) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("self entry on a unit square") {
  const Panel p{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  const double expect = (4.0 * std::asinh(1.0) - 4.0 / 3.0 * (std::sqrt(2.0) - 1.0)) / kFourPi;
  CHECK(bem::panel_pair_entry(p, p, {}) == doctest::Approx(expect).epsilon(1e-8));
  CHECK(expect == doctest::Approx(0.236601).epsilon(1e-5));
}

TEST_CASE("Galerkin matrix is exactly symmetric with positive diagonal") {
  const auto mesh = cube(2);
  bem::LaplaceSlpEvaluator ev(mesh);
  CHECK(ev.get_matrix_entry(3, 7) == ev.get_matrix_entry(7, 3));
  const auto A = assemble_dense_oracle(ev);
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(A.diagonal().minCoeff() > 0.0);
  // All diagonal entries belong to congruent squares.
  CHECK(A.diagonal().maxCoeff() - A.diagonal().minCoeff() <= 1e-12 * A.diagonal().maxCoeff());
}

TEST_CASE("Galerkin matrix is positive definite at N <= 384") {
  for (unsigned level : {1u, 2u, 3u}) {
    bem::LaplaceSlpEvaluator ev(cube(level));
    const auto A = assemble_dense_oracle(ev);
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    CHECK(llt.info() == Eigen::Success);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("property: quadrature self-convergence at level <= 2") {
  for (unsigned level : {0u, 1u, 2u}) {
    const auto mesh = cube(level);
    bem::LaplaceSlpEvaluator base(mesh, QuadratureConfig{4, 6, 2.0});
    bem::LaplaceSlpEvaluator fine(mesh, QuadratureConfig{6, 8, 2.0});
    const auto A = assemble_dense_oracle(base);
    const auto B = assemble_dense_oracle(fine);
    const double worst = ((A - B).array() / B.array().abs()).abs().maxCoeff();
    CAPTURE(level);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("entries on adjacent cube faces match the oracle") {
  const auto mesh = cube(1);
  bem::LaplaceSlpEvaluator ev(mesh);
  for (std::size_t i = 0; i < mesh->size(); i += 5) {
    for (std::size_t j = 0; j < mesh->size(); j += 3) {
      const double oracle = testing::semi_analytic_pair(testing::to_rect(mesh->panel(i)),
                                                        testing::to_rect(mesh->panel(j))) / kFourPi;
      CAPTURE(i);
      CAPTURE(j);
      CHECK(std::abs(ev.get_matrix_entry(i, j) - oracle) <= 1e-7 * oracle);
    }
  }
}

TEST_CASE("right-hand side") {
  const auto mesh = make_cube_mesh(1);
  const auto ones = bem::assemble_rhs(mesh, [](const Point3&) { return 1.0; });
  for (std::size_t i = 0; i < mesh.size(); ++i) CHECK(ones[static_cast<Eigen::Index>(i)] == doctest::Approx(mesh.areas[i]));
  CHECK(bem::assemble_rhs(mesh, [](const Point3&) { return 0.0; }).isZero());

  const auto m0 = make_cube_mesh(0);
  const auto f = bem::assemble_rhs(m0, bem::harmonic_data);
  bool found = false;
  for (std::size_t i = 0; i < m0.size(); ++i) {
    if (m0.centers[i].z == 0.0) {
      CHECK(f[static_cast<Eigen::Index>(i)] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("single-layer potential") {
  const auto mesh = make_cube_mesh(1);
  const auto pts = make_eval_points(3);
  const std::vector<double> zero(mesh.size(), 0.0);
  CHECK(bem::eval_potential(mesh, zero, pts).isZero());

  std::vector<double> alpha(mesh.size());
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& a : alpha) a = u(rng);
  std::vector<double> twice(alpha);
  for (auto& a : twice) a *= 2.0;
  const auto v1 = bem::eval_potential(mesh, alpha, pts);
  const auto v2 = bem::eval_potential(mesh, twice, pts);
  CHECK((v2 - 2.0 * v1).cwiseAbs().maxCoeff() <= 1e-15 * v1.cwiseAbs().maxCoeff());

  // Hand-built one-panel mesh: unit square, point 50 above its center.
  SurfaceMesh one;
  one.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  one.elements = {QuadElement{{0, 1, 2, 3}, 0}};
  one.centers = {{0.5, 0.5, 0}};
  one.areas = {1.0};
  const std::vector<double> a1{1.0};
  const std::vector<Point3> far{{0.5, 0.5, 50.0}};
  const double v = bem::eval_potential(one, a1, far)[0];
  CHECK(std::abs(v * kFourPi * 50.0 - 1.0) < 1e-3);

  const std::vector<Point3> on_surface{{0.5, 0.5, 0.0}};
  CHECK_THROWS_AS(bem::eval_potential(mesh, alpha, on_surface), DomainError);
}

TEST_CASE("worst-case error") {
  const auto mesh = make_cube_mesh(1);
  const auto pts = make_eval_points(5);
  const std::vector<double> zero(mesh.size(), 0.0);
  // Brute-force maximum of |f| over the 125 lattice points.
  double expect = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      for (int k = 0; k < 5; ++k) {
        const double x = 0.25 + 0.125 * i, y = 0.25 + 0.125 * j, z = 0.25 + 0.125 * k;
        expect = std::max(expect, std::abs(4 * x * x - 3 * y * y - z * z));
      }
    }
  }
  CHECK(bem::worst_case_error(mesh, zero, pts, bem::harmonic_data) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(expect == doctest::Approx(2.0));

  std::vector<double> alpha(mesh.size(), 0.3);
  const auto pot = bem::eval_potential(mesh, alpha, pts);
  std::size_t idx = 0;
  const auto same = [&](const Point3& p) {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (pts[k] == p) idx = k;
    }
    return pot[static_cast<Eigen::Index>(idx)];
  };
  CHECK(bem::worst_case_error(mesh, alpha, pts, same) == 0.0);
}

TEST_CASE("exact solution is harmonic") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.2, 0.8);
  const double h = 1e-3;
  for (int trial = 0; trial < 50; ++trial) {
    const Point3 p{u(rng), u(rng), u(rng)};
    double lap = -6.0 * bem::harmonic_data(p);
    for (std::size_t a = 0; a < 3; ++a) {
      Point3 plus = p, minus = p;
      plus[a] += h;
      minus[a] -= h;
      lap += bem::harmonic_data(plus) + bem::harmonic_data(minus);
    }
    CHECK(std::abs(lap / (h * h)) < 1e-6);
  }
}
