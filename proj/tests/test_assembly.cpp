#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "crfem/assembly.hpp"
#include "crfem/problem.hpp"
#include "crfem/quadrature.hpp"
#include "test_support.hpp"

namespace crfem {
namespace {

Eigen::MatrixXd to_eigen(const CsrMatrix& A) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.rows, A.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) D(i, A.col_idx[k]) = A.values[k];
  return D;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

template <typename Integrand>
double integrate_cells(const Triangulation& tri, Integrand&& f, int degree = 14) {
  const auto& rule = quadrature_rule(degree);
  double s = 0.0;
  for (std::size_t c = 0; c < tri.num_cells(); ++c) {
    const auto& g = tri.geometry(c);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) s += g.area * rule.weights[q] * f(c, map_to_cell(g, rule.points[q]));
  }
  return s;
}

double bilinear(const CsrMatrix& M, const std::vector<double>& w, const std::vector<double>& v) {
  return dot(w, spmv(M, v));
}

TEST(DofMap, LayoutAndBoundary) {
  const Triangulation tri = generate_graded_mesh(2, grading::Uniform{});
  const DofMap dofs(tri);
  EXPECT_EQ(dofs.num_velocity(), 2 * tri.num_facets());
  EXPECT_EQ(dofs.total(), 2 * tri.num_facets() + tri.num_cells());
  EXPECT_EQ(dofs.velocity(3, 1), tri.num_facets() + 3);
  EXPECT_EQ(dofs.pressure(2), dofs.num_velocity() + 2);
  EXPECT_EQ(dofs.velocity_owner(dofs.velocity(5, 1)), (std::array<int, 2>{5, 1}));
  EXPECT_EQ(dofs.boundary_velocity().size(), 2 * tri.boundary_facets().size());
  for (int f : tri.boundary_facets()) {
    EXPECT_TRUE(dofs.is_boundary_velocity(dofs.velocity(f, 0)));
    EXPECT_TRUE(dofs.is_boundary_velocity(dofs.velocity(f, 1)));
  }
}

TEST(Laplacian, ReferenceTriangleEntries) {
  const Triangulation ref = testing::reference_triangle();
  const DofMap dofs(ref);
  const CsrMatrix A = assemble_laplacian(ref, dofs);
  // The facet opposite the right-angle vertex carries gradient (2,2).
  const auto& g = ref.geometry(0);
  const auto& facets = ref.cell_facets(0);
  for (int i = 0; i < 3; ++i) {
    const Vec2 gi = cr_grad(g, i);
    for (int c = 0; c < 2; ++c)
      EXPECT_NEAR(A.at(dofs.velocity(facets[i], c), dofs.velocity(facets[i], c)), 0.5 * dot(gi, gi), 1e-14);
  }
  const int right_angle = g.vertices[0] == Point2{0, 0} ? 0 : (g.vertices[1] == Point2{0, 0} ? 1 : 2);
  EXPECT_NEAR(A.at(dofs.velocity(facets[right_angle], 0), dofs.velocity(facets[right_angle], 0)), 4.0, 1e-14);
}

TEST(Laplacian, SymmetricWithConstantNullSpace) {
  const Triangulation tri = testing::perturbed_mesh(4, 5);
  const DofMap dofs(tri);
  const CsrMatrix A = assemble_laplacian(tri, dofs);
  const Eigen::MatrixXd D = to_eigen(A);
  EXPECT_LT((D - D.transpose()).cwiseAbs().maxCoeff(), 1e-14 * D.cwiseAbs().maxCoeff());
  const auto Ac = spmv(A, std::vector<double>(dofs.num_velocity(), 1.0));
  for (double v : Ac) EXPECT_NEAR(v, 0.0, 1e-12);
  // Energy equals the broken H1 seminorm.
  std::mt19937 rng(3);
  const CrFunction v = testing::random_cr(2, tri.num_facets(), rng);
  const double broken = integrate_cells(
      tri,
      [&](std::size_t c, Point2) {
        const Mat2 J = cr_jacobian(tri, v, c);
        return J[0][0] * J[0][0] + J[0][1] * J[0][1] + J[1][0] * J[1][0] + J[1][1] * J[1][1];
      },
      1);
  EXPECT_NEAR(bilinear(A, v.dofs, v.dofs), broken, 1e-12 * broken);
}

TEST(Divergence, ReferenceTriangleAndConstants) {
  const Triangulation ref = testing::reference_triangle();
  const DofMap dofs(ref);
  const CsrMatrix B = assemble_divergence(ref, dofs);
  const CrFunction v = interpolate_cr([](Point2 x) { return Vec2{x.x1, 0.0}; }, ref);
  EXPECT_NEAR(spmv(B, v.dofs)[0], -0.5, 1e-15);

  const Triangulation tri = testing::perturbed_mesh(4, 6);
  const DofMap d2(tri);
  const CsrMatrix B2 = assemble_divergence(tri, d2);
  for (double r : spmv(B2, std::vector<double>(d2.num_velocity(), 1.0))) EXPECT_NEAR(r, 0.0, 1e-14);
  std::mt19937 rng(4);
  const CrFunction w = testing::random_cr(2, tri.num_facets(), rng);
  const P0Function div = broken_divergence(tri, w);
  const auto Bw = spmv(B2, w.dofs);
  for (std::size_t c = 0; c < tri.num_cells(); ++c) EXPECT_NEAR(Bw[c], -tri.geometry(c).area * div.values[c], 1e-13);
}

TEST(Convection, VanishesForIrrotationalState) {
  const Triangulation tri = testing::perturbed_mesh(4, 7);
  const DofMap dofs(tri);
  for (auto field : {VectorField([](Point2) { return Vec2{1.0, -2.0}; }),
                     VectorField([](Point2 x) { return Vec2{x.x1, -x.x2}; })}) {
    const CsrMatrix N = assemble_convection(tri, dofs, interpolate_cr(field, tri));
    EXPECT_LT(testing::max_abs(N), 1e-12);
  }
}

TEST(Convection, SkewSymmetricForRandomStates) {
  const Triangulation tri = testing::perturbed_mesh(5, 8);
  const DofMap dofs(tri);
  std::mt19937 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const CsrMatrix N = assemble_convection(tri, dofs, testing::random_cr(2, tri.num_facets(), rng));
    const CsrMatrix S = add(N, transpose(N));
    EXPECT_LE(testing::max_abs(S), 1e-12 * testing::max_abs(N));
  }
}

TEST(Convection, MatchesRotationalFormOnRandomCells) {
  // For a CR state u the cellwise identity (v.grad)u.w - (w.grad)u.v
  // = curl(u) (w2 v1 - w1 v2) holds with v, w the lifted test functions.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const Point2 a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)}, c{coord(rng), coord(rng)};
    const double orient = (b.x1 - a.x1) * (c.x2 - a.x2) - (b.x2 - a.x2) * (c.x1 - a.x1);
    if (std::abs(orient) < 0.05) continue;
    const Triangulation tri = orient > 0 ? Triangulation({a, b, c}, {{0, 1, 2}}) : Triangulation({a, c, b}, {{0, 1, 2}});
    const DofMap dofs(tri);
    auto smooth_u = [](Point2 x) { return Vec2{std::sin(x.x1 + 2 * x.x2), x.x1 * x.x1 - std::cos(x.x2)}; };
    auto smooth_v = [](Point2 x) { return Vec2{std::exp(0.3 * x.x1), x.x2 * x.x1}; };
    auto smooth_w = [](Point2 x) { return Vec2{x.x2 * x.x2 + 1.0, std::sin(3 * x.x1)}; };
    const CrFunction u = interpolate_cr(smooth_u, tri);
    const CrFunction v = interpolate_cr(smooth_v, tri);
    const CrFunction w = interpolate_cr(smooth_w, tri);
    const double assembled = bilinear(assemble_convection(tri, dofs, u), w.dofs, v.dofs);

    const Rt0Function lv = lift_cr_to_rt0(v, tri), lw = lift_cr_to_rt0(w, tri);
    const Mat2 G = cr_jacobian(tri, u, 0);
    double scale = 0.0;
    const double identity = integrate_cells(tri, [&](std::size_t cell, Point2 x) {
      const Vec2 vx = rt0_value(tri, lv, cell, x), wx = rt0_value(tri, lw, cell, x);
      const Vec2 Gv{G[0][0] * vx.x1 + G[0][1] * vx.x2, G[1][0] * vx.x1 + G[1][1] * vx.x2};
      const Vec2 Gw{G[0][0] * wx.x1 + G[0][1] * wx.x2, G[1][0] * wx.x1 + G[1][1] * wx.x2};
      scale += std::abs(dot(Gv, wx)) + std::abs(dot(Gw, vx));
      return dot(Gv, wx) - dot(Gw, vx);
    });
    EXPECT_NEAR(assembled, identity, 1e-11 * std::max(1.0, scale)) << "trial " << trial;
  }
}

TEST(Convection, RejectsMismatchedState) {
  const Triangulation tri = testing::perturbed_mesh(2, 1);
  const DofMap dofs(tri);
  EXPECT_THROW(assemble_convection(tri, dofs, CrFunction(1, tri.num_facets())), std::invalid_argument);
}

TEST(Load, ZeroAndPolynomialFields) {
  const Triangulation tri = testing::perturbed_mesh(4, 9);
  const DofMap dofs(tri);
  for (double v : assemble_load_lifted(tri, dofs, [](Point2) { return Vec2{}; })) EXPECT_EQ(v, 0.0);

  std::mt19937 rng(12);
  for (auto f : {VectorField([](Point2) { return Vec2{1.0, -0.5}; }),
                 VectorField([](Point2 x) { return Vec2{x.x1 * x.x1 * x.x2, std::pow(x.x1 - x.x2, 5)}; })}) {
    const auto load = assemble_load_lifted(tri, dofs, f);
    for (int trial = 0; trial < 5; ++trial) {
      const CrFunction v = testing::random_cr(2, tri.num_facets(), rng);
      const Rt0Function lv = lift_cr_to_rt0(v, tri);
      const double oracle = integrate_cells(tri, [&](std::size_t c, Point2 x) { return dot(f(x), rt0_value(tri, lv, c, x)); });
      EXPECT_NEAR(dot(load, v.dofs), oracle, 1e-12 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST(Load, NodalRuleOverloadMatchesDegreeOverloadForLinearFields) {
  const Triangulation tri = testing::perturbed_mesh(3, 13);
  const DofMap dofs(tri);
  auto f = [](Point2 x) { return Vec2{2.0 * x.x1 - 1.0, x.x2}; };
  const auto exact = assemble_load_lifted(tri, dofs, f, 6);
  const auto nodal = assemble_load_lifted(tri, dofs, f, vertex_midpoint_centroid_rule());
  for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_NEAR(nodal[i], exact[i], 1e-14);
}

TEST(Load, GradientForcingIsInvisibleToDiscretelyDivergenceFreeFields) {
  const Triangulation tri = testing::perturbed_mesh(4, 14);
  const DofMap dofs(tri);
  const ExactProblem pb = example2();
  const auto load = assemble_load_lifted(tri, dofs, pb.f);
  const Eigen::MatrixXd B = to_eigen(assemble_divergence(tri, dofs));

  std::vector<int> free;
  for (std::size_t i = 0; i < dofs.num_velocity(); ++i)
    if (!dofs.is_boundary_velocity(i)) free.push_back(static_cast<int>(i));
  Eigen::MatrixXd Bf(B.rows(), free.size());
  for (std::size_t k = 0; k < free.size(); ++k) Bf.col(k) = B.col(free[k]);
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Bf * Bf.transpose());

  std::mt19937 rng(15);
  double load_norm = 0.0;
  for (int i : free) load_norm += load[i] * load[i];
  load_norm = std::sqrt(load_norm);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = testing::random_vector(free.size(), rng);
    const Eigen::VectorXd v0 = to_eigen(r);
    const Eigen::VectorXd v = v0 - Bf.transpose() * cod.solve(Bf * v0);
    ASSERT_LT((Bf * v).cwiseAbs().maxCoeff(), 1e-12);
    double s = 0.0;
    for (std::size_t k = 0; k < free.size(); ++k) s += load[free[k]] * v[k];
    EXPECT_NEAR(s, 0.0, 1e-9 * load_norm * v.norm());
  }
}

/// Small Stokes saddle system with Dirichlet data on every boundary facet.
SaddleSystem stokes_system(const Triangulation& tri, const DofMap& dofs) {
  SaddleSystem s;
  s.nu = 0.7;
  s.A = assemble_laplacian(tri, dofs);
  s.B = assemble_divergence(tri, dofs);
  s.N = assemble_convection(tri, dofs, interpolate_cr([](Point2 x) { return Vec2{x.x2 * x.x2, x.x1}; }, tri));
  s.rhs_u = assemble_load_lifted(tri, dofs, [](Point2 x) { return Vec2{std::cos(x.x2), x.x1}; });
  s.rhs_p.assign(dofs.num_pressure(), 0.0);
  return s;
}

TEST(Dirichlet, EliminationMatchesPenaltyOracle) {
  const Triangulation tri = generate_graded_mesh(2, grading::Uniform{});
  const DofMap dofs(tri);
  const SaddleSystem s = stokes_system(tri, dofs);
  const CrFunction g = interpolate_cr([](Point2 x) { return Vec2{x.x1 * (1 - x.x1), 0.3}; }, tri);

  ReducedSystem red = apply_dirichlet(s, dofs, g);
  pin_unknown(red, red.pressure_offset());
  const Eigen::VectorXd x = to_eigen(red.K).fullPivLu().solve(to_eigen(red.rhs));
  const std::vector<double> xs(x.data(), x.data() + x.size());
  const auto [u, p] = expand_solution(red, xs, tri.num_facets());

  // Penalty oracle on the full saddle system.
  const std::size_t nv = dofs.num_velocity(), np = dofs.num_pressure();
  const double penalty = 1e14;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nv + np, nv + np);
  const Eigen::MatrixXd M = s.nu * to_eigen(s.A) + to_eigen(s.N);
  const Eigen::MatrixXd B = to_eigen(s.B);
  K.topLeftCorner(nv, nv) = M;
  K.topRightCorner(nv, np) = B.transpose();
  K.bottomLeftCorner(np, nv) = B;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv + np);
  rhs.head(nv) = to_eigen(s.rhs_u);
  for (std::size_t i : dofs.boundary_velocity()) {
    K(i, i) += penalty;
    rhs[i] += penalty * g.dofs[i];
  }
  K.row(nv).setZero();
  K.col(nv).setZero();
  K(nv, nv) = 1.0;
  rhs[nv] = 0.0;
  const Eigen::VectorXd y = K.partialPivLu().solve(rhs);
  for (std::size_t i = 0; i < nv; ++i) EXPECT_NEAR(u.dofs[i], y[i], 1e-6) << i;
  for (std::size_t c = 0; c < np; ++c) EXPECT_NEAR(p[c], y[nv + c], 1e-6) << c;
  for (std::size_t i : dofs.boundary_velocity()) EXPECT_EQ(u.dofs[i], g.dofs[i]);
}

TEST(Dirichlet, RejectsMissingBoundaryValues) {
  const Triangulation tri = testing::perturbed_mesh(2, 17);
  const DofMap dofs(tri);
  const SaddleSystem s = stokes_system(tri, dofs);
  CrFunction g(2, tri.num_facets());
  g.dofs[dofs.boundary_velocity().front()] = std::nan("");
  EXPECT_THROW(apply_dirichlet(s, dofs, g), std::invalid_argument);
  EXPECT_THROW(apply_dirichlet(s, dofs, CrFunction(2, tri.num_facets() + 1)), std::invalid_argument);
}

TEST(PinUnknown, ReplacesRowAndColumn) {
  const Triangulation tri = testing::perturbed_mesh(2, 18);
  const DofMap dofs(tri);
  ReducedSystem red = apply_dirichlet(stokes_system(tri, dofs), dofs, CrFunction(2, tri.num_facets()));
  const std::size_t k = red.pressure_offset();
  pin_unknown(red, k);
  const Eigen::MatrixXd K = to_eigen(red.K);
  for (Eigen::Index j = 0; j < K.cols(); ++j) {
    EXPECT_EQ(K(k, j), j == static_cast<Eigen::Index>(k) ? 1.0 : 0.0);
    EXPECT_EQ(K(j, k), j == static_cast<Eigen::Index>(k) ? 1.0 : 0.0);
  }
  EXPECT_EQ(red.rhs[k], 0.0);
  EXPECT_THROW(pin_unknown(red, red.K.rows), std::out_of_range);
}

TEST(Assembly, Deterministic) {
  const Triangulation tri = testing::perturbed_mesh(4, 19);
  const DofMap dofs(tri);
  const CrFunction u = interpolate_cr(example1().u, tri);
  const CsrMatrix N1 = assemble_convection(tri, dofs, u), N2 = assemble_convection(tri, dofs, u);
  EXPECT_EQ(N1.values, N2.values);
  EXPECT_EQ(assemble_load_lifted(tri, dofs, example1().f), assemble_load_lifted(tri, dofs, example1().f));
}

}  // namespace
}  // namespace crfem
