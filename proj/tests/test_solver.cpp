#include <gtest/gtest.h>

#include <cmath>

#include "crfem/analysis.hpp"
#include "crfem/assembly.hpp"
#include "crfem/solver.hpp"
#include "reference_tables.hpp"
#include "test_support.hpp"

namespace crfem {
namespace {

Triangulation mesh1(int n, double eps = 1.0) { return generate_graded_mesh(n, grading::PowerLaw{eps}); }

double max_dof_difference(const CrFunction& a, const CrFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dofs.size(); ++i) m = std::max(m, std::abs(a.dofs[i] - b.dofs[i]));
  return m;
}

TEST(NormalizePressure, Examples) {
  const Triangulation square = testing::two_cell_square();
  const P0Function constant = normalize_pressure(P0Function{{2.5, 2.5}}, square);
  for (double v : constant.values) EXPECT_NEAR(v, 0.0, 1e-15);
  const P0Function balanced = normalize_pressure(P0Function{{1.0, -1.0}}, square);
  EXPECT_EQ(balanced.values, (std::vector<double>{1.0, -1.0}));

  // Cells of area 1/4 and 3/4.
  const Triangulation split({{0, 0}, {1, 0}, {0.75, 0.5}, {0, 2}}, {{0, 1, 2}, {0, 2, 3}});
  ASSERT_NEAR(split.geometry(0).area, 0.25, 1e-15);
  const P0Function p = normalize_pressure(P0Function{{4.0, 0.0}}, split);
  EXPECT_NEAR(p.values[0], 3.0, 1e-15);
  EXPECT_NEAR(p.values[1], -1.0, 1e-15);
  EXPECT_THROW(normalize_pressure(P0Function{{1.0}}, split), std::invalid_argument);
}

TEST(PicardInit, ParseRoundTrip) {
  for (PicardInit init : {PicardInit::ExactInterpolant, PicardInit::Stokes, PicardInit::Zero})
    EXPECT_EQ(parse_picard_init(to_string(init)), init);
  EXPECT_THROW(parse_picard_init("newton"), std::invalid_argument);
}

TEST(Solver, ZeroDataGivesZeroSolution) {
  ExactProblem pb;
  pb.name = "zero";
  pb.has_exact = false;
  pb.f = [](Point2) { return Vec2{}; };
  pb.g = [](Point2) { return Vec2{}; };
  const SolveResult r = picard_solve(pb, mesh1(4));
  EXPECT_TRUE(r.converged);
  for (double v : r.u_h.dofs) EXPECT_EQ(v, 0.0);
  for (double v : r.p_h.values) EXPECT_EQ(v, 0.0);
}

TEST(Solver, StokesReproducesLinearVelocityExactly) {
  const Triangulation tri = mesh1(8, 2.0);
  const ExactProblem pb = example2();
  const SolveResult r = solve_stokes(pb, tri);
  const CrFunction exact = interpolate_cr(pb.u, tri);
  EXPECT_LE(max_dof_difference(r.u_h, exact), 1e-6);
}

TEST(Solver, Example2IsPressureRobust) {
  const Triangulation tri = mesh1(8);
  const ExactProblem pb = example2();
  const SolveResult r = picard_solve(pb, tri);
  ASSERT_TRUE(r.converged);
  EXPECT_LE(error_velocity_h1(r.u_h, pb, tri), 1e-6);
  EXPECT_LE(error_velocity_l2(r.u_h, pb, tri), 1e-6);
}

TEST(Solver, GradientForcingOnlyChangesPressure) {
  const Triangulation tri = mesh1(6);
  const ExactProblem base = example1();
  ExactProblem shifted = base;
  shifted.f = [f = base.f](Point2 x) { return f(x) + 1e4 * Vec2{3.0 * x.x1 * x.x1 * x.x2, x.x1 * x.x1 * x.x1}; };
  shifted.has_exact = false;
  PicardConfig cfg;
  cfg.init = PicardInit::Stokes;
  const SolveResult a = picard_solve(base, tri, cfg), b = picard_solve(shifted, tri, cfg);
  ASSERT_TRUE(a.converged);
  ASSERT_TRUE(b.converged);
  double scale = 0.0;
  for (double v : a.u_h.dofs) scale = std::max(scale, std::abs(v));
  EXPECT_LE(max_dof_difference(a.u_h, b.u_h), 1e-8 * scale);
  double pressure_shift = 0.0;
  for (std::size_t c = 0; c < tri.num_cells(); ++c)
    pressure_shift = std::max(pressure_shift, std::abs(a.p_h.values[c] - b.p_h.values[c]));
  EXPECT_GT(pressure_shift, 1.0);
}

TEST(Solver, LargeViscosityConvergesQuickly) {
  const Triangulation tri = mesh1(8);
  const SolveResult r = picard_solve(with_viscosity(example1(), 1e3), tri);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 3);
}

TEST(Solver, Example1MatchesReferenceAtN16) {
  const Triangulation tri = mesh1(16);
  const ExactProblem pb = example1();
  const SolveResult r = picard_solve(pb, tri);
  ASSERT_TRUE(r.converged);
  const auto& row = reference::kExample1Eps1[2];
  ASSERT_EQ(row.N, 16);
  EXPECT_NEAR(error_velocity_h1(r.u_h, pb, tri, ErrorRule::Nodal), row.err_vh, 0.01 * row.err_vh);
  EXPECT_NEAR(error_velocity_l2(r.u_h, pb, tri, ErrorRule::Nodal), row.err_l2, 0.01 * row.err_l2);
  EXPECT_NEAR(error_pressure(r.p_h, pb, tri, ErrorRule::Nodal), row.err_qh, 0.01 * row.err_qh);
}

TEST(Solver, DiscreteMassConservation) {
  for (double eps : {1.0, 4.0}) {
    const Triangulation tri = mesh1(8, eps);
    const ExactProblem pb = example1();
    const PicardConfig cfg;
    const SolveResult r = picard_solve(pb, tri, cfg);
    ASSERT_TRUE(r.converged);
    const DofMap dofs(tri);
    const auto load = assemble_load_lifted(tri, dofs, pb.f, cfg.quad_degree_load);
    double load_norm = 0.0;
    for (double v : load) load_norm += v * v;
    load_norm = std::sqrt(load_norm);
    // Each cell's mass defect is bounded by the linear solver tolerance and
    // the defects sum to zero because the boundary flux vanishes.
    const P0Function div = broken_divergence(tri, r.u_h);
    double total = 0.0, worst = 0.0;
    for (std::size_t c = 0; c < tri.num_cells(); ++c) {
      const double defect = tri.geometry(c).area * div.values[c];
      total += defect;
      worst = std::max(worst, std::abs(defect));
    }
    EXPECT_LE(worst, 10.0 * cfg.gmres.rtol * load_norm);
    EXPECT_LE(std::abs(total), 1e-13);
  }
}

TEST(Solver, PressureHasZeroMean) {
  const Triangulation tri = mesh1(8, 2.0);
  const SolveResult r = picard_solve(example1(), tri);
  double mean = 0.0;
  for (std::size_t c = 0; c < tri.num_cells(); ++c) mean += tri.geometry(c).area * r.p_h.values[c];
  EXPECT_NEAR(mean, 0.0, 1e-10);
}

TEST(Solver, PicardIncrementsDecrease) {
  const Triangulation tri = mesh1(8);
  PicardConfig cfg;
  cfg.init = PicardInit::Zero;
  const SolveResult r = picard_solve(example1(), tri, cfg);
  ASSERT_TRUE(r.converged);
  ASSERT_GE(r.history.size(), 3u);
  EXPECT_LT(r.history.back(), 1e-6 * r.history.front());
  EXPECT_LE(r.iterations, 30);
}

TEST(Solver, StartingGuessesAgree) {
  const Triangulation tri = mesh1(6, 2.0);
  PicardConfig exact_cfg, stokes_cfg;
  exact_cfg.init = PicardInit::ExactInterpolant;
  stokes_cfg.init = PicardInit::Stokes;
  const SolveResult a = picard_solve(example1(), tri, exact_cfg), b = picard_solve(example1(), tri, stokes_cfg);
  double scale = 0.0;
  for (double v : a.u_h.dofs) scale = std::max(scale, std::abs(v));
  // The stopping test is relative to |u|_A + |p|, and the pressure is of
  // order 1e4 here.
  EXPECT_LE(max_dof_difference(a.u_h, b.u_h), 1e-6 * scale);
}

TEST(Solver, InvalidConfiguration) {
  const Triangulation tri = mesh1(2);
  PicardConfig cfg;
  cfg.end_tol = 0.0;
  EXPECT_THROW(picard_solve(example1(), tri, cfg), std::invalid_argument);
  cfg = {};
  cfg.max_iters = 0;
  EXPECT_THROW(picard_solve(example1(), tri, cfg), std::invalid_argument);
  ExactProblem no_exact = example1();
  no_exact.has_exact = false;
  cfg = {};
  cfg.init = PicardInit::ExactInterpolant;
  EXPECT_THROW(picard_solve(no_exact, tri, cfg), std::invalid_argument);
}

TEST(Solver, ReportsBudgetExhaustion) {
  const Triangulation tri = mesh1(8);
  PicardConfig cfg;
  cfg.init = PicardInit::Zero;
  cfg.max_iters = 1;
  const SolveResult r = picard_solve(example1(), tri, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
}

}  // namespace
}  // namespace crfem
