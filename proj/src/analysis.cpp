#include "crfem/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "crfem/elements.hpp"
#include "crfem/quadrature.hpp"

namespace crfem {

namespace {

// Sum over cells of int_T integrand(cell, x) dx.
template <typename Integrand>
double integrate(const Triangulation& tri, const QuadratureRule& rule, Integrand&& integrand) {
  double total = 0.0;
  for (std::size_t c = 0; c < tri.num_cells(); ++c) {
    const int ci = static_cast<int>(c);
    const auto& g = tri.geometry(ci);
    double local = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) local += rule.weights[q] * integrand(ci, map_to_cell(g, rule.points[q]));
    total += g.area * local;
  }
  return total;
}

template <typename Integrand>
double integrate(const Triangulation& tri, int degree, Integrand&& integrand) {
  return integrate(tri, quadrature_rule(degree), std::forward<Integrand>(integrand));
}

const QuadratureRule& velocity_rule(ErrorRule rule) {
  return rule == ErrorRule::Nodal ? vertex_midpoint_centroid_rule() : quadrature_rule(kErrorQuadratureDegree);
}

const QuadratureRule& pressure_rule(ErrorRule rule) {
  return rule == ErrorRule::Nodal ? edge_midpoint_rule() : quadrature_rule(kErrorQuadratureDegree);
}

double relative(double error_sq, double exact_sq, const char* what) {
  if (!(exact_sq > 0.0)) throw std::domain_error(std::string(what) + ": exact norm is zero");
  return std::sqrt(error_sq / exact_sq);
}

double frobenius_sq(const Mat2& m) {
  return m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1];
}

}  // namespace

std::string to_string(ErrorRule rule) { return rule == ErrorRule::Nodal ? "nodal" : "exact"; }

ErrorRule parse_error_rule(const std::string& text) {
  if (text == "nodal") return ErrorRule::Nodal;
  if (text == "exact") return ErrorRule::Exact;
  throw std::invalid_argument("unknown error rule '" + text + "' (expected nodal or exact)");
}

double error_velocity_h1(const CrFunction& u_h, const ExactProblem& problem, const Triangulation& tri,
                         ErrorRule rule) {
  const QuadratureRule& quad = velocity_rule(rule);
  if (!problem.grad_u) throw std::invalid_argument("error_velocity_h1: problem has no exact gradient");
  std::vector<Mat2> jac(tri.num_cells());
  for (std::size_t c = 0; c < tri.num_cells(); ++c) jac[c] = cr_jacobian(tri, u_h, static_cast<int>(c));
  const double err = integrate(tri, quad, [&](int c, Point2 x) {
    const Mat2 G = problem.grad_u(x);
    Mat2 d{};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) d[a][b] = G[a][b] - jac[c][a][b];
    return frobenius_sq(d);
  });
  const double ref = integrate(tri, quad, [&](int, Point2 x) { return frobenius_sq(problem.grad_u(x)); });
  return relative(err, ref, "error_velocity_h1");
}

double error_velocity_l2(const CrFunction& u_h, const ExactProblem& problem, const Triangulation& tri,
                         ErrorRule rule) {
  const QuadratureRule& quad = velocity_rule(rule);
  if (!problem.u) throw std::invalid_argument("error_velocity_l2: problem has no exact velocity");
  const double err = integrate(tri, quad, [&](int c, Point2 x) {
    const Vec2 d = problem.u(x) - cr_vector_value(tri, u_h, c, x);
    return dot(d, d);
  });
  const double ref = integrate(tri, quad, [&](int, Point2 x) {
    const Vec2 u = problem.u(x);
    return dot(u, u);
  });
  return relative(err, ref, "error_velocity_l2");
}

double error_pressure(const P0Function& p_h, const ExactProblem& problem, const Triangulation& tri, ErrorRule rule) {
  const QuadratureRule& quad = pressure_rule(rule);
  if (!problem.p) throw std::invalid_argument("error_pressure: problem has no exact pressure");
  if (p_h.values.size() != tri.num_cells()) throw std::invalid_argument("error_pressure: size mismatch");
  const double area = integrate(tri, 1, [](int, Point2) { return 1.0; });
  const double mean_exact = integrate(tri, quad, [&](int, Point2 x) { return problem.p(x); }) / area;
  const P0Function q = normalize_pressure(p_h, tri);
  const double err = integrate(tri, quad, [&](int c, Point2 x) {
    const double d = problem.p(x) - mean_exact - q.values[c];
    return d * d;
  });
  const double ref = integrate(tri, quad, [&](int, Point2 x) {
    const double d = problem.p(x) - mean_exact;
    return d * d;
  });
  return relative(err, ref, "error_pressure");
}

double convergence_rate(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0)) throw std::invalid_argument("convergence_rate: errors must be positive");
  return std::log(e_coarse / e_fine) / std::log(2.0);
}

std::optional<double> sobolev_ratio(const Triangulation& tri, const CrFunction& phi_h, double p) {
  if (phi_h.components != 1 || phi_h.num_facets != tri.num_facets()) {
    throw std::invalid_argument("sobolev_ratio: expected a scalar CR function on this mesh");
  }
  if (!(p >= 1.0)) throw std::invalid_argument("sobolev_ratio: p must be at least 1");
  double h1_sq = 0.0;
  for (std::size_t c = 0; c < tri.num_cells(); ++c) {
    const Vec2 g = cr_gradient(tri, phi_h, static_cast<int>(c), 0);
    h1_sq += tri.geometry(static_cast<int>(c)).area * dot(g, g);
  }
  const double lp = std::pow(
      integrate(tri, kErrorQuadratureDegree,
                [&](int c, Point2 x) { return std::pow(std::abs(cr_value(tri, phi_h, c, 0, x)), p); }),
      1.0 / p);
  const double h1 = std::sqrt(h1_sq);
  if (!(h1 > 1e-14 * std::max(lp, 1e-300))) return std::nullopt;
  return lp / h1;
}

double discrete_sobolev_probe(const Triangulation& tri, double p, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("discrete_sobolev_probe: samples must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::array<double, 9> coeff{};
    for (double& c : coeff) c = normal(rng);
    const ScalarField field = [&coeff](Point2 x) {
      using std::numbers::pi;
      double v = 0.0;
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 3; ++l) v += coeff[3 * (k - 1) + (l - 1)] * std::sin(k * pi * x.x1) * std::sin(l * pi * x.x2);
      return v;
    };
    CrFunction phi = interpolate_cr(field, tri);
    for (int f : tri.boundary_facets()) phi(0, f) = 0.0;
    if (const auto ratio = sobolev_ratio(tri, phi, p)) best = std::max(best, *ratio);
  }
  return best;
}

Grading MeshFamily::grading() const {
  if (kind == "mesh1") return grading::PowerLaw{eps};
  if (kind == "mesh2") return grading::Cosine{};
  throw std::invalid_argument("unknown mesh family '" + kind + "'");
}

std::string MeshFamily::label() const {
  if (kind == "mesh2") return "mesh2";
  std::ostringstream out;
  out << "mesh1(eps=" << eps << ")";
  return out.str();
}

MeshFamily make_mesh_family(const std::string& kind, double eps) {
  if (kind != "mesh1" && kind != "mesh2") {
    throw std::invalid_argument("unknown mesh family '" + kind + "' (expected mesh1 or mesh2)");
  }
  if (!(eps >= 1.0)) throw std::invalid_argument("mesh grading exponent eps must be >= 1");
  return MeshFamily{kind, eps};
}

bool StudyReport::ok() const {
  for (const auto& row : rows)
    if (!row.error.empty() || !row.converged) return false;
  return true;
}

StudyReport run_study(const ExactProblem& problem, const MeshFamily& mesh, const std::vector<int>& n_list,
                      const PicardConfig& config, int threads, ErrorRule error_rule) {
  if (n_list.empty()) throw std::invalid_argument("run_study: empty N list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw std::invalid_argument("run_study: N must be positive");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw std::invalid_argument("run_study: N list must be ascending");
  }
  const Grading grading = mesh.grading();

  StudyReport report;
  report.metadata = {problem.name, mesh.kind, mesh.eps, problem.nu, config.quad_degree_load,
                     config.end_tol, config.gmres.restart, config.gmres.rtol, error_rule};
  report.rows.resize(n_list.size());
  report.quality.resize(n_list.size());

  auto solve_row = [&](std::size_t i) {
    ConvergenceRow& row = report.rows[i];
    row.N = n_list[i];
    const Triangulation tri = generate_graded_mesh(row.N, grading);
    report.quality[i] = quality_report(tri);
    row.h = tri.h();
    row.dofs = report.quality[i].num_dofs;
    try {
      const SolveResult sol = picard_solve(problem, tri, config);
      row.picard_iters = sol.iterations;
      row.converged = sol.converged;
      row.err_vh = error_velocity_h1(sol.u_h, problem, tri, error_rule);
      row.err_l2 = error_velocity_l2(sol.u_h, problem, tri, error_rule);
      row.err_qh = error_pressure(sol.p_h, problem, tri, error_rule);
    } catch (const std::exception& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.err_vh = row.err_l2 = row.err_qh = nan;
      row.error = e.what();
    }
  };

  // Largest meshes first so the slowest rows start early.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < n_list.size();) solve_row(n_list.size() - 1 - k);
  };
  const std::size_t nthreads = std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, n_list.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& prev = report.rows[i - 1];
    auto& row = report.rows[i];
    if (!prev.error.empty() || !row.error.empty()) continue;
    const double refinement = std::log2(static_cast<double>(row.N) / prev.N);
    auto rate = [refinement](double a, double b) -> std::optional<double> {
      if (a > 0.0 && b > 0.0) return convergence_rate(a, b) / refinement;
      return std::nullopt;
    };
    row.rate_vh = rate(prev.err_vh, row.err_vh);
    row.rate_l2 = rate(prev.err_l2, row.err_l2);
    row.rate_qh = rate(prev.err_qh, row.err_qh);
  }
  return report;
}

}  // namespace crfem
