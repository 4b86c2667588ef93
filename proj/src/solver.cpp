#include "crfem/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crfem {

namespace {

struct Discretization {
  explicit Discretization(const Triangulation& tri) : dofs(tri) {}

  DofMap dofs;
  CsrMatrix A;
  CsrMatrix B;
  std::vector<double> load;
  CrFunction g_h;
};

Discretization discretize(const ExactProblem& problem, const Triangulation& tri, const PicardConfig& config) {
  if (!problem.f || !problem.g) throw std::invalid_argument("problem must provide f and g");
  Discretization d(tri);
  d.A = assemble_laplacian(tri, d.dofs);
  d.B = assemble_divergence(tri, d.dofs);
  d.load = assemble_load_lifted(tri, d.dofs, problem.f, config.quad_degree_load);
  d.g_h = interpolate_cr(problem.g, tri);
  return d;
}

CsrMatrix zero_matrix(std::size_t n) {
  CsrMatrix Z;
  Z.rows = Z.cols = n;
  Z.row_ptr.assign(n + 1, 0);
  return Z;
}

struct StepResult {
  CrFunction u;
  P0Function p;
  std::size_t iterations = 0;
};

StepResult linear_step(const Discretization& d, const Triangulation& tri, double nu, CsrMatrix N,
                       const CrFunction* u_guess, const P0Function* p_guess, const GmresOptions& options) {
  SaddleSystem system;
  system.nu = nu;
  system.A = d.A;
  system.B = d.B;
  system.N = std::move(N);
  system.rhs_u = d.load;
  system.rhs_p.assign(d.dofs.num_pressure(), 0.0);
  ReducedSystem reduced = apply_dirichlet(system, d.dofs, d.g_h);
  const std::size_t pin = reduced.pressure_offset();
  pin_unknown(reduced, pin);

  std::vector<double> x0;
  if (u_guess != nullptr && p_guess != nullptr) {
    x0.resize(reduced.K.rows);
    for (std::size_t r = 0; r < reduced.free_velocity.size(); ++r) x0[r] = u_guess->dofs[reduced.free_velocity[r]];
    const double shift = p_guess->values[0];
    for (std::size_t k = 0; k < reduced.num_pressure; ++k) x0[pin + k] = p_guess->values[k] - shift;
  }

  const Ilu0Factors ilu(reduced.K);
  GmresResult solved = gmres(reduced.K, reduced.rhs, ilu, options, x0);
  if (!solved.report.converged) {
    std::ostringstream msg;
    msg << "linear solve failed: relative residual " << solved.report.relative_residual << " after "
        << solved.report.iterations << " GMRES iterations";
    throw std::runtime_error(msg.str());
  }
  auto [u, p] = expand_solution(reduced, solved.x, d.dofs.num_facets());
  StepResult out;
  out.u = std::move(u);
  out.p = normalize_pressure(P0Function{std::move(p)}, tri);
  out.iterations = solved.report.iterations;
  return out;
}

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

}  // namespace

std::string to_string(PicardInit init) {
  switch (init) {
    case PicardInit::ExactInterpolant:
      return "exact";
    case PicardInit::Stokes:
      return "stokes";
    case PicardInit::Zero:
      return "zero";
  }
  return "unknown";
}

PicardInit parse_picard_init(const std::string& text) {
  if (text == "exact") return PicardInit::ExactInterpolant;
  if (text == "stokes") return PicardInit::Stokes;
  if (text == "zero") return PicardInit::Zero;
  throw std::invalid_argument("unknown Picard initialisation '" + text + "' (expected exact, stokes or zero)");
}

P0Function normalize_pressure(const P0Function& p_h, const Triangulation& tri) {
  if (p_h.values.size() != tri.num_cells()) throw std::invalid_argument("normalize_pressure: size mismatch");
  double integral = 0.0, area = 0.0;
  for (std::size_t c = 0; c < tri.num_cells(); ++c) {
    const double a = tri.geometry(static_cast<int>(c)).area;
    integral += a * p_h.values[c];
    area += a;
  }
  const double mean = integral / area;
  P0Function out = p_h;
  for (double& v : out.values) v -= mean;
  return out;
}

double energy_norm(const CsrMatrix& A, std::span<const double> v) {
  const auto Av = spmv(A, v);
  return std::sqrt(std::max(0.0, dot(v, Av)));
}

double pressure_norm(const Triangulation& tri, std::span<const double> p) {
  double s = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) s += tri.geometry(static_cast<int>(c)).area * p[c] * p[c];
  return std::sqrt(s);
}

SolveResult solve_stokes(const ExactProblem& problem, const Triangulation& tri, const PicardConfig& config) {
  const Discretization d = discretize(problem, tri, config);
  StepResult step =
      linear_step(d, tri, problem.nu, zero_matrix(d.dofs.num_velocity()), nullptr, nullptr, config.gmres);
  SolveResult result;
  result.u_h = std::move(step.u);
  result.p_h = std::move(step.p);
  result.iterations = 1;
  result.converged = true;
  result.linear_iterations = step.iterations;
  return result;
}

SolveResult picard_solve(const ExactProblem& problem, const Triangulation& tri, const PicardConfig& config) {
  if (!(config.end_tol > 0.0)) throw std::invalid_argument("picard_solve: end_tol must be positive");
  if (config.max_iters < 1) throw std::invalid_argument("picard_solve: max_iters must be at least 1");
  const Discretization d = discretize(problem, tri, config);

  const PicardInit init = config.init.value_or(problem.has_exact ? PicardInit::ExactInterpolant : PicardInit::Stokes);
  SolveResult result;
  CrFunction u;
  P0Function p;
  switch (init) {
    case PicardInit::ExactInterpolant:
      if (!problem.has_exact || !problem.u || !problem.p) {
        throw std::invalid_argument("picard_solve: exact initialisation needs an exact solution");
      }
      u = interpolate_cr(problem.u, tri);
      p = normalize_pressure(project_p0(problem.p, tri), tri);
      break;
    case PicardInit::Stokes: {
      StepResult step =
          linear_step(d, tri, problem.nu, zero_matrix(d.dofs.num_velocity()), nullptr, nullptr, config.gmres);
      u = std::move(step.u);
      p = std::move(step.p);
      result.linear_iterations += step.iterations;
      break;
    }
    case PicardInit::Zero:
      u = CrFunction(2, tri.num_facets());
      p = P0Function{std::vector<double>(tri.num_cells(), 0.0)};
      break;
  }

  for (int n = 0; n < config.max_iters; ++n) {
    StepResult step =
        linear_step(d, tri, problem.nu, assemble_convection(tri, d.dofs, u), &u, &p, config.gmres);
    result.linear_iterations += step.iterations;
    const double increment = energy_norm(d.A, difference(step.u.dofs, u.dofs)) +
                             pressure_norm(tri, difference(step.p.values, p.values));
    const double size = energy_norm(d.A, u.dofs) + pressure_norm(tri, p.values);
    result.history.push_back(increment);
    result.iterations = n + 1;
    u = std::move(step.u);
    p = std::move(step.p);
    if (increment <= config.end_tol * size) {
      result.converged = true;
      break;
    }
  }
  result.u_h = std::move(u);
  result.p_h = std::move(p);
  return result;
}

}  // namespace crfem
