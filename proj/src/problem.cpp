#include "crfem/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crfem {

namespace {

constexpr double kPressureScale = 1e5;

// Steep part of the pressure, 1e5 (1-x2)^3 - 1e5/4, and its x2-derivative.
double steep_pressure(Point2 x) {
  const double t = 1.0 - x.x2;
  return kPressureScale * t * t * t - kPressureScale / 4.0;
}

Vec2 steep_pressure_gradient(Point2 x) {
  const double t = 1.0 - x.x2;
  return {0.0, -3.0 * kPressureScale * t * t};
}

// a(t) = t^2 (t-1)^2 and its derivatives.
double a0(double t) { return t * t * (t - 1.0) * (t - 1.0); }
double a1(double t) { return 4.0 * t * t * t - 6.0 * t * t + 2.0 * t; }
double a2(double t) { return 12.0 * t * t - 12.0 * t + 2.0; }
double a3(double t) { return 24.0 * t - 12.0; }

Vec2 rotation_term(const Mat2& G, Vec2 u) {
  const double omega = G[1][0] - G[0][1];
  return {-omega * u.x2, omega * u.x1};
}

// grad(|u|^2 / 2) = (grad u)^T u.
Vec2 kinetic_gradient(const Mat2& G, Vec2 u) {
  return {G[0][0] * u.x1 + G[1][0] * u.x2, G[0][1] * u.x1 + G[1][1] * u.x2};
}

}  // namespace

ExactProblem example1() {
  ExactProblem pb;
  pb.name = "example1";
  pb.nu = 0.1;
  pb.u = [](Point2 x) { return Vec2{64.0 * a0(x.x1) * a1(x.x2), -64.0 * a1(x.x1) * a0(x.x2)}; };
  pb.grad_u = [](Point2 x) {
    return Mat2{{{64.0 * a1(x.x1) * a1(x.x2), 64.0 * a0(x.x1) * a2(x.x2)},
                 {-64.0 * a2(x.x1) * a0(x.x2), -64.0 * a1(x.x1) * a1(x.x2)}}};
  };
  pb.lap_u = [](Point2 x) {
    return Vec2{64.0 * (a2(x.x1) * a1(x.x2) + a0(x.x1) * a3(x.x2)),
                -64.0 * (a3(x.x1) * a0(x.x2) + a1(x.x1) * a2(x.x2))};
  };
  pb.p = [u = pb.u](Point2 x) {
    const Vec2 ux = u(x);
    return 0.5 * dot(ux, ux) - 0.1238397581254773 + steep_pressure(x);
  };
  const double nu = pb.nu;
  pb.f = [nu, u = pb.u, grad = pb.grad_u, lap = pb.lap_u](Point2 x) {
    const Vec2 ux = u(x);
    const Mat2 G = grad(x);
    return -nu * lap(x) + rotation_term(G, ux) + kinetic_gradient(G, ux) + steep_pressure_gradient(x);
  };
  pb.g = [](Point2) { return Vec2{}; };
  return pb;
}

ExactProblem example2() {
  ExactProblem pb;
  pb.name = "example2";
  pb.nu = 1.0;
  pb.u = [](Point2 x) { return Vec2{-(x.x2 - 0.5), x.x1 - 0.5}; };
  pb.grad_u = [](Point2) { return Mat2{{{0.0, -1.0}, {1.0, 0.0}}}; };
  pb.lap_u = [](Point2) { return Vec2{}; };
  pb.p = [](Point2 x) {
    const double r1 = x.x1 - 0.5, r2 = x.x2 - 0.5;
    return r1 * r1 + r2 * r2 - 1.0 / 6.0 + steep_pressure(x);
  };
  pb.f = [](Point2 x) { return steep_pressure_gradient(x); };
  pb.g = pb.u;
  return pb;
}

ExactProblem custom_example(double nu) {
  using std::numbers::pi;
  ExactProblem pb;
  pb.name = "custom";
  pb.nu = nu;
  pb.u = [](Point2 x) {
    const double sx = std::sin(pi * x.x1), sy = std::sin(pi * x.x2);
    return Vec2{sx * sx * std::sin(2.0 * pi * x.x2), -std::sin(2.0 * pi * x.x1) * sy * sy};
  };
  pb.grad_u = [](Point2 x) {
    const double sx = std::sin(pi * x.x1), sy = std::sin(pi * x.x2);
    const double s2x = std::sin(2.0 * pi * x.x1), s2y = std::sin(2.0 * pi * x.x2);
    const double c2x = std::cos(2.0 * pi * x.x1), c2y = std::cos(2.0 * pi * x.x2);
    return Mat2{{{pi * s2x * s2y, 2.0 * pi * sx * sx * c2y}, {-2.0 * pi * c2x * sy * sy, -pi * s2x * s2y}}};
  };
  pb.lap_u = [](Point2 x) {
    const double sx = std::sin(pi * x.x1), sy = std::sin(pi * x.x2);
    const double s2x = std::sin(2.0 * pi * x.x1), s2y = std::sin(2.0 * pi * x.x2);
    const double c2x = std::cos(2.0 * pi * x.x1), c2y = std::cos(2.0 * pi * x.x2);
    return Vec2{2.0 * pi * pi * c2x * s2y - 4.0 * pi * pi * sx * sx * s2y,
                4.0 * pi * pi * s2x * sy * sy - 2.0 * pi * pi * s2x * c2y};
  };
  pb.p = [](Point2 x) { return std::cos(pi * x.x1) * std::cos(pi * x.x2); };
  pb.f = [nu, u = pb.u, grad = pb.grad_u, lap = pb.lap_u](Point2 x) {
    const Vec2 grad_p{-pi * std::sin(pi * x.x1) * std::cos(pi * x.x2), -pi * std::cos(pi * x.x1) * std::sin(pi * x.x2)};
    return -nu * lap(x) + rotation_term(grad(x), u(x)) + grad_p;
  };
  pb.g = [](Point2) { return Vec2{}; };
  return pb;
}

ExactProblem with_viscosity(const ExactProblem& problem, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
  if (!problem.lap_u) throw std::invalid_argument("with_viscosity: problem has no exact Laplacian");
  ExactProblem out = problem;
  const double delta = nu - problem.nu;
  out.nu = nu;
  out.f = [f = problem.f, lap = problem.lap_u, delta](Point2 x) { return f(x) - delta * lap(x); };
  return out;
}

ExactProblem make_example(const std::string& id) {
  if (id == "1" || id == "example1") return example1();
  if (id == "2" || id == "example2") return example2();
  if (id == "custom") return custom_example();
  throw std::invalid_argument("unknown example '" + id + "' (expected 1, 2 or custom)");
}

MomentumCheck momentum_residual_fd(const ExactProblem& pb, Point2 x, double h) {
  // Five-point stencils along each axis: first derivative
  // (-f(2h) + 8 f(h) - 8 f(-h) + f(-2h)) / 12h, second derivative
  // (-f(2h) + 16 f(h) - 30 f(0) + 16 f(-h) - f(-2h)) / 12h^2.
  const Vec2 e1{h, 0.0}, e2{0.0, h};
  const Vec2 u0 = pb.u(x);
  auto first = [h](auto f, Vec2 e) { return (1.0 / (12.0 * h)) * (-1.0 * f(2.0 * e) + 8.0 * f(e) - 8.0 * f(-1.0 * e) + f(-2.0 * e)); };
  auto second = [h](auto f, Vec2 e, auto f0) {
    return (1.0 / (12.0 * h * h)) * (-1.0 * f(2.0 * e) + 16.0 * f(e) - 30.0 * f0 + 16.0 * f(-1.0 * e) - f(-2.0 * e));
  };
  auto u_at = [&](Vec2 d) { return pb.u(x + d); };
  auto p_at = [&](Vec2 d) { return pb.p(x + d); };
  const Vec2 lap = second(u_at, e1, u0) + second(u_at, e2, u0);
  const Vec2 dx1 = first(u_at, e1);
  const Vec2 dx2 = first(u_at, e2);
  const Mat2 G{{{dx1.x1, dx2.x1}, {dx1.x2, dx2.x2}}};
  const Vec2 grad_p{first(p_at, e1), first(p_at, e2)};
  const Vec2 viscous = -pb.nu * lap;
  const Vec2 rotation = rotation_term(G, u0);
  const Vec2 f = pb.f(x);
  MomentumCheck check;
  check.residual = viscous + rotation + grad_p - f;
  check.scale = norm(viscous) + norm(rotation) + norm(grad_p) + norm(f);
  return check;
}

}  // namespace crfem
