#include "crfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crfem {

SegmentRule gauss_legendre(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss_legendre: unsupported point count");
  SegmentRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton on P_n in extended precision, seeded by the Tricomi estimate.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0L;
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    {
      // Recompute the derivative at the converged root.
      long double p0 = 1.0L, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0L;
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
    }
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    // Map [-1,1] -> [0,1] and halve the weights.
    rule.points[i] = static_cast<double>(0.5L * (1.0L - x));
    rule.points[n - 1 - i] = static_cast<double>(0.5L * (1.0L + x));
    rule.weights[i] = rule.weights[n - 1 - i] = static_cast<double>(0.5L * w);
  }
  return rule;
}

namespace {

// Collapsed (Duffy) product rule: x = u, y = v (1 - u) with Jacobian (1 - u).
// A degree-d polynomial becomes degree d in v and degree d + 1 in u.
QuadratureRule make_triangle_rule(int degree) {
  const int n = (degree + 3) / 2;  // 2n - 1 >= degree + 1
  const SegmentRule gl = gauss_legendre(n);
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int a = 0; a < n; ++a) {
    const double u = gl.points[a];
    for (int b = 0; b < n; ++b) {
      const double v = gl.points[b];
      const double x = u;
      const double y = v * (1.0 - u);
      // Reference area is 1/2, so normalised weight = 2 * w_u w_v (1-u).
      rule.points.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(2.0 * gl.weights[a] * gl.weights[b] * (1.0 - u));
    }
  }
  return rule;
}

struct RuleTable {
  std::array<QuadratureRule, kMaxQuadratureDegree + 1> rules;
  RuleTable() {
    for (int d = 1; d <= kMaxQuadratureDegree; ++d) rules[d] = make_triangle_rule(d);
  }
};

}  // namespace

const QuadratureRule& quadrature_rule(int degree) {
  if (degree < 1 || degree > kMaxQuadratureDegree) {
    throw std::invalid_argument("quadrature_rule: unsupported degree " + std::to_string(degree));
  }
  static const RuleTable table;
  return table.rules[degree];
}

const QuadratureRule& vertex_midpoint_centroid_rule() {
  static const QuadratureRule rule{3,
                                   {{1.0, 0.0, 0.0},
                                    {0.0, 1.0, 0.0},
                                    {0.0, 0.0, 1.0},
                                    {0.0, 0.5, 0.5},
                                    {0.5, 0.0, 0.5},
                                    {0.5, 0.5, 0.0},
                                    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}},
                                   {1.0 / 20.0, 1.0 / 20.0, 1.0 / 20.0, 2.0 / 15.0, 2.0 / 15.0, 2.0 / 15.0, 9.0 / 20.0}};
  return rule;
}

const QuadratureRule& edge_midpoint_rule() {
  static const QuadratureRule rule{
      2, {{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}}, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
  return rule;
}

const SegmentRule& edge_rule() {
  static const SegmentRule rule = gauss_legendre(5);
  return rule;
}

}  // namespace crfem
