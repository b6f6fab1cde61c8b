#pragma once

#include <vector>

namespace vardyn::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for integral f(x) exp(-x^2) dx (Golub-Welsch).
Rule gauss_hermite(int n);

/// Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
Rule gauss_legendre(int n);

/// Rule for E[f(alpha)] with alpha ~ Cauchy(center, half_width), accurate for
/// integrands oscillating at most like exp(i omega_max alpha).
///
/// Substitutes alpha = center + half_width * tan(u), so the density becomes
/// the flat measure du/pi. Near u = +-pi/2 panels are graded geometrically in
/// the distance eps to the endpoint and subdivided to follow the oscillation
/// phase. The rule stops at eps_cut ~ omega/resolution; the dropped end
/// interval is closed by stretching the weights of the last graded panel, so
/// weights sum to one. `level` doubles resolution and panel density.
Rule cauchy_graded(double center, double half_width, double omega_max, int level = 0);

}  // namespace vardyn::quadrature
