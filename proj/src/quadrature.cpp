#include "vardyn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "vardyn/error.hpp"

namespace vardyn::quadrature {

Rule gauss_hermite(int n) {
  if (n < 1) throw Error(ErrorKind::Parameter, "Gauss-Hermite needs at least one node");
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  // Jacobi matrix of the physicists' Hermite recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int k = 0; k < n; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    r.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    r.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
  }
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(n, r);
  return r;
}

Rule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::Parameter, "Gauss-Legendre needs at least one node");
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo] = -x;
    r.nodes[hi] = x;
    r.weights[lo] = r.weights[hi] = w;
  }
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(n, r);
  return r;
}

namespace {

constexpr int kPanelOrder = 20;
constexpr double kResolution = 2000.0;  // omega / eps_cut
constexpr double kCentralEdge = 0.5;    // graded region starts this far from +-pi/2
constexpr double kMaxCut = 0.01;

void add_panels(Rule& out, const Rule& gl, double a, double b, int count) {
  const double h = (b - a) / count;
  for (int s = 0; s < count; ++s) {
    const double lo = a + s * h;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      out.nodes.push_back(lo + 0.5 * h * (gl.nodes[q] + 1.0));
      out.weights.push_back(0.5 * h * gl.weights[q]);
    }
  }
}

int panels_for_phase(double phase, double per_panel) {
  return static_cast<int>(std::ceil(phase / per_panel)) + 1;
}

}  // namespace

Rule cauchy_graded(double center, double half_width, double omega_max, int level) {
  if (!(half_width > 0.0)) throw Error(ErrorKind::Parameter, "Cauchy half-width must be > 0");
  const double pi = std::numbers::pi;
  const double scale = std::ldexp(1.0, level);
  // Phase of exp(i omega alpha) in u is omega * half_width * tan(u).
  const double omega = std::abs(omega_max) * half_width;
  const double eps_cut = omega > 0.0 ? std::min(kMaxCut, omega / (kResolution * scale)) : kMaxCut / scale;
  const double per_panel = 2.0 * pi / scale;
  const Rule gl = gauss_legendre(kPanelOrder);

  const int grades = static_cast<int>(std::floor(std::log2(kCentralEdge / eps_cut)));
  const double top = eps_cut * std::ldexp(1.0, grades);

  // Right half in u: central part [0, pi/2 - top] and graded panels beyond.
  Rule half;
  const double u_edge = pi / 2 - top;
  add_panels(half, gl, 0.0, u_edge, panels_for_phase(omega * std::tan(u_edge), pi / scale));
  double e = top;
  std::size_t last_begin = half.nodes.size();
  for (int j = 0; j < grades; ++j) {
    const double e2 = 0.5 * e;
    const double phase = omega * (1.0 / std::tan(e2) - 1.0 / std::tan(e));
    last_begin = half.nodes.size();
    add_panels(half, gl, pi / 2 - e, pi / 2 - e2, panels_for_phase(phase, per_panel));
    e = e2;
  }
  // Tail closure: the last graded panel has width eps_cut; let it also stand
  // in for the dropped interval (pi/2 - eps_cut, pi/2).
  if (grades > 0) {
    for (std::size_t k = last_begin; k < half.weights.size(); ++k) half.weights[k] *= 2.0;
  } else {
    const double stretch = (pi / 2) / u_edge;
    for (double& w : half.weights) w *= stretch;
  }

  Rule r;
  r.nodes.reserve(2 * half.nodes.size());
  r.weights.reserve(2 * half.nodes.size());
  for (std::size_t k = half.nodes.size(); k-- > 0;) {
    r.nodes.push_back(center - half_width * std::tan(half.nodes[k]));
    r.weights.push_back(half.weights[k] / pi);
  }
  for (std::size_t k = 0; k < half.nodes.size(); ++k) {
    r.nodes.push_back(center + half_width * std::tan(half.nodes[k]));
    r.weights.push_back(half.weights[k] / pi);
  }
  return r;
}

}  // namespace vardyn::quadrature
