#include "padapt/analytic.hpp"

#include <cmath>
#include <string>

namespace padapt {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double initial_condition(double x) { return 2.0 + std::sin(kTwoPi * x); }

CharacteristicSolver::CharacteristicSolver(double tolerance, int max_iterations)
    : tolerance_(tolerance), max_iterations_(max_iterations) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("CharacteristicSolver: tolerance must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("CharacteristicSolver: max_iterations must be >= 1");
}

double CharacteristicSolver::residual(double u, double x, double t) {
  return std::abs(u - 2.0 - std::sin(kTwoPi * (x - u * t)));
}

double CharacteristicSolver::exact_u(double x, double t) const {
  if (t < 0.0 || t >= kShockTime) {
    throw AnalyticError(AnalyticError::Kind::AfterShock,
                        "exact_u: t = " + std::to_string(t) + " outside [0, t_shock)");
  }
  double u = initial_condition(x);
  for (int it = 0; it < max_iterations_; ++it) {
    const double phase = kTwoPi * (x - u * t);
    const double g = u - 2.0 - std::sin(phase);
    if (std::abs(g) <= tolerance_) return u;
    const double dg = 1.0 + kTwoPi * t * std::cos(phase);
    u -= g / dg;
    if (!std::isfinite(u) || u < 0.0 || u > 4.0) return bisect(x, t);
  }
  if (residual(u, x, t) <= tolerance_) return u;
  return bisect(x, t);
}

double CharacteristicSolver::bisect(double x, double t) const {
  // g is increasing in u for t < t_shock and changes sign on [1, 3].
  double lo = 1.0;
  double hi = 3.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid - 2.0 - std::sin(kTwoPi * (x - mid * t));
    if (std::abs(g) <= tolerance_) return mid;
    if (g > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 0.0) break;
  }
  throw AnalyticError(AnalyticError::Kind::NotConverged,
                      "exact_u: no convergence at x = " + std::to_string(x) +
                          ", t = " + std::to_string(t));
}

std::vector<double> CharacteristicSolver::exact_profile(std::span<const double> points,
                                                        double t) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      out.push_back(exact_u(points[i], t));
    } catch (const AnalyticError& e) {
      throw AnalyticError(e.kind(), std::string(e.what()) + " (point " + std::to_string(i) + ")",
                          static_cast<std::ptrdiff_t>(i));
    }
  }
  return out;
}

}  // namespace padapt
