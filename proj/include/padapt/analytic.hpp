#ifndef PADAPT_ANALYTIC_HPP_
#define PADAPT_ANALYTIC_HPP_

#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace padapt {

/// First characteristic crossing for u0 = 2 + sin(2 pi x): 1 / max|u0'|.
inline constexpr double kShockTime = 1.0 / (2.0 * std::numbers::pi);

/// Initial condition u(x, 0) = 2 + sin(2 pi x).
double initial_condition(double x);

class AnalyticError : public std::runtime_error {
 public:
  enum class Kind { AfterShock, NotConverged };
  AnalyticError(Kind kind, const std::string& what, std::ptrdiff_t index = -1)
      : std::runtime_error(what), kind_(kind), index_(index) {}
  Kind kind() const { return kind_; }
  /// Offending point for exact_profile, -1 otherwise.
  std::ptrdiff_t index() const { return index_; }

 private:
  Kind kind_;
  std::ptrdiff_t index_;
};

/// Solves the implicit characteristic relation u = 2 + sin(2 pi (x - u t))
/// with Newton-Raphson, falling back to bisection on [1, 3] whenever an
/// iterate leaves [0, 4] or Newton stalls.
class CharacteristicSolver {
 public:
  CharacteristicSolver() = default;
  CharacteristicSolver(double tolerance, int max_iterations);

  double tolerance() const { return tolerance_; }
  int max_iterations() const { return max_iterations_; }

  double exact_u(double x, double t) const;
  std::vector<double> exact_profile(std::span<const double> points, double t) const;

  /// |u - 2 - sin(2 pi (x - u t))|
  static double residual(double u, double x, double t);

 private:
  double bisect(double x, double t) const;

  double tolerance_ = 1e-12;
  int max_iterations_ = 100;
};

}  // namespace padapt

#endif  // PADAPT_ANALYTIC_HPP_
