#ifndef PADAPT_QUADRATURE_HPP_
#define PADAPT_QUADRATURE_HPP_

#include <span>
#include <vector>

namespace padapt {

/// Largest polynomial degree for which rules and bases are cached.
/// Covers p_max = 10 for the solver and degree 20 for the reward points.
inline constexpr int kMaxCachedDegree = 20;

/// (p+1)-point Gauss-Legendre rule on [-1, 1], exact for degree 2p+1.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Lagrange basis through a set of distinct nodes, stored in barycentric form.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(std::vector<double> nodes);

  int degree() const { return static_cast<int>(nodes_.size()) - 1; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& barycentric_weights() const { return bary_; }

  /// Values of every basis polynomial at xi (ell_0(xi) ... ell_p(xi)).
  std::vector<double> basis_values(double xi) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> bary_;
};

/// Row-major square matrix, D(i, j) = ell_j'(node_i).
class DiffMatrix {
 public:
  DiffMatrix() = default;
  explicit DiffMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::vector<double> apply(std::span<const double> v) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

QuadratureRule gauss_legendre(int p);

/// Barycentric (second form) evaluation of the interpolant through
/// (basis.nodes(), values) at xi. Returns the stored value exactly at a node.
double lagrange_eval(const LagrangeBasis& basis, std::span<const double> values, double xi);

std::vector<double> interpolate_to(const LagrangeBasis& src, std::span<const double> values,
                                   std::span<const double> dst_nodes);

DiffMatrix diff_matrix(const LagrangeBasis& basis);

/// Everything the solver needs for one polynomial degree on Gauss nodes.
struct ReferenceElement {
  QuadratureRule rule;
  LagrangeBasis basis;
  DiffMatrix diff;
  std::vector<double> left_trace;   // ell_j(-1)
  std::vector<double> right_trace;  // ell_j(+1)
};

/// Immutable, lazily-built-once table of reference elements for degrees
/// 0..kMaxCachedDegree. Thread-safe after the first call returns.
const ReferenceElement& reference_element(int p);

}  // namespace padapt

#endif  // PADAPT_QUADRATURE_HPP_
