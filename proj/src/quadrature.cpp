#include "padapt/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace padapt {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int p) {
  if (p < 0) {
    throw std::invalid_argument("gauss_legendre: degree must be >= 0, got " + std::to_string(p));
  }
  const int n = p + 1;
  QuadratureRule rule;
  rule.order = p;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  // Roots are symmetric; solve for the upper half and mirror.
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * n));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto [pn, dpn] = legendre_with_derivative(n, x);
      dp = dpn;
      const double dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - k] = x;
    rule.nodes[k] = -x;
    rule.weights[n - 1 - k] = w;
    rule.weights[k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

LagrangeBasis::LagrangeBasis(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("LagrangeBasis: no nodes");
  const std::size_t n = nodes_.size();
  bary_.assign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const double diff = nodes_[j] - nodes_[k];
      if (diff == 0.0) throw std::invalid_argument("LagrangeBasis: repeated node");
      bary_[j] /= diff;
    }
  }
}

std::vector<double> LagrangeBasis::basis_values(double xi) const {
  const std::size_t n = nodes_.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (xi == nodes_[j]) {
      out[j] = 1.0;
      return out;
    }
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = bary_[j] / (xi - nodes_[j]);
    denom += out[j];
  }
  for (auto& v : out) v /= denom;
  return out;
}

std::vector<double> DiffMatrix::apply(std::span<const double> v) const {
  if (v.size() != n_) throw std::invalid_argument("DiffMatrix::apply: size mismatch");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

double lagrange_eval(const LagrangeBasis& basis, std::span<const double> values, double xi) {
  const auto& nodes = basis.nodes();
  if (values.size() != nodes.size()) {
    throw std::invalid_argument("lagrange_eval: expected " + std::to_string(nodes.size()) +
                                " values, got " + std::to_string(values.size()));
  }
  const auto& bary = basis.barycentric_weights();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double d = xi - nodes[j];
    if (d == 0.0) return values[j];
    const double t = bary[j] / d;
    num += t * values[j];
    den += t;
  }
  return num / den;
}

std::vector<double> interpolate_to(const LagrangeBasis& src, std::span<const double> values,
                                   std::span<const double> dst_nodes) {
  std::vector<double> out;
  out.reserve(dst_nodes.size());
  for (double xi : dst_nodes) out.push_back(lagrange_eval(src, values, xi));
  return out;
}

DiffMatrix diff_matrix(const LagrangeBasis& basis) {
  const auto& x = basis.nodes();
  const auto& b = basis.barycentric_weights();
  const std::size_t n = x.size();
  DiffMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (b[j] / b[i]) / (x[i] - x[j]);
      diag -= d(i, j);
    }
    // Negative-sum trick keeps row sums at round-off level.
    d(i, i) = diag;
  }
  return d;
}

namespace {

ReferenceElement build_reference(int p) {
  QuadratureRule rule = gauss_legendre(p);
  LagrangeBasis basis(rule.nodes);
  DiffMatrix diff = diff_matrix(basis);
  auto left = basis.basis_values(-1.0);
  auto right = basis.basis_values(1.0);
  return ReferenceElement{std::move(rule), std::move(basis), std::move(diff), std::move(left),
                          std::move(right)};
}

const std::vector<ReferenceElement>& reference_table() {
  static const std::vector<ReferenceElement> table = [] {
    std::vector<ReferenceElement> t;
    t.reserve(kMaxCachedDegree + 1);
    for (int p = 0; p <= kMaxCachedDegree; ++p) t.push_back(build_reference(p));
    return t;
  }();
  return table;
}

}  // namespace

const ReferenceElement& reference_element(int p) {
  if (p < 0 || p > kMaxCachedDegree) {
    throw std::out_of_range("reference_element: degree " + std::to_string(p) +
                            " outside cached range [0, " + std::to_string(kMaxCachedDegree) + "]");
  }
  return reference_table()[static_cast<std::size_t>(p)];
}

}  // namespace padapt
