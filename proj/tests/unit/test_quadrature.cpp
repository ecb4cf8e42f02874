#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "padapt/quadrature.hpp"

using namespace padapt;

namespace {

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

double exact_monomial_integral(int k) { return (k % 2 == 1) ? 0.0 : 2.0 / (k + 1); }

}  // namespace

TEST_CASE("gauss_legendre: low-order rules") {
  const auto r0 = gauss_legendre(0);
  REQUIRE(r0.nodes.size() == 1);
  CHECK(r0.nodes[0] == 0.0);
  CHECK(r0.weights[0] == 2.0);

  const auto r1 = gauss_legendre(1);
  REQUIRE(r1.nodes.size() == 2);
  CHECK(r1.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r1.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::abs(r1.weights[0] - 1.0) < 1e-15);
  CHECK(std::abs(r1.weights[1] - 1.0) < 1e-15);
}

TEST_CASE("gauss_legendre: p=5 integrates xi^10 exactly") {
  const auto rule = gauss_legendre(5);
  CHECK(std::abs(integrate(rule, [](double x) { return std::pow(x, 10); }) - 2.0 / 11.0) < 1e-12);
}

TEST_CASE("gauss_legendre: rejects negative degree") {
  CHECK_THROWS_AS(gauss_legendre(-1), std::invalid_argument);
}

TEST_CASE("gauss_legendre: structural invariants for p in [0, 20]") {
  for (int p = 0; p <= 20; ++p) {
    CAPTURE(p);
    const auto rule = gauss_legendre(p);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(p + 1));
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      CHECK(rule.nodes[i] > -1.0);
      CHECK(rule.nodes[i] < 1.0);
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
    const double sum = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
    CHECK(std::abs(sum - 2.0) < 1e-13);
  }
}

TEST_CASE("gauss_legendre: exact for every monomial of degree <= 2p+1, p in [0, 10]") {
  for (int p = 0; p <= 10; ++p) {
    const auto rule = gauss_legendre(p);
    for (int k = 0; k <= 2 * p + 1; ++k) {
      CAPTURE(p);
      CAPTURE(k);
      const double q = integrate(rule, [k](double x) { return std::pow(x, k); });
      CHECK(std::abs(q - exact_monomial_integral(k)) <= 1e-12);
    }
  }
}

TEST_CASE("LagrangeBasis: Kronecker delta and partition of unity") {
  for (int p : {1, 2, 4, 7, 10, 20}) {
    const LagrangeBasis basis(gauss_legendre(p).nodes);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto vals = basis.basis_values(basis.nodes()[j]);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(std::abs(vals[i] - (i == j ? 1.0 : 0.0)) <= 1e-13);
      }
    }
    for (double xi = -1.0; xi <= 1.0; xi += 0.0625) {
      const auto vals = basis.basis_values(xi);
      CHECK(std::abs(std::accumulate(vals.begin(), vals.end(), 0.0) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("lagrange_eval: constants, identity and a quadratic") {
  const LagrangeBasis b4(gauss_legendre(4).nodes);
  const std::vector<double> constant(5, 3.25);
  for (double xi : {-1.0, -0.3, 0.0, 0.71, 1.0}) {
    CHECK(std::abs(lagrange_eval(b4, constant, xi) - 3.25) < 1e-13);
    CHECK(std::abs(lagrange_eval(b4, b4.nodes(), xi) - xi) < 1e-13);
  }
  const LagrangeBasis b2(gauss_legendre(2).nodes);
  std::vector<double> sq;
  for (double x : b2.nodes()) sq.push_back(x * x);
  CHECK(std::abs(lagrange_eval(b2, sq, 0.5) - 0.25) < 1e-13);
}

TEST_CASE("lagrange_eval: returns stored value exactly at a node") {
  const LagrangeBasis b(gauss_legendre(6).nodes);
  const std::vector<double> v = {1.5, -2.0, 7.25, 0.0, 3.0, -1.0, 9.5};
  for (std::size_t j = 0; j < v.size(); ++j) CHECK(lagrange_eval(b, v, b.nodes()[j]) == v[j]);
}

TEST_CASE("lagrange_eval: rejects mismatched lengths") {
  const LagrangeBasis b(gauss_legendre(3).nodes);
  const std::vector<double> v(3, 1.0);
  CHECK_THROWS_AS(lagrange_eval(b, v, 0.0), std::invalid_argument);
}

TEST_CASE("interpolate_to: up-then-down round trip of a degree-4 polynomial") {
  const auto& n4 = gauss_legendre(4).nodes;
  const auto& n6 = gauss_legendre(6).nodes;
  auto poly = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x + 3.0 * x * x * x - x * x * x * x; };
  std::vector<double> v4;
  for (double x : n4) v4.push_back(poly(x));
  const auto up = interpolate_to(LagrangeBasis(n4), v4, n6);
  const auto down = interpolate_to(LagrangeBasis(n6), up, n4);
  for (std::size_t i = 0; i < v4.size(); ++i) CHECK(std::abs(down[i] - v4[i]) < 1e-12);

  const std::vector<double> constant(5, -0.75);
  for (double v : interpolate_to(LagrangeBasis(n4), constant, n6)) CHECK(std::abs(v + 0.75) < 1e-13);
}

TEST_CASE("interpolate_to: sin(2 pi xi) matches the Vandermonde oracle") {
  const auto& n4 = gauss_legendre(4).nodes;
  std::vector<double> v;
  for (double x : n4) v.push_back(std::sin(2.0 * M_PI * x));
  const LagrangeBasis b(n4);
  for (double xi : {0.0, 0.37, -0.9, 1.0}) {
    CAPTURE(xi);
    const double got = interpolate_to(b, v, std::vector<double>{xi})[0];
    CHECK(std::abs(got - oracle::vandermonde_eval(n4, v, xi)) < 1e-12);
  }
  // Frozen from an independent NumPy Vandermonde solve.
  CHECK(std::abs(lagrange_eval(b, v, 0.37) - (-0.14646177217554762)) < 1e-12);
}

TEST_CASE("interpolate_to: reproduces random polynomials between node sets") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int degree = static_cast<int>(gen() % 10);
    const int src_p = degree + static_cast<int>(gen() % 4);
    const int dst_p = degree + static_cast<int>(gen() % 4);
    std::vector<double> c(static_cast<std::size_t>(degree + 1));
    for (auto& x : c) x = coef(gen);
    const auto& src = gauss_legendre(src_p).nodes;
    const auto& dst = gauss_legendre(dst_p).nodes;
    std::vector<double> vals;
    for (double x : src) vals.push_back(oracle::horner(c, x));
    const auto out = interpolate_to(LagrangeBasis(src), vals, dst);
    for (std::size_t i = 0; i < dst.size(); ++i) CHECK(std::abs(out[i] - oracle::horner(c, dst[i])) <= 1e-11);
  }
}

TEST_CASE("diff_matrix: rows sum to zero, differentiates xi and xi^2") {
  for (int p = 1; p <= 12; ++p) {
    CAPTURE(p);
    const LagrangeBasis b(gauss_legendre(p).nodes);
    const auto d = diff_matrix(b);
    for (std::size_t i = 0; i < d.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < d.size(); ++j) row += d(i, j);
      CHECK(std::abs(row) <= 1e-12);
    }
    const auto dx = d.apply(b.nodes());
    for (double v : dx) CHECK(std::abs(v - 1.0) <= 1e-12);
    if (p >= 2) {
      std::vector<double> sq;
      for (double x : b.nodes()) sq.push_back(x * x);
      const auto dsq = d.apply(sq);
      for (std::size_t i = 0; i < dsq.size(); ++i) CHECK(std::abs(dsq[i] - 2.0 * b.nodes()[i]) <= 1e-12);
    }
  }
}

TEST_CASE("reference_element: cached table covers degrees 0..20") {
  CHECK(&reference_element(4) == &reference_element(4));
  CHECK(reference_element(20).rule.nodes.size() == 21);
  CHECK_THROWS_AS(reference_element(21), std::out_of_range);
  CHECK_THROWS_AS(reference_element(-1), std::out_of_range);
}
