#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "padapt/analytic.hpp"
#include "padapt/dgsem.hpp"
#include "padapt/quadrature.hpp"

using namespace padapt;

namespace {

double max_diff(const MeshState& a, const MeshState& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t i = 0; i < a.elements[k].values.size(); ++i) {
      m = std::max(m, std::abs(a.elements[k].values[i] - b.elements[k].values[i]));
    }
  }
  return m;
}

MeshState mixed_mesh(int K) {
  MeshState mesh = make_uniform_mesh(K, 3);
  for (int k = 1; k < K; k += 2) {
    auto& el = mesh.elements[static_cast<std::size_t>(k)];
    el.p = 6;
    el.values.clear();
    for (double x : reference_element(6).rule.nodes) el.values.push_back(initial_condition(el.map(x)));
  }
  return mesh;
}

}  // namespace

TEST_CASE("roe_flux: consistency and upwinding") {
  for (double u : {-3.0, -0.5, 0.0, 1.0, 2.5}) CHECK(roe_flux(u, u) == flux(u));
  CHECK(std::abs(roe_flux(2.0, 1.0) - flux(2.0)) < 1e-15);
  CHECK(std::abs(roe_flux(-2.0, -1.0) - flux(-1.0)) < 1e-15);
}

TEST_CASE("make_uniform_mesh: samples the initial condition exactly") {
  const auto mesh = make_uniform_mesh(8, 4);
  REQUIRE(mesh.size() == 8);
  CHECK(mesh.total_nodes() == 40);
  CHECK(mesh.time == 0.0);
  for (const auto& el : mesh.elements) {
    CHECK(el.jacobian() == doctest::Approx(1.0 / 16.0));
    const auto x = el.node_coordinates();
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(el.values[i] == initial_condition(x[i]));
  }
  CHECK(mesh.elements.front().x_left == 0.0);
  CHECK(mesh.elements.back().x_right == 1.0);
  CHECK_NOTHROW(validate_mesh(mesh));
}

TEST_CASE("make_uniform_mesh / validate_mesh: reject malformed input") {
  CHECK_THROWS_AS(make_uniform_mesh(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_mesh(4, -1), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_mesh(4, 21), std::invalid_argument);
  auto mesh = make_uniform_mesh(4, 3);
  mesh.elements[2].values.pop_back();
  CHECK_THROWS_AS(validate_mesh(mesh), std::invalid_argument);
  mesh = make_uniform_mesh(4, 3);
  mesh.elements[1].x_right = 0.3;
  CHECK_THROWS_AS(validate_mesh(mesh), std::invalid_argument);
}

TEST_CASE("compute_rhs: zero for a constant state") {
  const auto mesh = make_uniform_mesh(5, 4, [](double) { return 2.0; });
  for (const auto& r : compute_rhs(mesh)) {
    for (double v : r) CHECK(std::abs(v) <= 1e-12);
  }
}

TEST_CASE("compute_rhs: converges to -u u_x for the smooth initial condition") {
  const auto mesh = make_uniform_mesh(8, 8);
  const auto rhs = compute_rhs(mesh);
  double err = 0.0;
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const auto x = mesh.elements[k].node_coordinates();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double exact = -initial_condition(x[i]) * 2.0 * M_PI * std::cos(2.0 * M_PI * x[i]);
      err = std::max(err, std::abs(rhs[k][i] - exact));
    }
  }
  CHECK(err < 1e-3);
}

TEST_CASE("euler_step: constant state is a fixed point") {
  const auto mesh = make_uniform_mesh(6, 5, [](double) { return 2.0; });
  const auto next = euler_step(mesh, 1e-3);
  CHECK(max_diff(mesh, next) <= 1e-12);
  CHECK(next.time == doctest::Approx(1e-3));
}

TEST_CASE("euler_step: equals values + dt * rhs") {
  const auto mesh = make_uniform_mesh(4, 3);
  const auto rhs = compute_rhs(mesh);
  const double dt = 1e-4;
  const auto next = euler_step(mesh, dt);
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    for (std::size_t i = 0; i < rhs[k].size(); ++i) {
      CHECK(next.elements[k].values[i] == mesh.elements[k].values[i] + dt * rhs[k][i]);
    }
  }
}

TEST_CASE("euler_step: two half steps vs one full step differ by O(dt^2)") {
  const auto mesh = make_uniform_mesh(8, 4);
  const auto full = euler_step(mesh, 1e-3);
  const auto half = euler_step(euler_step(mesh, 5e-4), 5e-4);
  const double d = max_diff(full, half);
  CHECK(d < 1e-3);
  // Halving dt again shrinks the gap by about four.
  const auto full2 = euler_step(mesh, 5e-4);
  const auto half2 = euler_step(euler_step(mesh, 2.5e-4), 2.5e-4);
  const double ratio = d / max_diff(full2, half2);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("euler_step: conserves mass per step on uniform and mixed meshes") {
  for (const auto& mesh0 : {make_uniform_mesh(8, 4), mixed_mesh(8)}) {
    const double m0 = total_mass(mesh0);
    const auto m1 = total_mass(euler_step(mesh0, 1e-5));
    CHECK(std::abs(m1 - m0) / std::abs(m0) <= 1e-11);
  }
}

TEST_CASE("euler_step: detects blow-up and non-finite values") {
  auto mesh = make_uniform_mesh(4, 3);
  mesh.elements[1].values[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(euler_step_inplace(mesh, 1e-5), SolverInstability);

  // Far too large a step for p = 6 on 16 elements.
  SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 0.12;
  try {
    simulate_uniform(16, 6, cfg);
    FAIL("expected SolverInstability");
  } catch (const SolverInstability& e) {
    CHECK(e.last_stable_time() >= 0.0);
    CHECK(e.last_stable_time() < 0.12);
  }
}

TEST_CASE("plan_steps: shortens the final step") {
  auto plan = plan_steps(0.0, 0.12, 1e-5);
  CHECK(plan.steps == 12000);
  CHECK(plan.last_dt == doctest::Approx(1e-5));
  plan = plan_steps(0.0, 0.105, 0.01);
  CHECK(plan.steps == 11);
  CHECK(plan.last_dt == doctest::Approx(0.005));
  plan = plan_steps(0.0, 0.0, 0.01);
  CHECK(plan.steps == 0);
}

TEST_CASE("simulate_uniform: t_end = 0 returns the initial sampling") {
  SolverConfig cfg;
  cfg.t_end = 0.0;
  const auto mesh = simulate_uniform(8, 4, cfg);
  CHECK(mesh.time == 0.0);
  for (const auto& el : mesh.elements) {
    const auto x = el.node_coordinates();
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(el.values[i] == 2.0 + std::sin(2.0 * M_PI * x[i]));
  }
  CHECK(global_rmse(mesh) <= 1e-13);
}

TEST_CASE("simulate_uniform: hits t_end and calls the observer every step") {
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.0105;
  long long calls = 0;
  const auto mesh = simulate_uniform(4, 3, cfg, [&](const MeshState&, long long s) { calls = s; });
  CHECK(calls == 11);
  CHECK(std::abs(mesh.time - 0.0105) < 1e-15);
}

TEST_CASE("simulate_uniform: K=8 p=4 reference accuracy and mass") {
  SolverConfig cfg;
  const double m0 = total_mass(make_uniform_mesh(8, 4));
  const auto mesh = simulate_uniform(8, 4, cfg);
  CHECK(std::abs(mesh.time - 0.12) < 1e-12);
  const double rmse = global_rmse(mesh);
  CHECK(rmse > 5.15e-3 / 2.0);
  CHECK(rmse < 5.15e-3 * 2.0);
  CHECK(std::abs(total_mass(mesh) - m0) / m0 < 1e-10);
}

TEST_CASE("simulate_uniform: error decreases with p on 16 elements") {
  SolverConfig cfg;
  cfg.t_end = 0.12;
  double prev = 1.0;
  for (int p = 3; p <= 6; ++p) {
    const double r = global_rmse(simulate_uniform(16, p, cfg));
    CAPTURE(p);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("mixed-order mesh runs stably and conserves mass") {
  auto mesh = mixed_mesh(8);
  const double m0 = total_mass(mesh);
  for (int s = 0; s < 2000; ++s) euler_step_inplace(mesh, 1e-5);
  CHECK(std::abs(total_mass(mesh) - m0) / m0 < 1e-10);
  CHECK(global_rmse(mesh) < 1e-2);
  CHECK(average_order(mesh) == 4.5);
}

TEST_CASE("write_snapshot_csv: one row per node") {
  const auto mesh = make_uniform_mesh(2, 2);
  std::ostringstream os;
  write_snapshot_csv(os, mesh);
  const std::string s = os.str();
  CHECK(s.rfind("element_index,p,x,u\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 7);
}
