#include "padapt/dgsem.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#include "padapt/analytic.hpp"
#include "padapt/quadrature.hpp"

namespace padapt {

namespace {

// Weak-form operators for one degree:
//   volume(j, i) = w_i * D(i, j) / w_j
//   lift_left[j] = ell_j(-1) / w_j,  lift_right[j] = ell_j(+1) / w_j
struct WeakOperators {
  DiffMatrix volume;
  std::vector<double> lift_left;
  std::vector<double> lift_right;
  std::vector<double> left_trace;
  std::vector<double> right_trace;
};

const WeakOperators& weak_operators(int p) {
  static const std::vector<WeakOperators> table = [] {
    std::vector<WeakOperators> t;
    for (int q = 0; q <= kMaxCachedDegree; ++q) {
      const auto& ref = reference_element(q);
      const auto n = ref.rule.nodes.size();
      const auto& w = ref.rule.weights;
      WeakOperators ops{DiffMatrix(n), std::vector<double>(n), std::vector<double>(n), ref.left_trace,
                        ref.right_trace};
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) ops.volume(j, i) = w[i] * ref.diff(i, j) / w[j];
        ops.lift_left[j] = ref.left_trace[j] / w[j];
        ops.lift_right[j] = ref.right_trace[j] / w[j];
      }
      t.push_back(std::move(ops));
    }
    return t;
  }();
  return table.at(static_cast<std::size_t>(p));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Roe flux at the right face of every element (face e sits between e and e+1).
std::vector<double> face_fluxes(const MeshState& mesh) {
  const std::size_t k = mesh.size();
  std::vector<double> right_trace(k);
  std::vector<double> left_trace(k);
  for (std::size_t e = 0; e < k; ++e) {
    const auto& el = mesh.elements[e];
    const auto& ref = reference_element(el.p);
    left_trace[e] = dot(ref.left_trace, el.values);
    right_trace[e] = dot(ref.right_trace, el.values);
  }
  std::vector<double> fstar(k);
  for (std::size_t e = 0; e < k; ++e) {
    fstar[e] = roe_flux(right_trace[e], left_trace[(e + 1) % k]);
  }
  return fstar;
}

// du/dt for one element given the fluxes on its two faces.
template <typename Out>
void element_rhs(const ElementState& el, double f_left, double f_right, Out& out) {
  const auto& ops = weak_operators(el.p);
  const std::size_t n = el.values.size();
  std::array<double, kMaxCachedDegree + 1> f{};
  for (std::size_t i = 0; i < n; ++i) f[i] = flux(el.values[i]);
  const double inv_j = 1.0 / el.jacobian();
  for (std::size_t j = 0; j < n; ++j) {
    double vol = 0.0;
    for (std::size_t i = 0; i < n; ++i) vol += ops.volume(j, i) * f[i];
    out[j] = inv_j * (vol - (f_right * ops.lift_right[j] - f_left * ops.lift_left[j]));
  }
}

// Fixed-size kernels per degree, same arithmetic order as element_rhs.
template <std::size_t N>
double trace(const std::vector<double>& t, const double* u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) acc += t[i] * u[i];
  return acc;
}

template <std::size_t N>
bool update_element(const WeakOperators& ops, double* u, double inv_j, double f_left, double f_right, double dt) {
  std::array<double, N> f;
  std::array<double, N> du;
  for (std::size_t i = 0; i < N; ++i) f[i] = flux(u[i]);
  for (std::size_t j = 0; j < N; ++j) {
    double vol = 0.0;
    for (std::size_t i = 0; i < N; ++i) vol += ops.volume(j, i) * f[i];
    du[j] = inv_j * (vol - (f_right * ops.lift_right[j] - f_left * ops.lift_left[j]));
  }
  bool ok = true;
  for (std::size_t i = 0; i < N; ++i) {
    u[i] += dt * du[i];
    ok &= std::isfinite(u[i]) && std::abs(u[i]) <= kBlowUpLimit;
  }
  return ok;
}

struct StepKernel {
  double (*left)(const WeakOperators&, const double*);
  double (*right)(const WeakOperators&, const double*);
  bool (*update)(const WeakOperators&, double*, double, double, double, double);
};

template <std::size_t N>
constexpr StepKernel make_kernel() {
  return {[](const WeakOperators& ops, const double* u) { return trace<N>(ops.left_trace, u); },
          [](const WeakOperators& ops, const double* u) { return trace<N>(ops.right_trace, u); },
          &update_element<N>};
}

template <std::size_t... I>
constexpr std::array<StepKernel, sizeof...(I)> make_kernels(std::index_sequence<I...>) {
  return {make_kernel<I + 1>()...};
}

const StepKernel& kernel(int p) {
  static constexpr auto table = make_kernels(std::make_index_sequence<kMaxCachedDegree + 1>{});
  return table[static_cast<std::size_t>(p)];
}

}  // namespace

std::vector<double> ElementState::node_coordinates() const {
  const auto& nodes = reference_element(p).rule.nodes;
  std::vector<double> x;
  x.reserve(nodes.size());
  for (double xi : nodes) x.push_back(map(xi));
  return x;
}

int MeshState::total_nodes() const {
  int n = 0;
  for (const auto& el : elements) n += el.p + 1;
  return n;
}

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("SolverConfig: t_end must be >= 0");
}

MeshState make_uniform_mesh(int num_elements, int p, const InitialCondition& ic) {
  if (num_elements < 1) throw std::invalid_argument("make_uniform_mesh: need at least one element");
  if (p < 0 || p > kMaxCachedDegree) {
    throw std::invalid_argument("make_uniform_mesh: order " + std::to_string(p) + " out of range");
  }
  const InitialCondition& u0 = ic ? ic : InitialCondition(initial_condition);
  MeshState mesh;
  mesh.elements.reserve(static_cast<std::size_t>(num_elements));
  const double h = 1.0 / num_elements;
  for (int e = 0; e < num_elements; ++e) {
    ElementState el;
    el.p = p;
    el.x_left = e * h;
    el.x_right = (e + 1 == num_elements) ? 1.0 : (e + 1) * h;
    for (double x : el.node_coordinates()) el.values.push_back(u0(x));
    mesh.elements.push_back(std::move(el));
  }
  return mesh;
}

void validate_mesh(const MeshState& mesh) {
  if (mesh.elements.empty()) throw std::invalid_argument("mesh has no elements");
  constexpr double kTol = 1e-14;
  if (std::abs(mesh.elements.front().x_left) > kTol ||
      std::abs(mesh.elements.back().x_right - 1.0) > kTol) {
    throw std::invalid_argument("mesh does not span [0, 1]");
  }
  for (std::size_t e = 0; e < mesh.size(); ++e) {
    const auto& el = mesh.elements[e];
    if (!(el.jacobian() > 0.0)) throw std::invalid_argument("element with non-positive Jacobian");
    if (el.values.size() != static_cast<std::size_t>(el.p + 1)) {
      throw std::invalid_argument("element " + std::to_string(e) + " has wrong value count");
    }
    if (e > 0 && std::abs(mesh.elements[e - 1].x_right - el.x_left) > kTol) {
      throw std::invalid_argument("gap or overlap before element " + std::to_string(e));
    }
  }
}

std::vector<std::vector<double>> compute_rhs(const MeshState& mesh) {
  const std::size_t k = mesh.size();
  const auto fstar = face_fluxes(mesh);
  std::vector<std::vector<double>> rhs(k);
  for (std::size_t e = 0; e < k; ++e) {
    rhs[e].resize(mesh.elements[e].values.size());
    element_rhs(mesh.elements[e], fstar[(e + k - 1) % k], fstar[e], rhs[e]);
  }
  return rhs;
}

void euler_step_inplace(MeshState& mesh, double dt) {
  const std::size_t k = mesh.size();
  auto& els = mesh.elements;
  // Fluxes use pre-step traces: element e + 1 is still untouched when face e
  // is evaluated, and the periodic face is computed before anything moves.
  const double first_left = kernel(els.front().p).left(weak_operators(els.front().p), els.front().values.data());
  const auto& last = els.back();
  const double wrap_flux = roe_flux(kernel(last.p).right(weak_operators(last.p), last.values.data()), first_left);
  double f_left = wrap_flux;
  bool stable = true;
  for (std::size_t e = 0; e < k; ++e) {
    auto& el = els[e];
    const auto& ops = weak_operators(el.p);
    const StepKernel& kern = kernel(el.p);
    double f_right = wrap_flux;
    if (e + 1 < k) {
      const auto& next = els[e + 1];
      f_right = roe_flux(kern.right(ops, el.values.data()),
                         kernel(next.p).left(weak_operators(next.p), next.values.data()));
    }
    stable &= kern.update(ops, el.values.data(), 1.0 / el.jacobian(), f_left, f_right, dt);
    f_left = f_right;
  }
  const double previous = mesh.time;
  mesh.time += dt;
  if (!stable) {
    throw SolverInstability("solution blew up at t = " + std::to_string(mesh.time), previous);
  }
}

MeshState euler_step(const MeshState& mesh, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("euler_step: dt must be > 0");
  MeshState next = mesh;
  euler_step_inplace(next, dt);
  return next;
}

StepPlan plan_steps(double t_start, double t_end, double dt) {
  StepPlan plan;
  const double span = t_end - t_start;
  if (span <= 0.5 * dt * 1e-9) return plan;
  const double ratio = span / dt;
  auto full = static_cast<long long>(std::floor(ratio + 1e-9));
  const double rest = span - static_cast<double>(full) * dt;
  if (rest > 1e-9 * dt) {
    plan.steps = full + 1;
    plan.last_dt = rest;
  } else {
    plan.steps = full;
    plan.last_dt = dt;
  }
  return plan;
}

MeshState simulate_uniform(int num_elements, int p, const SolverConfig& config,
                           const StepObserver& observer) {
  config.validate();
  if (p < 1) throw std::invalid_argument("simulate_uniform: p must be >= 1");
  MeshState mesh = make_uniform_mesh(num_elements, p, config.initial_condition);
  const StepPlan plan = plan_steps(0.0, config.t_end, config.dt);
  for (long long s = 1; s <= plan.steps; ++s) {
    euler_step_inplace(mesh, s == plan.steps ? plan.last_dt : config.dt);
    if (observer) observer(mesh, s);
  }
  return mesh;
}

double total_mass(const MeshState& mesh) {
  double mass = 0.0;
  for (const auto& el : mesh.elements) {
    const auto& w = reference_element(el.p).rule.weights;
    mass += el.jacobian() * dot(w, el.values);
  }
  return mass;
}

double global_rmse(const MeshState& mesh) {
  const CharacteristicSolver exact;
  double sum = 0.0;
  int count = 0;
  for (const auto& el : mesh.elements) {
    const auto x = el.node_coordinates();
    const auto u = exact.exact_profile(x, mesh.time);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double d = el.values[i] - u[i];
      sum += d * d;
      ++count;
    }
  }
  return count > 0 ? std::sqrt(sum / count) : 0.0;
}

double average_order(const MeshState& mesh) {
  if (mesh.elements.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& el : mesh.elements) sum += el.p;
  return sum / static_cast<double>(mesh.size());
}

void write_snapshot_csv(std::ostream& os, const MeshState& mesh, bool header) {
  if (header) os << "element_index,p,x,u\n";
  const auto old_precision = os.precision(17);
  for (std::size_t e = 0; e < mesh.size(); ++e) {
    const auto& el = mesh.elements[e];
    const auto x = el.node_coordinates();
    for (std::size_t i = 0; i < x.size(); ++i) {
      os << e << ',' << el.p << ',' << x[i] << ',' << el.values[i] << '\n';
    }
  }
  os.precision(old_precision);
}

}  // namespace padapt
