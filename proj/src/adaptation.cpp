#include "padapt/adaptation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "padapt/analytic.hpp"
#include "padapt/quadrature.hpp"

namespace padapt {

void AdaptConfig::validate() const {
  if (adapt_interval_steps < 1) throw std::invalid_argument("AdaptConfig: adapt_interval_steps must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("AdaptConfig: delta must be > 0");
  if (p_min < 2 || p_max < p_min || p_max > kMaxCachedDegree) {
    throw std::invalid_argument("AdaptConfig: invalid order bounds");
  }
}

NormalizedElement normalize_element(std::span<const double> values, double floor) {
  NormalizedElement out;
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range >= floor)) {
    out.values.assign(values.size(), 0.5);
    out.flat = true;
    return out;
  }
  out.values.reserve(values.size());
  for (double v : values) out.values.push_back((v - *lo) / range);
  return out;
}

ElementObservation observe_element(const ElementState& el, double delta, double floor) {
  ElementObservation out;
  const NormalizedElement norm = normalize_element(el.values, floor);
  out.flat = norm.flat;
  const double mse = norm.flat ? 0.0 : state_mse(norm.values, el.p);
  out.e_raw = -std::log10(std::min(mse + 1e-10, 1.0));
  out.e_scaled = std::clamp(-std::log10(std::min(delta * mse + 1e-10, 1.0)), 0.0, 10.0);
  out.obs = {el.p, out.e_scaled};
  return out;
}

OrderPolicy greedy_policy(PolicyParameters params) {
  auto shared = std::make_shared<const PolicyParameters>(std::move(params));
  return [shared](const AgentObservation& obs) {
    return greedy_action(actor_logits(*shared, obs));
  };
}

OrderPolicy keep_policy() {
  return [](const AgentObservation&) { return Action::Keep; };
}

AdaptedElement adapt_element(const ElementState& el, const OrderPolicy& policy,
                             const AdaptConfig& cfg, double time, int element_index) {
  const ElementObservation seen = observe_element(el, cfg.delta, cfg.normalization_floor);
  const Action action = policy(seen.obs);
  const int p_after = apply_action(el.p, action, cfg.p_min, cfg.p_max);
  AdaptedElement out{el, {time, element_index, el.p, p_after, seen.e_raw, seen.e_scaled, action}};
  if (p_after != el.p) {
    out.element.values = interpolate_to(reference_element(el.p).basis, el.values,
                                        reference_element(p_after).rule.nodes);
    out.element.p = p_after;
  }
  return out;
}

std::vector<AdaptationEvent> adapt_mesh(MeshState& mesh, const OrderPolicy& policy,
                                        const AdaptConfig& cfg) {
  std::vector<AdaptationEvent> events;
  events.reserve(mesh.size());
  for (std::size_t e = 0; e < mesh.size(); ++e) {
    auto adapted = adapt_element(mesh.elements[e], policy, cfg, mesh.time, static_cast<int>(e));
    mesh.elements[e] = std::move(adapted.element);
    events.push_back(adapted.event);
  }
  return events;
}

AdaptedRun run_adapted_simulation(int num_elements, int p0, const OrderPolicy& policy,
                                  const SolverConfig& solver_cfg, const AdaptConfig& adapt_cfg,
                                  const StepObserver& observer) {
  solver_cfg.validate();
  adapt_cfg.validate();
  if (!policy) throw std::invalid_argument("run_adapted_simulation: no policy");
  AdaptedRun run;
  run.mesh = make_uniform_mesh(num_elements, p0, solver_cfg.initial_condition);
  const StepPlan plan = plan_steps(0.0, solver_cfg.t_end, solver_cfg.dt);

  const auto start = std::chrono::steady_clock::now();
  auto sweep = [&] {
    auto events = adapt_mesh(run.mesh, policy, adapt_cfg);
    run.events.insert(run.events.end(), events.begin(), events.end());
  };
  try {
    if (adapt_cfg.adapt_at_start && plan.steps > 0) sweep();
    for (long long s = 1; s <= plan.steps; ++s) {
      euler_step_inplace(run.mesh, s == plan.steps ? plan.last_dt : solver_cfg.dt);
      if (s % adapt_cfg.adapt_interval_steps == 0 && s < plan.steps) sweep();
      if (observer) observer(run.mesh, s);
    }
  } catch (const SolverInstability& e) {
    throw AdaptationInstability(e, std::move(run.events));
  }
  const auto stop = std::chrono::steady_clock::now();

  run.metrics.wall_seconds = std::chrono::duration<double>(stop - start).count();
  run.metrics.rmse = global_rmse(run.mesh);
  run.metrics.p_av = average_order(run.mesh);
  return run;
}

std::vector<PointError> pointwise_error_profile(const MeshState& mesh) {
  const CharacteristicSolver exact;
  std::vector<PointError> out;
  out.reserve(static_cast<std::size_t>(mesh.total_nodes()));
  for (const auto& el : mesh.elements) {
    const auto x = el.node_coordinates();
    const auto u = exact.exact_profile(x, mesh.time);
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back({x[i], std::abs(el.values[i] - u[i])});
  }
  return out;
}

}  // namespace padapt
