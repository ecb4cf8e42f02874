#ifndef PADAPT_ADAPTATION_HPP_
#define PADAPT_ADAPTATION_HPP_

#include <functional>
#include <span>
#include <vector>

#include "padapt/dgsem.hpp"
#include "padapt/environment.hpp"
#include "padapt/ppo.hpp"

namespace padapt {

struct AdaptConfig {
  int adapt_interval_steps = 1000;
  double delta = 1.0;
  int p_min = kMinOrder;
  int p_max = kMaxOrder;
  double normalization_floor = 1e-12;
  /// Also adapt once before the first time step.
  bool adapt_at_start = false;

  void validate() const;
};

struct AdaptationEvent {
  double time = 0.0;
  int element_index = 0;
  int p_before = 0;
  int p_after = 0;
  double e_raw = 0.0;
  double e_scaled = 0.0;
  Action action = Action::Keep;
};

struct NormalizedElement {
  std::vector<double> values;
  bool flat = false;
};

/// Affine map of the values onto [0, 1]. Ranges below floor are reported as
/// flat and mapped to 0.5.
NormalizedElement normalize_element(std::span<const double> values, double floor = 1e-12);

struct ElementObservation {
  AgentObservation obs;  // (p, e_scaled)
  double e_raw = 0.0;
  double e_scaled = 0.0;
  bool flat = false;
};

/// State of a solver element from the normalized values. The mse is scaled by
/// delta before the log: e_scaled = -log10(min(delta * mse + 1e-10, 1)), so
/// delta > 1 makes the element look less resolved. Flat elements have mse 0.
ElementObservation observe_element(const ElementState& el, double delta, double floor = 1e-12);

/// Maps an observation to an action; must be safe to call concurrently.
using OrderPolicy = std::function<Action(const AgentObservation&)>;

/// Greedy (argmax) inference on frozen parameters.
OrderPolicy greedy_policy(PolicyParameters params);
OrderPolicy keep_policy();

struct AdaptedElement {
  ElementState element;
  AdaptationEvent event;
};

/// One agent decision for one element. When the order changes, the original
/// (not normalized) nodal values are interpolated onto the new Gauss nodes.
AdaptedElement adapt_element(const ElementState& el, const OrderPolicy& policy,
                             const AdaptConfig& cfg, double time = 0.0, int element_index = 0);

/// One left-to-right pass over every element.
std::vector<AdaptationEvent> adapt_mesh(MeshState& mesh, const OrderPolicy& policy, const AdaptConfig& cfg);

struct AdaptMetrics {
  double rmse = 0.0;
  double p_av = 0.0;
  double wall_seconds = 0.0;
};

struct AdaptedRun {
  MeshState mesh;
  std::vector<AdaptationEvent> events;
  AdaptMetrics metrics;
};

class AdaptationInstability : public SolverInstability {
 public:
  AdaptationInstability(const SolverInstability& cause, std::vector<AdaptationEvent> events)
      : SolverInstability(cause), events_(std::move(events)) {}
  const std::vector<AdaptationEvent>& events() const { return events_; }

 private:
  std::vector<AdaptationEvent> events_;
};

/// Uniform order-p0 start, explicit Euler steps, and an adaptation sweep every
/// adapt_interval_steps steps (not at the final time). Wall time covers the
/// whole loop including adaptation.
AdaptedRun run_adapted_simulation(int num_elements, int p0, const OrderPolicy& policy,
                                  const SolverConfig& solver_cfg, const AdaptConfig& adapt_cfg,
                                  const StepObserver& observer = {});

struct PointError {
  double x = 0.0;
  double error = 0.0;
};

/// |u_num - u_exact| at every Gauss node, element by element.
std::vector<PointError> pointwise_error_profile(const MeshState& mesh);

}  // namespace padapt

#endif  // PADAPT_ADAPTATION_HPP_
