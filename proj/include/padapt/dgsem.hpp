#ifndef PADAPT_DGSEM_HPP_
#define PADAPT_DGSEM_HPP_

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace padapt {

/// One element of the 1D mesh: nodal values at the degree-p Gauss nodes.
struct ElementState {
  int p = 1;
  std::vector<double> values;
  double x_left = 0.0;
  double x_right = 1.0;

  double jacobian() const { return 0.5 * (x_right - x_left); }
  /// Physical coordinate of the reference point xi.
  double map(double xi) const { return x_left + (xi + 1.0) * jacobian(); }
  std::vector<double> node_coordinates() const;
};

/// Periodic mesh on [0, 1]; element K-1 neighbours element 0.
struct MeshState {
  std::vector<ElementState> elements;
  double time = 0.0;

  std::size_t size() const { return elements.size(); }
  int total_nodes() const;
};

using InitialCondition = std::function<double(double)>;

struct SolverConfig {
  double dt = 1e-5;
  double t_end = 0.12;
  InitialCondition initial_condition;  // empty -> 2 + sin(2 pi x)

  void validate() const;
};

/// Thrown when a nodal value becomes non-finite or exceeds kBlowUpLimit.
class SolverInstability : public std::runtime_error {
 public:
  SolverInstability(const std::string& what, double last_stable_time)
      : std::runtime_error(what), last_stable_time_(last_stable_time) {}
  double last_stable_time() const { return last_stable_time_; }

 private:
  double last_stable_time_;
};

inline constexpr double kBlowUpLimit = 1e6;

inline double flux(double u) { return 0.5 * u * u; }

/// Roe flux with Roe average (uL + uR) / 2.
inline double roe_flux(double u_left, double u_right) {
  const double a = 0.5 * (u_left + u_right);
  return 0.5 * (flux(u_left) + flux(u_right)) - 0.5 * (a < 0 ? -a : a) * (u_right - u_left);
}

/// Uniform K-element mesh at order p, sampled from ic at the Gauss nodes.
MeshState make_uniform_mesh(int num_elements, int p, const InitialCondition& ic = {});

/// Checks tiling of [0, 1], positive Jacobians and value counts.
void validate_mesh(const MeshState& mesh);

/// Per-element nodal du/dt from the DG weak form with Roe interface fluxes.
std::vector<std::vector<double>> compute_rhs(const MeshState& mesh);

MeshState euler_step(const MeshState& mesh, double dt);
/// In-place variant used by the time loops; throws SolverInstability.
void euler_step_inplace(MeshState& mesh, double dt);

/// Number of steps and the length of the final step needed to reach t_end
/// from t_start, shortening the last step if t_end is not a multiple of dt.
struct StepPlan {
  long long steps = 0;
  double last_dt = 0.0;
};
StepPlan plan_steps(double t_start, double t_end, double dt);

/// Optional per-step hook; called after each completed step with the step index (1-based).
using StepObserver = std::function<void(const MeshState&, long long)>;

MeshState simulate_uniform(int num_elements, int p, const SolverConfig& config,
                           const StepObserver& observer = {});

/// Sum over elements and nodes of J * w_i * u_i.
double total_mass(const MeshState& mesh);

/// Root-mean-square nodal error against the characteristic solution at mesh.time.
double global_rmse(const MeshState& mesh);

/// Mean element order.
double average_order(const MeshState& mesh);

/// Rows of (element_index, p, x, u); header written when requested.
void write_snapshot_csv(std::ostream& os, const MeshState& mesh, bool header = true);

}  // namespace padapt

#endif  // PADAPT_DGSEM_HPP_
