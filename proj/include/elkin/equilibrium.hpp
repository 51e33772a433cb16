#pragma once

#include "elkin/kinematics.hpp"
#include "elkin/parameters.hpp"
#include "elkin/robot_model.hpp"
#include "elkin/types.hpp"

#include <vector>

namespace elkin {

/// Gravity torques acting on each link [N m]: tau_x and tau_y about the
/// parent frame's x/y axes through the parent origin, tau_z about the link's
/// own z axis through its origin (the axes the rotational DH parameters
/// alpha, beta, theta act on).
struct LinkTorques {
  MatX tau;  // n_links x 3
};

struct SolverSettings {
  double lambda = 1.0;          // damping weight of the fixed-point update
  double tol = 1e-9;            // rad, on max |rho_n - rho_{n-1}|
  int max_iter = 200;
  bool adaptive_lambda = true;  // halve lambda after two residual increases
  double lambda_floor = 0.05;
  double stall_floor = 0.0;     // accept once the residual stops improving
                                // below this level (0 = disabled)
  bool record_tcp_history = false;
};

struct EquilibriumResult {
  DhParamSet rho_star;
  FrameSet frames;
  int iterations = 0;
  double residual = 0.0;  // max |rho* - rho(rho0, C, tau(F(q, rho*)))|
  double lambda_final = 1.0;
  std::vector<double> per_iteration_tcp_delta;  // m, max over TCPs
  std::vector<avector<Vec3>> tcp_history;       // per iteration, per TCP
};

/// Scratch buffers for the subtree mass aggregation.
struct TorqueWorkspace {
  std::vector<double> subtree_mass;
  avector<Vec3> subtree_moment;  // sum of m_j * (world position of w_j)
};

/// Torques per link from the point-mass model under `gravity`: every mass
/// attached to a link contributes to that link and all of its ancestors.
void gravity_torques_into(const RobotModel& model, const FrameSet& frames,
                          const Vec3& gravity, const std::vector<PointMass>& masses,
                          MatX& tau, TorqueWorkspace& ws);

LinkTorques gravity_torques(const RobotModel& model, const FrameSet& frames,
                            const Vec3& gravity);

/// rho = rho0 + C * tau on the rotational parameters; d and r are unchanged.
void apply_compliance_into(const DhParamSet& rho0, const ComplianceSet& compliance,
                           const MatX& tau, DhParamSet& rho);

DhParamSet apply_compliance(const DhParamSet& rho0, const ComplianceSet& compliance,
                            const LinkTorques& torques);

/// Damped fixed-point solver for the implicit torque equilibrium
/// rho = rho(rho0, C, tau(F(q, rho), nu)). Reusable across calls; owns all
/// scratch buffers, so one instance per thread in concurrent code.
class EquilibriumSolver {
 public:
  explicit EquilibriumSolver(const RobotModel& model);

  /// Iterates rho_n = (1-lambda) rho_{n-1} + lambda rho(rho0, C, tau(...))
  /// from rho0 (or `warm_start`) until the undamped residual drops below
  /// settings.tol. Returns rho*; frames() afterwards holds F(q, rho*).
  /// Throws SolverError with the residual trace on non-convergence.
  const DhParamSet& solve(const Configuration& q, const DhParamSet& rho0,
                          const ComplianceSet& compliance,
                          const std::vector<PointMass>& masses,
                          const SolverSettings& settings,
                          const DhParamSet* warm_start = nullptr);

  const FrameSet& frames() const { return frames_; }
  const DhParamSet& rho_star() const { return rho_; }
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  double lambda_final() const { return lambda_final_; }
  const std::vector<double>& residual_trace() const { return trace_; }
  const std::vector<double>& tcp_deltas() const { return tcp_deltas_; }
  const std::vector<avector<Vec3>>& tcp_history() const { return tcp_history_; }

 private:
  void record_tcp(const SolverSettings& settings);

  const RobotModel& model_;
  std::vector<int> tcp_links_;
  FrameSet frames_;
  MatX tau_;
  DhParamSet rho_;
  DhParamSet target_;
  TorqueWorkspace ws_;
  avector<Vec3> last_tcp_;
  bool first_record_ = true;
  int iterations_ = 0;
  double residual_ = 0.0;
  double lambda_final_ = 1.0;
  std::vector<double> trace_;
  std::vector<double> tcp_deltas_;
  std::vector<avector<Vec3>> tcp_history_;
};

EquilibriumResult solve_equilibrium(const RobotModel& model, const Configuration& q,
                                    const DhParamSet& rho0,
                                    const ComplianceSet& compliance,
                                    const SolverSettings& settings);

EquilibriumResult solve_equilibrium(const RobotModel& model, const Configuration& q,
                                    const DhParamSet& rho0,
                                    const ComplianceSet& compliance,
                                    const std::vector<PointMass>& masses,
                                    const SolverSettings& settings,
                                    const DhParamSet* warm_start = nullptr);

/// f*(q) = f(q, rho*(q, rho0, C, nu)): frames at the torque equilibrium.
FrameSet elastic_forward_kinematics(const RobotModel& model, const Configuration& q,
                                    const CalibrationParams& params,
                                    const SolverSettings& settings);

}  // namespace elkin
