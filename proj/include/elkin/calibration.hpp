#pragma once

#include "elkin/equilibrium.hpp"
#include "elkin/parameters.hpp"
#include "elkin/robot_model.hpp"
#include "elkin/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace elkin {

/// One measurement: configuration plus the observed marker positions in the
/// camera world frame. At least one marker must be present.
struct Sample {
  Configuration q;
  std::optional<Vec3> y_right;
  std::optional<Vec3> y_left;
};

using Dataset = std::vector<Sample>;

struct MarkerPair {
  Vec3 right;
  Vec3 left;
};

/// Predicted marker positions y = T_c0 * f*(q)_{r,l} * p_{r,l}.
MarkerPair measure(const RobotModel& model, const Configuration& q,
                   const CalibrationParams& theta, const SolverSettings& settings);
MarkerPair measure(const RobotModel& model, const Configuration& q,
                   const CalibrationParams& theta, const SolverSettings& settings,
                   EquilibriumSolver& solver, const DhParamSet* warm_start);

/// Equilibrium settings used inside identification: tight tolerance with a
/// floating-point stall guard, so finite-difference Jacobians stay clean.
SolverSettings calibration_solver_settings();

struct ErrorStats {
  double mean = 0.0;
  double max = 0.0;
  double rms = 0.0;
  int count = 0;
};

struct Histogram {
  double bin_width = 5e-4;
  std::vector<long> counts;
};

struct EvaluationReport {
  ErrorStats right, left, combined;
  Histogram histogram;
  std::vector<double> residual_norms;  // per marker, dataset order
};

/// Residual statistics of theta on a dataset (Euclidean marker errors).
EvaluationReport evaluate(const RobotModel& model, const CalibrationParams& theta,
                          const Dataset& dataset, const SolverSettings& settings,
                          double histogram_bin = 5e-4);

/// MAP objective: sum_n |y_n - h(q_n, theta)|^2 / sigma_m^2 plus the prior
/// quadratic over theta's active parameters.
double objective(const RobotModel& model, const Dataset& dataset,
                 const CalibrationParams& theta, const Prior& prior,
                 const SolverSettings& settings);

struct LmOptions {
  int max_iterations = 100;
  double ftol = 1e-14;
  double xtol = 1e-11;
  double gtol = 0.0;          // disabled by default
  double mu0 = 1e-6;          // initial damping, relative to max diag(J^T J)
  double fd_step_rel = 1e-7;  // forward-difference step, relative to scale
  bool verbose = false;
};

struct LmTrace {
  int iterations = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> cost_trace;
};

/// Weighted residual stack of the MAP problem over the active parameters:
/// measurement rows (h - y)/sigma_m followed by prior rows (x - mean)/sigma.
/// Owns per-sample equilibrium warm starts; one instance per optimization.
class CalibrationProblem {
 public:
  CalibrationProblem(const RobotModel& model, const Dataset& dataset,
                     const Prior& prior, const SolverSettings& settings);

  int n_active() const { return static_cast<int>(active_idx_.size()); }
  int n_measurement_rows() const { return n_meas_rows_; }
  int n_residuals() const { return n_meas_rows_ + n_active(); }

  VecX initial() const;                 // active values of the prior mean
  const VecX& scales() const { return scales_; }

  /// Residual vector at x. With update_cache, the per-sample equilibrium
  /// solutions are kept as warm starts for subsequent evaluations (call this
  /// for accepted iterates only).
  void residuals(const VecX& x, VecX& r, bool update_cache);

  /// Forward-difference Jacobian (exact rows for the prior block). `r_base`
  /// must be residuals(x). Columns are evaluated in parallel.
  void jacobian(const VecX& x, const VecX& r_base, MatX& jac,
                double fd_step_rel = 1e-7);

  double cost(const VecX& x);
  CalibrationParams params_at(const VecX& x) const;

 private:
  void measurement_residuals(const CalibrationParams& params, VecX& r, int worker,
                             bool record_rho);

  const RobotModel& model_;
  const Dataset& dataset_;
  const Prior& prior_;
  SolverSettings settings_;
  CalibrationParams base_;  // prior mean incl. active mask
  std::vector<int> active_idx_;
  VecX scales_;
  VecX mean_active_;
  std::vector<int> row_offset_;  // residual row of each sample
  int n_meas_rows_ = 0;

  std::vector<EquilibriumSolver> solvers_;          // one per worker
  std::vector<CalibrationParams> worker_params_;    // one per worker
  std::vector<DhParamSet> warm_;                    // accepted rho* per sample
  std::vector<DhParamSet> candidate_;               // rho* of the last recorded eval
  bool warm_valid_ = false;
};

LmTrace lm_minimize(CalibrationProblem& problem, VecX& x, const LmOptions& options);

struct StartReport {
  int index = 0;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  ErrorStats test_combined;
};

struct CalibrationReport {
  CalibrationParams theta_star;
  EvaluationReport train;
  EvaluationReport test;
  std::vector<StartReport> starts;
  int best_start = 0;
  double multistart_spread_test_error = 0.0;  // max pairwise mean-error gap (m)
  double multistart_spread_params = 0.0;      // max pairwise scaled inf-distance
  LmTrace best_trace;
};

struct CalibrateOptions {
  int n_starts = 8;
  std::uint64_t seed = 0;
  LmOptions lm;
  SolverSettings equilibrium = calibration_solver_settings();
  double histogram_bin = 5e-4;
};

/// MAP identification with multistart. Start 0 is the prior mean when
/// n_starts == 1; otherwise all starts are drawn from the prior. The active
/// set is taken from prior.mean.active.
CalibrationReport calibrate(const RobotModel& model, const Dataset& train,
                            const Dataset& test, const Prior& prior,
                            const CalibrateOptions& options);

enum class AblationMode { AddOne, LeaveOneOut };

struct AblationRow {
  std::string name;
  CalibrationReport report;
};

/// Re-runs the calibration over nested parameter-group configurations
/// (closure -> joint offsets -> full DH -> joint -> transversal elasticity),
/// either adding one group at a time or leaving one out of the full model.
std::vector<AblationRow> ablation_study(const RobotModel& model, const Dataset& train,
                                        const Dataset& test, const Prior& prior,
                                        AblationMode mode,
                                        const CalibrateOptions& options);

struct SetSizePoint {
  int size = 0;
  int repeat = 0;
  ErrorStats test;
};

struct SetSizeCurve {
  std::vector<SetSizePoint> points;
  std::vector<int> sizes;
  std::vector<double> mean;    // mean of test mean error per size
  std::vector<double> stddev;  // std over repeats per size
};

/// Test error as a function of the calibration set size: draws `repeats`
/// random subsets per size, calibrates each (single start) and aggregates.
SetSizeCurve set_size_study(const RobotModel& model, const Dataset& train,
                            const Dataset& test, const Prior& prior,
                            const std::vector<int>& sizes, int repeats,
                            std::uint64_t seed, const CalibrateOptions& options);

}  // namespace elkin
