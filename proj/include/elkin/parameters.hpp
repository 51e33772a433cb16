#pragma once

#include "elkin/robot_model.hpp"
#include "elkin/types.hpp"

#include <cstdint>
#include <vector>

namespace elkin {

/// Parameter groups used by the identification and the ablation studies.
/// JointOffsets are the DH entries the bound joints act on (theta for
/// revolute, d for prismatic); DhOther is every remaining DH entry.
enum class ParamGroup {
  JointOffsets,
  DhOther,
  ComplianceTheta,
  ComplianceTransversal,
  Masses,
  Closure,
};

/// Full calibration parameter vector: geometric DH parameters, compliances,
/// point masses and the closure frames, plus a per-entry active mask that
/// selects which entries an optimizer may change.
///
/// Flat layout: [dh (n_links x 5, row-major by link) | compliance
/// (n_links x 3) | masses (4 each: m, wx, wy, wz) | closure (p_c, o_c,
/// p_r, p_l)].
class CalibrationParams {
 public:
  DhParamSet rho0;
  ComplianceSet compliance;
  std::vector<PointMass> masses;
  ClosureFrames closure;
  std::vector<std::uint8_t> active;  // size n_total()

  CalibrationParams() = default;

  /// Parameters as stored in the model file; mask all-inactive.
  static CalibrationParams nominal(const RobotModel& model);

  int n_links() const { return static_cast<int>(rho0.rows()); }
  int n_masses() const { return static_cast<int>(masses.size()); }
  int n_total() const { return 5 * n_links() + 3 * n_links() + 4 * n_masses() + 12; }
  int n_active() const;

  VecX flatten() const;
  void unflatten(const VecX& values);

  VecX active_values() const;
  void set_active_values(const VecX& values);
  std::vector<int> active_indices() const;

  void set_all_inactive();
  void set_group_active(const RobotModel& model, ParamGroup group, bool on);

  int index_dh(int link, int col) const { return 5 * link + col; }
  int index_compliance(int link, int col) const { return 5 * n_links() + 3 * link + col; }
  int index_mass(int mass, int comp) const {
    return 5 * n_links() + 3 * n_links() + 4 * mass + comp;
  }
  int index_closure(int comp) const {
    return 5 * n_links() + 3 * n_links() + 4 * n_masses() + comp;
  }
};

/// Gaussian prior for MAP identification: mean, per-parameter standard
/// deviations in the flat layout, and the measurement noise.
struct Prior {
  CalibrationParams mean;  // its active mask defines the default optimized set
  VecX sigma;              // full layout, > 0 where active
  double sigma_m = 5e-4;   // m
};

struct PriorSigmas {
  double length = 0.1;          // m        (d, r, positions)
  double angle = 0.2;           // rad      (alpha, beta, theta, o_c)
  double compliance = 1e-4;     // rad/(N m) == 0.1 rad/kNm
  double mass = 0.5;            // kg
  double mass_position = 0.05;  // m
};

/// Builds the default prior: mean = model nominal (compliance mean zeroed if
/// requested, matching a rigid nominal kinematics), per-class sigmas, and the
/// standard active set (all DH, both elasticity groups, closure; masses off).
Prior make_prior(const RobotModel& model, const PriorSigmas& sigmas,
                 double sigma_m, bool compliance_mean_zero);

}  // namespace elkin
