#pragma once

#include "elkin/robot_model.hpp"
#include "elkin/types.hpp"

namespace elkin {

/// Local transform of one link:
/// Rot_y(beta) * Rot_x(alpha) * Trans_x(r) * Rot_z(theta') * Trans_z(d')
/// with theta' = theta + q for revolute and d' = d + q for prismatic links.
Transform dh_transform(const DhLink& link, double q_value);

/// Same, with the five DH values taken from `rho` instead of the link.
Transform dh_transform(const DhLink& link, const DhParamSet& rho, int link_index,
                       double q_value);

/// Frames of all links in the base frame; frames[i] = frames[parent(i)] * T_i.
FrameSet forward_kinematics(const RobotModel& model, const Configuration& q,
                            const DhParamSet& rho);

/// Allocation-free variant for hot loops. `frames` is resized as needed.
void forward_kinematics_into(const RobotModel& model, const Configuration& q,
                             const DhParamSet& rho, FrameSet& frames);

/// d(world position of target-link origin)/dq with rho held constant.
/// Revolute columns are z_j x (p - p_j), prismatic columns z_j; joints that
/// are not on the path from the base to the target contribute zero columns.
MatX position_jacobian(const RobotModel& model, const Configuration& q,
                       const DhParamSet& rho, int target_link);

/// Jacobian of an arbitrary world-frame point rigidly attached to `link`,
/// computed from already-available frames. J must be 3 x n_joints.
void point_jacobian_into(const RobotModel& model, const FrameSet& frames,
                         int link, const Vec3& point_world, MatX& jacobian);

}  // namespace elkin
