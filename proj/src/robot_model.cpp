#include "elkin/robot_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace elkin {

Transform ClosureFrames::camera_from_base() const {
  Transform t = Transform::Identity();
  t.linear() = rotation_from_axis_angle(camera_axis_angle);
  t.translation() = camera_position;
  return t;
}

Mat3 rotation_from_axis_angle(const Vec3& aa) {
  const double angle = aa.norm();
  if (angle < 1e-14) {
    return Mat3::Identity();
  }
  return Eigen::AngleAxisd(angle, aa / angle).toRotationMatrix();
}

Vec3 axis_angle_from_rotation(const Mat3& rotation) {
  Eigen::AngleAxisd aa(rotation);
  double angle = aa.angle();
  Vec3 axis = aa.axis();
  // Eigen returns angle in [0, pi]; keep the canonical open chart.
  if (angle > M_PI) {
    angle = 2.0 * M_PI - angle;
    axis = -axis;
  }
  return angle * axis;
}

DhParamSet RobotModel::nominal_params() const {
  DhParamSet rho(n_links(), 5);
  for (int i = 0; i < n_links(); ++i) {
    const DhLink& l = links[i];
    rho(i, dh::kD) = l.d;
    rho(i, dh::kR) = l.r;
    rho(i, dh::kAlpha) = l.alpha;
    rho(i, dh::kBeta) = l.beta;
    rho(i, dh::kTheta) = l.theta;
  }
  return rho;
}

void RobotModel::finalize() {
  const int n = n_links();
  if (n == 0) {
    throw ModelError("model has no links");
  }

  std::set<int> joint_indices;
  int max_joint = -1;
  for (int i = 0; i < n; ++i) {
    const DhLink& l = links[i];
    if (l.parent >= i) {
      throw ModelError("link '" + l.name + "': parent index must be smaller than own index");
    }
    if (l.parent < -1) {
      throw ModelError("link '" + l.name + "': invalid parent index");
    }
    const bool bound = l.joint != JointType::None;
    if (bound != (l.joint_index >= 0)) {
      throw ModelError("link '" + l.name + "': joint_index must be present iff the link is joint-bound");
    }
    if (bound) {
      if (!joint_indices.insert(l.joint_index).second) {
        throw ModelError("duplicate joint index " + std::to_string(l.joint_index));
      }
      max_joint = std::max(max_joint, l.joint_index);
    }
  }
  n_joints_ = static_cast<int>(joint_indices.size());
  if (max_joint + 1 != n_joints_) {
    throw ModelError("joint indices must be dense 0..n-1");
  }

  if (compliance.c.size() == 0) {
    compliance = ComplianceSet::zero(n);
  }
  if (compliance.c.rows() != n || compliance.c.cols() != 3) {
    throw ModelError("compliance table must be n_links x 3");
  }
  if ((compliance.c.array() < 0.0).any()) {
    throw ModelError("model compliances must be non-negative");
  }

  for (const PointMass& m : masses) {
    if (m.link < 0 || m.link >= n) {
      throw ModelError("mass '" + m.name + "': invalid link index");
    }
    if (m.mass < 0.0 || !std::isfinite(m.mass)) {
      throw ModelError("mass '" + m.name + "': mass must be finite and >= 0");
    }
  }

  for (const Sphere& s : spheres.spheres) {
    if (s.link < 0 || s.link >= n) {
      throw ModelError("sphere with invalid link index");
    }
    if (s.radius <= 0.0) {
      throw ModelError("sphere radius must be positive");
    }
  }

  if (!rig.cameras.empty()) {
    if (rig.min_visible < 1 || rig.min_visible > static_cast<int>(rig.cameras.size())) {
      throw ModelError("camera rig: min_visible out of range");
    }
  }

  if (n_joints_ > 0 && limits.lower.size() > 0) {
    if (limits.lower.size() != n_joints_ || limits.upper.size() != n_joints_ ||
        limits.velocity.size() != n_joints_) {
      throw ModelError("joint limit vectors must match the joint count");
    }
    for (int j = 0; j < n_joints_; ++j) {
      if (!(limits.lower[j] < limits.upper[j])) {
        throw ModelError("joint limit lower bound must be below upper bound");
      }
      if (!(limits.velocity[j] > 0.0)) {
        throw ModelError("joint velocity limits must be positive");
      }
    }
  }

  if (tcp_right >= n || tcp_left >= n) {
    throw ModelError("TCP link index out of range");
  }

  link_of_joint_.assign(n_joints_, -1);
  children_.assign(n, {});
  mass_indices_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    if (links[i].joint_index >= 0) {
      link_of_joint_[links[i].joint_index] = i;
    }
    if (links[i].parent >= 0) {
      children_[links[i].parent].push_back(i);
    }
  }
  for (int k = 0; k < static_cast<int>(masses.size()); ++k) {
    mass_indices_[masses[k].link].push_back(k);
  }
}

bool RobotModel::is_ancestor_or_self(int ancestor, int link) const {
  for (int i = link; i >= 0; i = links[i].parent) {
    if (i == ancestor) {
      return true;
    }
  }
  return false;
}

std::vector<int> RobotModel::tcp_links() const {
  std::vector<int> out;
  if (tcp_right >= 0) out.push_back(tcp_right);
  if (tcp_left >= 0) out.push_back(tcp_left);
  return out;
}

}  // namespace elkin
