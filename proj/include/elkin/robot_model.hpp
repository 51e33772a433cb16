#pragma once

#include "elkin/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace elkin {

enum class JointType { None, Revolute, Prismatic };

/// One link of the kinematic tree with its nominal 5-parameter DH transform
/// T = Rot_y(beta) * Rot_x(alpha) * Trans_x(r) * Rot_z(theta') * Trans_z(d'),
/// where the bound joint value is added to theta (revolute) or d (prismatic).
struct DhLink {
  std::string name;
  double d = 0.0;      // m
  double r = 0.0;      // m
  double alpha = 0.0;  // rad
  double beta = 0.0;   // rad
  double theta = 0.0;  // rad
  JointType joint = JointType::None;
  int joint_index = -1;  // index into the configuration vector, -1 if unbound
  int parent = -1;       // parent link index, -1 = base frame
};

/// Point mass attached to a link, position expressed in that link's frame.
struct PointMass {
  std::string name;
  double mass = 0.0;  // kg
  Vec3 position = Vec3::Zero();
  int link = -1;
};

/// Per-link rotational compliances [rad/(N*m)] about the axes of the
/// rotational DH parameters: column 0 -> alpha (x), 1 -> beta (y),
/// 2 -> theta (z). Translational parameters carry no compliance.
struct ComplianceSet {
  MatX c;  // n_links x 3

  static ComplianceSet zero(int n_links) {
    ComplianceSet out;
    out.c = MatX::Zero(n_links, 3);
    return out;
  }

  ComplianceSet scaled(double factor) const {
    ComplianceSet out;
    out.c = c * factor;
    return out;
  }

  bool is_zero() const { return c.size() == 0 || c.isZero(0.0); }
  int n_links() const { return static_cast<int>(c.rows()); }
};

struct Sphere {
  int link = -1;
  Vec3 center = Vec3::Zero();  // in link frame
  double radius = 0.0;
};

/// Union-of-spheres body approximation, used for self-collision and
/// marker-visibility ray tests.
struct SphereModel {
  std::vector<Sphere> spheres;
};

/// Fixed tracking cameras, positions in the robot base frame.
struct CameraRig {
  std::vector<Vec3> cameras;
  int min_visible = 4;
};

struct JointLimits {
  VecX lower;     // rad or m
  VecX upper;     // rad or m
  VecX velocity;  // rad/s or m/s, used by the pose-ordering metric
};

/// Frames that close the measurement loop: the camera world frame relative
/// to the robot base (position + axis-angle orientation) and the marker
/// offsets in the two TCP frames.
struct ClosureFrames {
  Vec3 camera_position = Vec3::Zero();
  Vec3 camera_axis_angle = Vec3::Zero();
  Vec3 marker_right = Vec3::Zero();
  Vec3 marker_left = Vec3::Zero();

  /// T_c0: maps base-frame coordinates into camera-world coordinates.
  Transform camera_from_base() const;
};

/// Kinematic tree with mass model, reference compliances, collision spheres,
/// camera rig and limits. Links are topologically sorted (parent < child).
class RobotModel {
 public:
  std::string name;
  std::vector<DhLink> links;
  std::vector<PointMass> masses;
  ComplianceSet compliance;  // reference values
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
  int tcp_right = -1;
  int tcp_left = -1;
  ClosureFrames closure;  // nominal closure frames
  SphereModel spheres;
  CameraRig rig;
  JointLimits limits;

  int n_links() const { return static_cast<int>(links.size()); }
  int n_joints() const { return n_joints_; }

  /// Nominal DH parameters as stored on the links, one row per link.
  DhParamSet nominal_params() const;

  /// Checks invariants and builds the lookup caches. Throws ModelError.
  void finalize();

  const std::vector<int>& link_of_joint() const { return link_of_joint_; }
  const std::vector<int>& children_of(int link) const { return children_[link]; }
  const std::vector<int>& masses_of(int link) const { return mass_indices_[link]; }

  /// True iff `ancestor` is `link` or an ancestor of `link` in the tree.
  bool is_ancestor_or_self(int ancestor, int link) const;

  std::vector<int> tcp_links() const;

 private:
  int n_joints_ = 0;
  std::vector<int> link_of_joint_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<int>> mass_indices_;
};

}  // namespace elkin
