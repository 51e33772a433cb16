#include "elkin/kinematics.hpp"

#include <cmath>

namespace elkin {

namespace {

// Direct evaluation of Ry(b)*Rx(a)*Tx(r)*Rz(t)*Tz(d). With A = Ry(b)*Rx(a):
// R = A*Rz(t), translation = r*A.col(0) + d*A.col(2) (theta leaves its own
// z-axis invariant, so the d-offset direction is A.col(2)).
inline void dh_local(double d, double r, double alpha, double beta, double theta,
                     Transform& out) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double ct = std::cos(theta), st = std::sin(theta);

  Mat3 a;
  a << cb, sb * sa, sb * ca,
       0.0, ca, -sa,
       -sb, cb * sa, cb * ca;

  Mat3 rot;
  rot.col(0) = ct * a.col(0) + st * a.col(1);
  rot.col(1) = -st * a.col(0) + ct * a.col(1);
  rot.col(2) = a.col(2);
  out.linear() = rot;
  out.translation() = r * a.col(0) + d * a.col(2);
}

inline void dh_local_from(const DhLink& link, double d, double r, double alpha,
                          double beta, double theta, double q_value, Transform& out) {
  switch (link.joint) {
    case JointType::Revolute:
      theta += q_value;
      break;
    case JointType::Prismatic:
      d += q_value;
      break;
    case JointType::None:
      break;
  }
  dh_local(d, r, alpha, beta, theta, out);
}

}  // namespace

Transform dh_transform(const DhLink& link, double q_value) {
  Transform t = Transform::Identity();
  dh_local_from(link, link.d, link.r, link.alpha, link.beta, link.theta, q_value, t);
  return t;
}

Transform dh_transform(const DhLink& link, const DhParamSet& rho, int link_index,
                       double q_value) {
  Transform t = Transform::Identity();
  dh_local_from(link, rho(link_index, dh::kD), rho(link_index, dh::kR),
                rho(link_index, dh::kAlpha), rho(link_index, dh::kBeta),
                rho(link_index, dh::kTheta), q_value, t);
  return t;
}

void forward_kinematics_into(const RobotModel& model, const Configuration& q,
                             const DhParamSet& rho, FrameSet& frames) {
  const int n = model.n_links();
  if (rho.rows() != n) {
    throw ModelError("forward_kinematics: rho has " + std::to_string(rho.rows()) +
                     " rows for a model with " + std::to_string(n) + " links");
  }
  if (q.size() != model.n_joints()) {
    throw ModelError("forward_kinematics: configuration has " +
                     std::to_string(q.size()) + " entries, model expects " +
                     std::to_string(model.n_joints()));
  }
  frames.resize(n);

  Transform local = Transform::Identity();
  for (int i = 0; i < n; ++i) {
    const DhLink& link = model.links[i];
    const double qv = link.joint_index >= 0 ? q[link.joint_index] : 0.0;
    dh_local_from(link, rho(i, dh::kD), rho(i, dh::kR), rho(i, dh::kAlpha),
                  rho(i, dh::kBeta), rho(i, dh::kTheta), qv, local);
    if (link.parent < 0) {
      frames[i] = local;
    } else {
      frames[i] = frames[link.parent] * local;
    }
  }
}

FrameSet forward_kinematics(const RobotModel& model, const Configuration& q,
                            const DhParamSet& rho) {
  FrameSet frames;
  forward_kinematics_into(model, q, rho, frames);
  return frames;
}

void point_jacobian_into(const RobotModel& model, const FrameSet& frames,
                         int link, const Vec3& point_world, MatX& jacobian) {
  jacobian.setZero();
  for (int i = link; i >= 0; i = model.links[i].parent) {
    const DhLink& l = model.links[i];
    if (l.joint_index < 0) {
      continue;
    }
    const Vec3 axis = frames[i].linear().col(2);
    if (l.joint == JointType::Revolute) {
      jacobian.col(l.joint_index) = axis.cross(point_world - frames[i].translation());
    } else {
      jacobian.col(l.joint_index) = axis;
    }
  }
}

MatX position_jacobian(const RobotModel& model, const Configuration& q,
                       const DhParamSet& rho, int target_link) {
  if (target_link < 0 || target_link >= model.n_links()) {
    throw ModelError("position_jacobian: invalid target link");
  }
  FrameSet frames;
  forward_kinematics_into(model, q, rho, frames);
  MatX jac(3, model.n_joints());
  point_jacobian_into(model, frames, target_link, frames[target_link].translation(), jac);
  return jac;
}

}  // namespace elkin
