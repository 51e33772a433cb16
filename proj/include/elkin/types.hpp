#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>
#include <vector>

namespace elkin {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Rigid transform (orthonormal rotation + translation).
using Transform = Eigen::Isometry3d;

/// Joint values, one entry per bound joint: rad for revolute, m for prismatic.
using Configuration = Eigen::VectorXd;

/// DH parameters for all links, one row per link: [d, r, alpha, beta, theta].
using DhParamSet = Eigen::Matrix<double, Eigen::Dynamic, 5>;

namespace dh {
inline constexpr int kD = 0;
inline constexpr int kR = 1;
inline constexpr int kAlpha = 2;
inline constexpr int kBeta = 3;
inline constexpr int kTheta = 4;
}  // namespace dh

template <typename T>
using avector = std::vector<T, Eigen::aligned_allocator<T>>;

/// All link frames of one configuration, expressed in the base frame.
class FrameSet {
 public:
  FrameSet() = default;
  explicit FrameSet(std::size_t n) : frames_(n, Transform::Identity()) {}

  std::size_t size() const { return frames_.size(); }
  void resize(std::size_t n) { frames_.resize(n, Transform::Identity()); }

  Transform& operator[](std::size_t i) { return frames_[i]; }
  const Transform& operator[](std::size_t i) const { return frames_[i]; }

  Vec3 origin(std::size_t i) const { return frames_[i].translation(); }
  Vec3 axis_x(std::size_t i) const { return frames_[i].linear().col(0); }
  Vec3 axis_y(std::size_t i) const { return frames_[i].linear().col(1); }
  Vec3 axis_z(std::size_t i) const { return frames_[i].linear().col(2); }

 private:
  avector<Transform> frames_;
};

/// Rotation from an axis-angle vector (direction = axis, norm = angle).
Mat3 rotation_from_axis_angle(const Vec3& aa);

/// Axis-angle vector of a rotation, canonical chart with norm < pi.
Vec3 axis_angle_from_rotation(const Mat3& rotation);

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Inconsistent model description or dimension mismatch between inputs.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to converge; carries the residual trace.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<double> trace)
      : Error(what), residual_trace(std::move(trace)) {}
  std::vector<double> residual_trace;
};

/// Nonlinear least-squares failure across all starts.
class OptimizationError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling could not reach the requested sample count.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace elkin
