#include "elkin/equilibrium.hpp"

#include <cmath>
#include <sstream>

namespace elkin {

void gravity_torques_into(const RobotModel& model, const FrameSet& frames,
                          const Vec3& gravity, const std::vector<PointMass>& masses,
                          MatX& tau, TorqueWorkspace& ws) {
  const int n = model.n_links();
  if (static_cast<int>(frames.size()) != n) {
    throw ModelError("gravity_torques: frame count does not match the model");
  }
  tau.resize(n, 3);
  ws.subtree_mass.assign(n, 0.0);
  ws.subtree_moment.assign(n, Vec3::Zero());

  // Attach masses to their links (world positions), then accumulate the
  // aggregates bottom-up; topological sorting makes one reverse pass enough.
  for (const PointMass& m : masses) {
    if (m.link < 0 || m.link >= n) {
      throw ModelError("gravity_torques: mass attached to invalid link");
    }
    const Vec3 w = frames[m.link] * m.position;
    ws.subtree_mass[m.link] += m.mass;
    ws.subtree_moment[m.link] += m.mass * w;
  }
  for (int i = n - 1; i > 0; --i) {
    const int p = model.links[i].parent;
    if (p >= 0) {
      ws.subtree_mass[p] += ws.subtree_mass[i];
      ws.subtree_moment[p] += ws.subtree_moment[i];
    }
  }

  for (int i = 0; i < n; ++i) {
    const int p = model.links[i].parent;
    const double msum = ws.subtree_mass[i];
    if (msum == 0.0) {
      tau.row(i).setZero();
      continue;
    }
    // sum_j m_j (w_j - p_ref) x g  ==  (moment - msum * p_ref) x g
    if (p >= 0) {
      const Vec3 torque_xy = (ws.subtree_moment[i] - msum * frames[p].translation()).cross(gravity);
      tau(i, 0) = torque_xy.dot(frames[p].linear().col(0));
      tau(i, 1) = torque_xy.dot(frames[p].linear().col(1));
    } else {
      const Vec3 torque_xy = ws.subtree_moment[i].cross(gravity);
      tau(i, 0) = torque_xy.x();
      tau(i, 1) = torque_xy.y();
    }
    const Vec3 torque_z = (ws.subtree_moment[i] - msum * frames[i].translation()).cross(gravity);
    tau(i, 2) = torque_z.dot(frames[i].linear().col(2));
  }
}

LinkTorques gravity_torques(const RobotModel& model, const FrameSet& frames,
                            const Vec3& gravity) {
  LinkTorques out;
  TorqueWorkspace ws;
  gravity_torques_into(model, frames, gravity, model.masses, out.tau, ws);
  return out;
}

void apply_compliance_into(const DhParamSet& rho0, const ComplianceSet& compliance,
                           const MatX& tau, DhParamSet& rho) {
  if (rho0.rows() != compliance.c.rows() || rho0.rows() != tau.rows()) {
    throw ModelError("apply_compliance: dimension mismatch");
  }
  rho = rho0;
  rho.col(dh::kAlpha) += compliance.c.col(0).cwiseProduct(tau.col(0));
  rho.col(dh::kBeta) += compliance.c.col(1).cwiseProduct(tau.col(1));
  rho.col(dh::kTheta) += compliance.c.col(2).cwiseProduct(tau.col(2));
}

DhParamSet apply_compliance(const DhParamSet& rho0, const ComplianceSet& compliance,
                            const LinkTorques& torques) {
  DhParamSet rho;
  apply_compliance_into(rho0, compliance, torques.tau, rho);
  return rho;
}

EquilibriumSolver::EquilibriumSolver(const RobotModel& model)
    : model_(model), tcp_links_(model.tcp_links()) {}

void EquilibriumSolver::record_tcp(const SolverSettings& settings) {
  double delta = 0.0;
  for (std::size_t t = 0; t < tcp_links_.size(); ++t) {
    const Vec3 p = frames_[tcp_links_[t]].translation();
    if (!first_record_) {
      delta = std::max(delta, (p - last_tcp_[t]).norm());
    }
    if (last_tcp_.size() <= t) {
      last_tcp_.push_back(p);
    } else {
      last_tcp_[t] = p;
    }
  }
  if (settings.record_tcp_history) {
    tcp_history_.push_back(last_tcp_);
  }
  if (first_record_) {
    first_record_ = false;
  } else {
    tcp_deltas_.push_back(delta);
  }
}

const DhParamSet& EquilibriumSolver::solve(const Configuration& q,
                                           const DhParamSet& rho0,
                                           const ComplianceSet& compliance,
                                           const std::vector<PointMass>& masses,
                                           const SolverSettings& settings,
                                           const DhParamSet* warm_start) {
  if (!(settings.lambda > 0.0 && settings.lambda <= 1.0)) {
    throw ModelError("solve_equilibrium: lambda must be in (0, 1]");
  }
  if (!(settings.tol > 0.0) || settings.max_iter < 1) {
    throw ModelError("solve_equilibrium: invalid tolerance or iteration cap");
  }

  trace_.clear();
  tcp_deltas_.clear();
  tcp_history_.clear();
  last_tcp_.clear();
  first_record_ = true;
  iterations_ = 0;

  double lambda = settings.lambda;
  rho_ = warm_start != nullptr ? *warm_start : rho0;
  forward_kinematics_into(model_, q, rho_, frames_);
  record_tcp(settings);

  bool converged = false;
  for (int n = 1; n <= settings.max_iter; ++n) {
    gravity_torques_into(model_, frames_, model_.gravity, masses, tau_, ws_);
    apply_compliance_into(rho0, compliance, tau_, target_);
    const double res = (target_ - rho_).cwiseAbs().maxCoeff();
    trace_.push_back(res);
    iterations_ = n;

    const bool stalled = settings.stall_floor > 0.0 && res < settings.stall_floor &&
                         trace_.size() >= 2 && res >= trace_[trace_.size() - 2];
    if (res <= settings.tol || stalled) {
      rho_ = target_;  // full step; the residual at the target is smaller still
      forward_kinematics_into(model_, q, rho_, frames_);
      record_tcp(settings);
      converged = true;
      break;
    }

    if (settings.adaptive_lambda && trace_.size() >= 3) {
      const std::size_t k = trace_.size();
      if (trace_[k - 1] > trace_[k - 2] && trace_[k - 2] > trace_[k - 3]) {
        lambda = std::max(0.5 * lambda, settings.lambda_floor);
      }
    }

    rho_ += lambda * (target_ - rho_);
    forward_kinematics_into(model_, q, rho_, frames_);
    record_tcp(settings);
  }
  lambda_final_ = lambda;

  if (!converged) {
    std::ostringstream msg;
    msg << "torque equilibrium did not converge within " << settings.max_iter
        << " iterations (last residual " << (trace_.empty() ? 0.0 : trace_.back())
        << " rad, lambda " << lambda << ")";
    throw SolverError(msg.str(), trace_);
  }

  // Verification pass: residual of the implicit equation at rho*.
  gravity_torques_into(model_, frames_, model_.gravity, masses, tau_, ws_);
  apply_compliance_into(rho0, compliance, tau_, target_);
  residual_ = (target_ - rho_).cwiseAbs().maxCoeff();
  return rho_;
}

EquilibriumResult solve_equilibrium(const RobotModel& model, const Configuration& q,
                                    const DhParamSet& rho0,
                                    const ComplianceSet& compliance,
                                    const std::vector<PointMass>& masses,
                                    const SolverSettings& settings,
                                    const DhParamSet* warm_start) {
  EquilibriumSolver solver(model);
  solver.solve(q, rho0, compliance, masses, settings, warm_start);
  EquilibriumResult out;
  out.rho_star = solver.rho_star();
  out.frames = solver.frames();
  out.iterations = solver.iterations();
  out.residual = solver.residual();
  out.lambda_final = solver.lambda_final();
  out.per_iteration_tcp_delta = solver.tcp_deltas();
  out.tcp_history = solver.tcp_history();
  return out;
}

EquilibriumResult solve_equilibrium(const RobotModel& model, const Configuration& q,
                                    const DhParamSet& rho0,
                                    const ComplianceSet& compliance,
                                    const SolverSettings& settings) {
  return solve_equilibrium(model, q, rho0, compliance, model.masses, settings, nullptr);
}

FrameSet elastic_forward_kinematics(const RobotModel& model, const Configuration& q,
                                    const CalibrationParams& params,
                                    const SolverSettings& settings) {
  EquilibriumSolver solver(model);
  solver.solve(q, params.rho0, params.compliance, params.masses, settings, nullptr);
  return solver.frames();
}

}  // namespace elkin
