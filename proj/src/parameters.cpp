#include "elkin/parameters.hpp"

#include <algorithm>

namespace elkin {

CalibrationParams CalibrationParams::nominal(const RobotModel& model) {
  CalibrationParams p;
  p.rho0 = model.nominal_params();
  p.compliance = model.compliance;
  p.masses = model.masses;
  p.closure = model.closure;
  p.active.assign(p.n_total(), 0);
  return p;
}

int CalibrationParams::n_active() const {
  return static_cast<int>(std::count(active.begin(), active.end(), 1));
}

VecX CalibrationParams::flatten() const {
  VecX v(n_total());
  int k = 0;
  for (int i = 0; i < n_links(); ++i) {
    for (int c = 0; c < 5; ++c) {
      v[k++] = rho0(i, c);
    }
  }
  for (int i = 0; i < n_links(); ++i) {
    for (int c = 0; c < 3; ++c) {
      v[k++] = compliance.c(i, c);
    }
  }
  for (const PointMass& m : masses) {
    v[k++] = m.mass;
    v[k++] = m.position.x();
    v[k++] = m.position.y();
    v[k++] = m.position.z();
  }
  v.segment<3>(k) = closure.camera_position;
  v.segment<3>(k + 3) = closure.camera_axis_angle;
  v.segment<3>(k + 6) = closure.marker_right;
  v.segment<3>(k + 9) = closure.marker_left;
  return v;
}

void CalibrationParams::unflatten(const VecX& values) {
  if (values.size() != n_total()) {
    throw ModelError("CalibrationParams::unflatten: size mismatch");
  }
  int k = 0;
  for (int i = 0; i < n_links(); ++i) {
    for (int c = 0; c < 5; ++c) {
      rho0(i, c) = values[k++];
    }
  }
  for (int i = 0; i < n_links(); ++i) {
    for (int c = 0; c < 3; ++c) {
      compliance.c(i, c) = values[k++];
    }
  }
  for (PointMass& m : masses) {
    m.mass = values[k++];
    m.position.x() = values[k++];
    m.position.y() = values[k++];
    m.position.z() = values[k++];
  }
  closure.camera_position = values.segment<3>(k);
  closure.camera_axis_angle = values.segment<3>(k + 3);
  closure.marker_right = values.segment<3>(k + 6);
  closure.marker_left = values.segment<3>(k + 9);
}

std::vector<int> CalibrationParams::active_indices() const {
  std::vector<int> idx;
  idx.reserve(active.size());
  for (int i = 0; i < static_cast<int>(active.size()); ++i) {
    if (active[i]) {
      idx.push_back(i);
    }
  }
  return idx;
}

VecX CalibrationParams::active_values() const {
  const VecX full = flatten();
  const std::vector<int> idx = active_indices();
  VecX v(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    v[i] = full[idx[i]];
  }
  return v;
}

void CalibrationParams::set_active_values(const VecX& values) {
  const std::vector<int> idx = active_indices();
  if (values.size() != static_cast<Eigen::Index>(idx.size())) {
    throw ModelError("CalibrationParams::set_active_values: size mismatch");
  }
  VecX full = flatten();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    full[idx[i]] = values[i];
  }
  unflatten(full);
}

void CalibrationParams::set_all_inactive() {
  active.assign(n_total(), 0);
}

void CalibrationParams::set_group_active(const RobotModel& model, ParamGroup group,
                                         bool on) {
  if (static_cast<int>(active.size()) != n_total()) {
    active.assign(n_total(), 0);
  }
  const std::uint8_t v = on ? 1 : 0;
  switch (group) {
    case ParamGroup::JointOffsets:
      for (int i = 0; i < n_links(); ++i) {
        const DhLink& l = model.links[i];
        if (l.joint == JointType::Revolute) {
          active[index_dh(i, dh::kTheta)] = v;
        } else if (l.joint == JointType::Prismatic) {
          active[index_dh(i, dh::kD)] = v;
        }
      }
      break;
    case ParamGroup::DhOther:
      for (int i = 0; i < n_links(); ++i) {
        const DhLink& l = model.links[i];
        const int offset_col =
            l.joint == JointType::Revolute ? dh::kTheta
            : l.joint == JointType::Prismatic ? dh::kD
                                              : -1;
        for (int c = 0; c < 5; ++c) {
          if (c != offset_col) {
            active[index_dh(i, c)] = v;
          }
        }
      }
      break;
    case ParamGroup::ComplianceTheta:
      for (int i = 0; i < n_links(); ++i) {
        active[index_compliance(i, 2)] = v;
      }
      break;
    case ParamGroup::ComplianceTransversal:
      for (int i = 0; i < n_links(); ++i) {
        active[index_compliance(i, 0)] = v;
        active[index_compliance(i, 1)] = v;
      }
      break;
    case ParamGroup::Masses:
      for (int m = 0; m < n_masses(); ++m) {
        for (int c = 0; c < 4; ++c) {
          active[index_mass(m, c)] = v;
        }
      }
      break;
    case ParamGroup::Closure:
      for (int c = 0; c < 12; ++c) {
        active[index_closure(c)] = v;
      }
      break;
  }
}

Prior make_prior(const RobotModel& model, const PriorSigmas& sigmas,
                 double sigma_m, bool compliance_mean_zero) {
  Prior prior;
  prior.mean = CalibrationParams::nominal(model);
  if (compliance_mean_zero) {
    prior.mean.compliance = ComplianceSet::zero(model.n_links());
  }
  prior.sigma_m = sigma_m;

  CalibrationParams& p = prior.mean;
  prior.sigma = VecX::Zero(p.n_total());
  for (int i = 0; i < p.n_links(); ++i) {
    prior.sigma[p.index_dh(i, dh::kD)] = sigmas.length;
    prior.sigma[p.index_dh(i, dh::kR)] = sigmas.length;
    prior.sigma[p.index_dh(i, dh::kAlpha)] = sigmas.angle;
    prior.sigma[p.index_dh(i, dh::kBeta)] = sigmas.angle;
    prior.sigma[p.index_dh(i, dh::kTheta)] = sigmas.angle;
    for (int c = 0; c < 3; ++c) {
      prior.sigma[p.index_compliance(i, c)] = sigmas.compliance;
    }
  }
  for (int m = 0; m < p.n_masses(); ++m) {
    prior.sigma[p.index_mass(m, 0)] = sigmas.mass;
    for (int c = 1; c < 4; ++c) {
      prior.sigma[p.index_mass(m, c)] = sigmas.mass_position;
    }
  }
  for (int c = 0; c < 3; ++c) {
    prior.sigma[p.index_closure(c)] = sigmas.length;      // p_c
    prior.sigma[p.index_closure(3 + c)] = sigmas.angle;   // o_c
    prior.sigma[p.index_closure(6 + c)] = sigmas.length;  // p_r
    prior.sigma[p.index_closure(9 + c)] = sigmas.length;  // p_l
  }

  p.set_group_active(model, ParamGroup::JointOffsets, true);
  p.set_group_active(model, ParamGroup::DhOther, true);
  p.set_group_active(model, ParamGroup::ComplianceTheta, true);
  p.set_group_active(model, ParamGroup::ComplianceTransversal, true);
  p.set_group_active(model, ParamGroup::Closure, true);
  return prior;
}

}  // namespace elkin
