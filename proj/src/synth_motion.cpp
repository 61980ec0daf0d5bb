// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
//
// Gear-ratio motion propagation over the coupling graph and the
// transform/twist bookkeeping for motion tracks.
#include <cmath>
#include <deque>

#include "synth.hpp"

namespace gearmotion {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Unit tangent of gear i's pitch circle at its contact with part j,
// oriented along z x radial. Used to sign gear<->rack transmission.
double rack_gear_tangent_sign(const PartSpec& gear, const PartSpec& rack) {
  const double x = rack.axis.dot(gear.center - rack.center);
  const Eigen::Vector3d on_line = rack.center + x * rack.axis;
  Eigen::Vector3d u = on_line - gear.center;
  u.z() = 0;
  if (u.norm() < 1e-12)
    throw Error(Fault::InconsistentLoop,
                "gear center lies on the rack pitch line");
  u.normalize();
  const Eigen::Vector3d tau = Eigen::Vector3d::UnitZ().cross(u);
  return tau.dot(rack.axis) >= 0 ? 1.0 : -1.0;
}

}  // namespace

std::vector<double> propagate_rates(const Assembly& asm_,
                                    double driver_step_deg) {
  const int m = static_cast<int>(asm_.parts.size());
  if (asm_.driver_index < 0 || asm_.driver_index >= m ||
      asm_.parts[asm_.driver_index].kind != PartKind::SpurGear)
    throw Error(Fault::ConfigParse, "driver must be a gear");
  if (!asm_.coupling_gt.is_connected())
    throw Error(Fault::ConfigParse, "coupling graph is not connected");

  std::vector<double> rate(m, 0.0);
  std::vector<char> seen(m, 0);
  rate[asm_.driver_index] = driver_step_deg * kPi / 180.0;
  seen[asm_.driver_index] = 1;
  std::deque<int> queue{asm_.driver_index};
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    const PartSpec& pi = asm_.parts[i];
    for (int j = 0; j < m; ++j) {
      if (!asm_.coupling_gt.at(i, j)) continue;
      const PartSpec& pj = asm_.parts[j];
      double implied;
      if (pi.kind == PartKind::SpurGear && pj.kind == PartKind::SpurGear) {
        implied = -rate[i] * pi.tooth_count / pj.tooth_count;
      } else if (pi.kind == PartKind::SpurGear) {
        implied = rate[i] * pi.pitch_radius * rack_gear_tangent_sign(pi, pj);
      } else if (pj.kind == PartKind::SpurGear) {
        implied =
            rate[i] * rack_gear_tangent_sign(pj, pi) / pj.pitch_radius;
      } else {
        throw Error(Fault::InconsistentLoop,
                    "coupled rack pair has no transmission rule");
      }
      if (seen[j]) {
        if (std::abs(implied - rate[j]) > 1e-9)
          throw Error(Fault::InconsistentLoop,
                      "coupling cycle implies two speeds for part " +
                          std::to_string(j));
        continue;
      }
      rate[j] = implied;
      seen[j] = 1;
      queue.push_back(j);
    }
  }
  return rate;
}

std::vector<Twist> derive_twists(
    const std::vector<RigidTransform>& transforms) {
  std::vector<Twist> twists;
  twists.reserve(transforms.size());
  RigidTransform prev = RigidTransform::identity();
  for (const auto& T : transforms) {
    twists.push_back(log_se3(compose(T, inverse(prev))));
    prev = T;
  }
  return twists;
}

std::vector<MotionTrack> ground_truth_motion(const Assembly& asm_,
                                             int n_frames,
                                             double driver_step_deg) {
  const std::vector<double> rate = propagate_rates(asm_, driver_step_deg);
  std::vector<MotionTrack> tracks(asm_.parts.size());
  for (size_t k = 0; k < asm_.parts.size(); ++k) {
    const PartSpec& part = asm_.parts[k];
    MotionTrack& track = tracks[k];
    track.transforms.reserve(n_frames);
    for (int t = 1; t <= n_frames; ++t) {
      if (part.kind == PartKind::SpurGear) {
        track.transforms.push_back(
            rotation_about_axis(part.center, part.axis, t * rate[k]));
      } else {
        RigidTransform T;
        T.t = (t * rate[k]) * part.axis;
        track.transforms.push_back(T);
      }
    }
    track.twists = derive_twists(track.transforms);
  }
  return tracks;
}

}  // namespace gearmotion
