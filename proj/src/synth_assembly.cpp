// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
//
// Assembly construction: a meshed gear tree (plus at most one rack leaf)
// is grown by rejection sampling. Meshing pairs sit at exact pitch-circle
// tangency and tooth phases are solved so flanks interleave.
#include <cmath>

#include "synth.hpp"

namespace gearmotion {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Vector3d radial(double angle) {
  return {std::cos(angle), std::sin(angle), 0.0};
}

Eigen::Vector3d tangent(double angle) {  // z x radial
  return {-std::sin(angle), std::cos(angle), 0.0};
}

void validate(const GeneratorConfig& c) {
  if (c.min_parts < 2 || c.max_parts > 7 || c.min_parts > c.max_parts)
    throw Error(Fault::ConfigParse, "part count range must lie within [2, 7]");
  if (c.min_teeth < 8 || c.max_teeth > 60 || c.min_teeth > c.max_teeth)
    throw Error(Fault::ConfigParse, "tooth count range must lie within [8, 60]");
  if (c.points_per_part < 128 || c.points_per_part > 1024)
    throw Error(Fault::ConfigParse, "points_per_part must lie within [128, 1024]");
  if (c.frames < 1 || c.driver_step_deg <= 0 || c.module <= 0)
    throw Error(Fault::ConfigParse, "frames, driver step and module must be positive");
  if (c.count < 1) throw Error(Fault::ConfigParse, "count must be positive");
}

// Distance from a point to the rack's cross-section rectangle, in the
// rack's local xy frame.
double rack_rect_distance(const PartSpec& rack, const Eigen::Vector3d& p) {
  const Eigen::Vector3d q = p - rack.center;
  const double x = rack.axis.dot(q);
  const double y = rack_normal(rack).dot(q);
  const double dx = std::max({-rack.length / 2 - x, 0.0, x - rack.length / 2});
  const double lo = -2.75 * rack.module, hi = rack.module;
  const double dy = std::max({lo - y, 0.0, y - hi});
  return std::hypot(dx, dy);
}

}  // namespace

GeneratorConfig GeneratorConfig::desk_preset() {
  GeneratorConfig c;
  c.count = 60;
  c.min_parts = 2;
  c.max_parts = 3;
  return c;
}

GeneratorConfig GeneratorConfig::paper_preset() {
  GeneratorConfig c;
  c.count = 693;
  c.min_parts = 2;
  c.max_parts = 7;
  c.exact_histogram = {{2, 187}, {3, 214}, {4, 127}, {5, 98}, {6, 38}, {7, 29}};
  return c;
}

Assembly build_assembly(const GeneratorConfig& config, uint64_t seed,
                        std::optional<int> forced_part_count) {
  validate(config);
  Rng rng(seed);

  int n_parts;
  if (forced_part_count) {
    n_parts = *forced_part_count;
  } else {
    double total = 0.0;
    for (int n = config.min_parts; n <= config.max_parts; ++n)
      total += config.part_count_weights[n - 2];
    double pick = rng.uniform() * total;
    n_parts = config.max_parts;
    for (int n = config.min_parts; n <= config.max_parts; ++n) {
      if (pick < config.part_count_weights[n - 2]) {
        n_parts = n;
        break;
      }
      pick -= config.part_count_weights[n - 2];
    }
  }
  if (n_parts < 2 || n_parts > 7)
    throw Error(Fault::ConfigParse, "part count out of range");

  const bool has_rack = rng.uniform() < config.rack_probability;
  const int n_gears = has_rack ? n_parts - 1 : n_parts;
  const double m = config.module;
  const double width = config.width_modules * m;

  Assembly asm_;
  asm_.seed = seed;
  asm_.module = m;
  asm_.parts.resize(n_parts);

  for (int i = 0; i < n_gears; ++i) {
    PartSpec& g = asm_.parts[i];
    g.kind = PartKind::SpurGear;
    g.tooth_count = rng.uniform_int(config.min_teeth, config.max_teeth);
    g.module = m;
    g.pitch_radius = m * g.tooth_count / 2.0;
    g.width = width;
    g.axis = Eigen::Vector3d::UnitZ();
  }
  asm_.driver_index = rng.uniform_int(0, n_gears - 1);

  std::vector<std::pair<int, int>> mesh_edges;

  // place gears
  asm_.parts[0].center.setZero();
  asm_.parts[0].phase = rng.uniform(0.0, 2.0 * kPi / asm_.parts[0].tooth_count);
  for (int i = 1; i < n_gears; ++i) {
    PartSpec& g = asm_.parts[i];
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      const int parent = rng.uniform_int(0, i - 1);
      const PartSpec& pg = asm_.parts[parent];
      const double psi = rng.uniform(0.0, 2.0 * kPi);
      const Eigen::Vector3d c =
          pg.center + (pg.pitch_radius + g.pitch_radius) * radial(psi);
      bool clear = true;
      for (int k = 0; k < i && clear; ++k) {
        if (k == parent) continue;
        const double need =
            asm_.parts[k].tip_radius() + g.tip_radius() + 2.0 * m;
        clear = (asm_.parts[k].center - c).norm() >= need;
      }
      if (!clear) continue;
      g.center = c;
      // solve the child phase so tooth rows interleave at the pitch point
      const double arc_pitch = kPi * m;
      const double parent_offset = pg.pitch_radius * (pg.phase - psi);
      g.phase = psi + kPi -
                (parent_offset + arc_pitch / 2.0) / g.pitch_radius;
      g.phase = std::remainder(g.phase, 2.0 * kPi);
      mesh_edges.emplace_back(parent, i);
      placed = true;
    }
    if (!placed)
      throw Error(Fault::PlacementFailed,
                  "build_assembly: could not place gear " + std::to_string(i) +
                      " after 100 attempts");
  }

  // rates are needed before rack placement to size the slide range
  std::vector<double> gear_rate(n_gears, 0.0);
  {
    const double step = config.driver_step_deg * kPi / 180.0;
    gear_rate[asm_.driver_index] = step;
    std::vector<char> seen(n_gears, 0);
    seen[asm_.driver_index] = 1;
    std::vector<int> queue{asm_.driver_index};
    while (!queue.empty()) {
      int i = queue.back();
      queue.pop_back();
      for (auto [a, b] : mesh_edges) {
        int other = a == i ? b : (b == i ? a : -1);
        if (other < 0 || seen[other]) continue;
        gear_rate[other] = -gear_rate[i] * asm_.parts[i].tooth_count /
                           asm_.parts[other].tooth_count;
        seen[other] = 1;
        queue.push_back(other);
      }
    }
  }

  if (has_rack) {
    PartSpec& r = asm_.parts[n_parts - 1];
    r.kind = PartKind::Rack;
    r.module = m;
    r.width = width;
    const double arc_pitch = kPi * m;
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      const int pinion = rng.uniform_int(0, n_gears - 1);
      const PartSpec& g = asm_.parts[pinion];
      const double gamma = rng.uniform(0.0, 2.0 * kPi);
      const Eigen::Vector3d contact = g.center + g.pitch_radius * radial(gamma);
      const double slide_total =
          gear_rate[pinion] * g.pitch_radius * config.frames;
      r.axis = tangent(gamma);
      r.length = std::abs(slide_total) + 4.0 * arc_pitch;
      r.center = contact - (slide_total / 2.0) * r.axis;
      double phase_lin = g.pitch_radius * (g.phase - gamma) + arc_pitch / 2.0 +
                         slide_total / 2.0;
      phase_lin = phase_lin - arc_pitch * std::floor(phase_lin / arc_pitch);
      r.phase = phase_lin * 2.0 * kPi / arc_pitch;
      r.tooth_count = static_cast<int>(rack_tooth_centers(r).size());

      bool clear = true;
      for (int k = 0; k < n_gears && clear; ++k) {
        if (k == pinion) continue;
        clear = rack_rect_distance(r, asm_.parts[k].center) >=
                asm_.parts[k].tip_radius() + 2.0 * m;
      }
      if (!clear) continue;
      mesh_edges.emplace_back(pinion, n_parts - 1);
      placed = true;
    }
    if (!placed)
      throw Error(Fault::PlacementFailed,
                  "build_assembly: could not place the rack after 100 attempts");
  }

  // sample part surfaces
  asm_.clouds.resize(n_parts);
  for (int i = 0; i < n_parts; ++i) {
    const uint64_t part_seed = rng.next_u64();
    asm_.clouds[i] =
        asm_.parts[i].kind == PartKind::SpurGear
            ? gear_profile(asm_.parts[i], config.points_per_part, part_seed,
                           config.tooth)
            : rack_profile(asm_.parts[i], config.points_per_part, part_seed,
                           config.tooth);
  }

  // normalize: centroid of all points to the origin, then unit bounding sphere
  Eigen::RowVector3d centroid = Eigen::RowVector3d::Zero();
  long total_points = 0;
  for (const auto& cloud : asm_.clouds) {
    centroid += cloud.colwise().sum();
    total_points += cloud.rows();
  }
  centroid /= static_cast<double>(total_points);
  double radius = 0.0;
  for (auto& cloud : asm_.clouds) {
    cloud.rowwise() -= centroid;
    radius = std::max(radius, cloud.rowwise().norm().maxCoeff());
  }
  asm_.scale = radius;
  for (auto& cloud : asm_.clouds) cloud /= radius;
  for (auto& part : asm_.parts) {
    part.center = (part.center - centroid.transpose()) / radius;
    part.pitch_radius /= radius;
    part.length /= radius;
    part.width /= radius;
    part.module /= radius;
  }
  asm_.module /= radius;

  asm_.coupling_gt = CouplingMatrix(n_parts);
  for (auto [a, b] : mesh_edges) asm_.coupling_gt.set(a, b, true);
  return asm_;
}

std::vector<MobilityUnit> mobility_units(const Assembly& asm_) {
  std::vector<MobilityUnit> units;
  units.reserve(asm_.parts.size());
  for (const auto& part : asm_.parts) {
    MobilityUnit u;
    u.axis = part.axis;
    u.center = part.center;
    if (part.kind == PartKind::SpurGear) {
      u.motion_type = MotionType::Rotation;
      u.dof = {0, 0, 1, 0, 0, 0};  // rotation about the unit axis
    } else {
      u.motion_type = MotionType::Translation;
      u.dof = {0, 0, 0, 0, 0, 1};  // translation along the unit axis
    }
    units.push_back(u);
  }
  return units;
}

}  // namespace gearmotion
