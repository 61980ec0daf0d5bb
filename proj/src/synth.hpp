// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "coupling.hpp"
#include "se3.hpp"

namespace gearmotion {

enum class PartKind { SpurGear, Rack };

// Tooth proportions in modules, shared by gears and racks. Shallow teeth
// keep mesh clearances (0.125 module tip-to-root) far below the coupling
// distance threshold at every generated assembly scale.
inline constexpr double kAddendumModules = 0.5;
inline constexpr double kDedendumModules = 0.625;
inline constexpr double kRackBodyDepthModules = 0.75;

// Geometry of one part. Gears: axis is the rotation axis (+z in generated
// assemblies), pitch_radius = module * tooth_count / 2. Racks: axis is the
// slide direction in the xy-plane; the tooth row points along z x axis
// toward the meshing pinion; phase measures tooth alignment along the slide
// with one tooth pitch = 2*pi.
struct PartSpec {
  PartKind kind = PartKind::SpurGear;
  int tooth_count = 0;
  double pitch_radius = 0.0;  // gears
  double length = 0.0;        // racks, along slide direction
  double width = 0.0;         // axial extent (z)
  double module = 0.0;        // shared per assembly
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  double phase = 0.0;  // radians

  double tip_radius() const { return pitch_radius + kAddendumModules * module; }
  double root_radius() const {
    return pitch_radius - kDedendumModules * module;
  }
};

struct ToothShapeParams {
  // Fraction of the quarter-pitch yielded between meshing flanks. Large
  // enough that the rotation-invariant tip-to-root clearance stays the
  // minimum gap at every mesh phase.
  double backlash = 0.25;
  double pressure_angle_deg = 20.0;  // flank slope, sampling parameter only
};

// Uniform surface sample of a spur gear solid: disk faces, root cylinder,
// tooth flanks, tooth tip cylinders. Deterministic for a fixed seed.
PointCloud gear_profile(const PartSpec& spec, int n_points, uint64_t rng_seed,
                        const ToothShapeParams& tooth = {});

// Uniform surface sample of a rack solid (linear tooth row matching the
// assembly module). Deterministic for a fixed seed.
PointCloud rack_profile(const PartSpec& spec, int n_points, uint64_t rng_seed,
                        const ToothShapeParams& tooth = {});

// Direction the rack teeth point (toward the pinion), derived from the
// slide direction: z x slide.
Eigen::Vector3d rack_normal(const PartSpec& rack);

// Tooth center coordinates along the slide axis, relative to the rack
// center. Only teeth that fit fully inside the rack length are emitted.
std::vector<double> rack_tooth_centers(const PartSpec& rack);

// True when p lies inside the rack's declared bounding box (tolerance tol).
bool rack_box_contains(const PartSpec& rack, const Eigen::Vector3d& p,
                       double tol);

struct Assembly {
  std::string id;
  std::vector<PartSpec> parts;
  std::vector<PointCloud> clouds;
  CouplingMatrix coupling_gt;
  int driver_index = 0;
  double scale = 1.0;  // original units per normalized unit
  uint64_t seed = 0;
  double module = 0.0;  // shared (normalized) module constant
};

enum class MotionType { Rotation, Translation };

// Per-part motion annotation used for evaluation only.
struct MobilityUnit {
  MotionType motion_type = MotionType::Rotation;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  std::array<uint8_t, 6> dof{};  // [rx, ry, rz, tx, ty, tz] about/along axis
};

// Absolute transforms for frames 1..T (frame 0 is the identity rest pose)
// plus the relative frame-to-frame twists.
struct MotionTrack {
  std::vector<RigidTransform> transforms;
  std::vector<Twist> twists;
  int frame_count() const { return static_cast<int>(transforms.size()); }
};

struct GeneratorConfig {
  int count = 60;
  int min_parts = 2;
  int max_parts = 3;
  // Weights for part counts 2..7, used for proportional sampling within
  // [min_parts, max_parts].
  std::array<double, 6> part_count_weights{187, 214, 127, 98, 38, 29};
  // When non-empty, an exact part-count plan: {parts -> assemblies}.
  std::map<int, int> exact_histogram;
  int min_teeth = 12;
  int max_teeth = 32;
  double rack_probability = 0.15;
  int points_per_part = 1024;
  int frames = 36;
  double driver_step_deg = 10.0;
  double module = 0.1;  // pre-normalization module constant
  double width_modules = 6.0;
  ToothShapeParams tooth;

  static GeneratorConfig desk_preset();
  static GeneratorConfig paper_preset();
};

// Places a meshed gear train (optionally with one rack leaf), samples the
// part clouds, normalizes to the unit bounding sphere and records coupling
// ground truth. Throws Fault::PlacementFailed when rejection sampling
// cannot place a part; the caller retries with a fresh seed.
Assembly build_assembly(const GeneratorConfig& config, uint64_t seed,
                        std::optional<int> forced_part_count = std::nullopt);

// Analytic gear-ratio propagation from the driver over the coupling graph.
// Throws Fault::InconsistentLoop when a coupling cycle implies two rates
// for one part.
std::vector<MotionTrack> ground_truth_motion(const Assembly& asm_,
                                             int n_frames,
                                             double driver_step_deg);

// Per-part signed rates implied by the coupling graph: radians per frame
// for gears, slide units per frame for racks.
std::vector<double> propagate_rates(const Assembly& asm_,
                                    double driver_step_deg);

// twists[t] = log(SE3)(T_t * T_{t-1}^-1); fills/overwrites track.twists.
std::vector<Twist> derive_twists(const std::vector<RigidTransform>& transforms);

std::vector<MobilityUnit> mobility_units(const Assembly& asm_);

}  // namespace gearmotion
