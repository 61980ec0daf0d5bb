// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
//
// Surface sampling for the two part kinds. Teeth are trapezoidal involute
// approximations: the angular half-width shrinks linearly with height at
// the pressure-angle slope, and a backlash fraction of the quarter pitch
// is yielded so meshed flanks keep a positive clearance.
#include <cmath>

#include "synth.hpp"

namespace gearmotion {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GearDims {
  double rp, rt, rr, w, h0, slope;  // h0: half-width at pitch radius
  int teeth;
  double phase;

  double hw(double r) const { return h0 - (r - rp) * slope; }
};

GearDims gear_dims(const PartSpec& spec, const ToothShapeParams& tooth) {
  GearDims d;
  d.rp = spec.pitch_radius;
  d.rt = spec.tip_radius();
  d.rr = spec.root_radius();
  d.w = spec.width;
  d.teeth = spec.tooth_count;
  d.phase = spec.phase;
  d.h0 = (kPi / (2.0 * spec.tooth_count)) * (1.0 - tooth.backlash);
  d.slope = std::tan(tooth.pressure_angle_deg * kPi / 180.0) / d.rp;
  return d;
}

// area of one tooth cross-section face, integral of 2*hw(r)*r dr
double tooth_face_area(const GearDims& d) {
  const double a = d.h0 + d.slope * d.rp;
  const double r2 = d.rt * d.rt - d.rr * d.rr;
  const double r3 = d.rt * d.rt * d.rt - d.rr * d.rr * d.rr;
  return a * r2 - (2.0 * d.slope / 3.0) * r3;
}

double flank_arc_length(const GearDims& d) {
  const int steps = 64;
  const double h = (d.rt - d.rr) / steps;
  double len = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double r = d.rr + (i + 0.5) * h;
    len += std::sqrt(1.0 + r * r * d.slope * d.slope) * h;
  }
  return len;
}

}  // namespace

PointCloud gear_profile(const PartSpec& spec, int n_points, uint64_t rng_seed,
                        const ToothShapeParams& tooth) {
  const GearDims d = gear_dims(spec, tooth);
  const double hw_r = d.hw(d.rr);
  const double hw_t = d.hw(d.rt);
  const double gap = 2.0 * kPi / d.teeth - 2.0 * hw_r;

  enum Patch { CoreFace, ToothFace, RootArc, TipArc, Flank, kPatchCount };
  double area[kPatchCount];
  area[CoreFace] = 2.0 * kPi * d.rr * d.rr;
  area[ToothFace] = 2.0 * d.teeth * tooth_face_area(d);
  area[RootArc] = d.teeth * gap * d.rr * d.w;
  area[TipArc] = d.teeth * 2.0 * hw_t * d.rt * d.w;
  area[Flank] = 2.0 * d.teeth * flank_arc_length(d) * d.w;
  double total = 0.0;
  for (double a : area) total += a;

  // rejection envelope for r-sampling on tooth faces (density hw(r)*r)
  double face_env = 0.0;
  for (int i = 0; i <= 16; ++i) {
    const double r = d.rr + (d.rt - d.rr) * i / 16.0;
    face_env = std::max(face_env, d.hw(r) * r);
  }
  face_env *= 1.0001;
  const double flank_env = std::sqrt(1.0 + d.rt * d.rt * d.slope * d.slope);

  Rng rng(rng_seed);
  PointCloud cloud(n_points, 3);
  for (int i = 0; i < n_points; ++i) {
    double pick = rng.uniform() * total;
    int patch = 0;
    while (patch + 1 < kPatchCount && pick >= area[patch]) {
      pick -= area[patch];
      ++patch;
    }

    double x = 0, y = 0, z = 0;
    const int k = rng.uniform_int(0, d.teeth - 1);
    const double tooth_angle = d.phase + 2.0 * kPi * k / d.teeth;
    switch (patch) {
      case CoreFace: {
        const double r = d.rr * std::sqrt(rng.uniform());
        const double phi = rng.uniform(0.0, 2.0 * kPi);
        x = r * std::cos(phi);
        y = r * std::sin(phi);
        z = rng.uniform() < 0.5 ? -d.w / 2 : d.w / 2;
        break;
      }
      case ToothFace: {
        double r;
        do {
          r = rng.uniform(d.rr, d.rt);
        } while (rng.uniform() * face_env > d.hw(r) * r);
        const double phi = tooth_angle + rng.uniform(-d.hw(r), d.hw(r));
        x = r * std::cos(phi);
        y = r * std::sin(phi);
        z = rng.uniform() < 0.5 ? -d.w / 2 : d.w / 2;
        break;
      }
      case RootArc: {
        const double phi = tooth_angle + hw_r + rng.uniform() * gap;
        x = d.rr * std::cos(phi);
        y = d.rr * std::sin(phi);
        z = rng.uniform(-d.w / 2, d.w / 2);
        break;
      }
      case TipArc: {
        const double phi = tooth_angle + rng.uniform(-hw_t, hw_t);
        x = d.rt * std::cos(phi);
        y = d.rt * std::sin(phi);
        z = rng.uniform(-d.w / 2, d.w / 2);
        break;
      }
      case Flank: {
        double r;
        do {
          r = rng.uniform(d.rr, d.rt);
        } while (rng.uniform() * flank_env >
                 std::sqrt(1.0 + r * r * d.slope * d.slope));
        const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const double phi = tooth_angle + side * d.hw(r);
        x = r * std::cos(phi);
        y = r * std::sin(phi);
        z = rng.uniform(-d.w / 2, d.w / 2);
        break;
      }
    }
    cloud.row(i) = Eigen::RowVector3d(x, y, z) + spec.center.transpose();
  }
  return cloud;
}

Eigen::Vector3d rack_normal(const PartSpec& rack) {
  return Eigen::Vector3d::UnitZ().cross(rack.axis).normalized();
}

namespace {

struct RackDims {
  double m, p, w, len, h0, slope;
  double tip_y, root_y, back_y;
  std::vector<double> teeth_x;  // tooth centers along the slide axis

  double hw(double y) const { return h0 - y * slope; }
};

RackDims rack_dims(const PartSpec& spec, const ToothShapeParams& tooth) {
  RackDims d;
  d.m = spec.module;
  d.p = kPi * d.m;
  d.w = spec.width;
  d.len = spec.length;
  d.h0 = (d.p / 4.0) * (1.0 - tooth.backlash);
  d.slope = std::tan(tooth.pressure_angle_deg * kPi / 180.0);
  d.tip_y = kAddendumModules * d.m;
  d.root_y = -kDedendumModules * d.m;
  d.back_y = d.root_y - kRackBodyDepthModules * d.m;
  d.teeth_x = rack_tooth_centers(spec);
  return d;
}

}  // namespace

std::vector<double> rack_tooth_centers(const PartSpec& rack) {
  const double p = kPi * rack.module;
  double offset = rack.phase * p / (2.0 * kPi);
  offset -= p * std::floor(offset / p + 0.5);  // reduce to [-p/2, p/2)
  const double limit = rack.length / 2.0 - p / 2.0;
  const int j_min = static_cast<int>(std::ceil((-limit - offset) / p));
  const int j_max = static_cast<int>(std::floor((limit - offset) / p));
  std::vector<double> teeth;
  for (int j = j_min; j <= j_max; ++j) teeth.push_back(offset + j * p);
  return teeth;
}

PointCloud rack_profile(const PartSpec& spec, int n_points, uint64_t rng_seed,
                        const ToothShapeParams& tooth) {
  const RackDims d = rack_dims(spec, tooth);
  const int nt = static_cast<int>(d.teeth_x.size());
  const double hw_root = d.hw(d.root_y);
  const double hw_tip = d.hw(d.tip_y);
  const double tooth_h = d.tip_y - d.root_y;
  const double body_h = d.root_y - d.back_y;
  const double cross_area = 2.0 * (d.h0 * tooth_h - (d.slope / 2.0) *
                                   (d.tip_y * d.tip_y - d.root_y * d.root_y));
  const double flank_len = std::hypot(tooth_h, tooth_h * d.slope);

  enum Patch { Back, End, ZFace, RootLand, Flank, TipFace, kPatchCount };
  double area[kPatchCount];
  area[Back] = d.len * d.w;
  area[End] = 2.0 * body_h * d.w;
  area[ZFace] = 2.0 * (d.len * body_h + nt * cross_area);
  area[RootLand] = (d.len - nt * 2.0 * hw_root) * d.w;
  area[Flank] = 2.0 * nt * flank_len * d.w;
  area[TipFace] = nt * 2.0 * hw_tip * d.w;
  double total = 0.0;
  for (double a : area) total += a;

  const Eigen::Vector3d ex = spec.axis;
  const Eigen::Vector3d ey = rack_normal(spec);
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ();

  Rng rng(rng_seed);
  PointCloud cloud(n_points, 3);
  for (int i = 0; i < n_points; ++i) {
    double pick = rng.uniform() * total;
    int patch = 0;
    while (patch + 1 < kPatchCount && pick >= area[patch]) {
      pick -= area[patch];
      ++patch;
    }

    double x = 0, y = 0, z = 0;
    const int k = nt > 0 ? rng.uniform_int(0, nt - 1) : 0;
    switch (patch) {
      case Back:
        x = rng.uniform(-d.len / 2, d.len / 2);
        y = d.back_y;
        z = rng.uniform(-d.w / 2, d.w / 2);
        break;
      case End:
        x = rng.uniform() < 0.5 ? -d.len / 2 : d.len / 2;
        y = rng.uniform(d.back_y, d.root_y);
        z = rng.uniform(-d.w / 2, d.w / 2);
        break;
      case ZFace: {
        z = rng.uniform() < 0.5 ? -d.w / 2 : d.w / 2;
        // split between body rectangle and tooth cross-sections by area
        const double body_area = d.len * body_h;
        if (rng.uniform() * (body_area + nt * cross_area) < body_area) {
          x = rng.uniform(-d.len / 2, d.len / 2);
          y = rng.uniform(d.back_y, d.root_y);
        } else {
          double yy;
          const double env = 2.0 * hw_root * 1.0001;
          do {
            yy = rng.uniform(d.root_y, d.tip_y);
          } while (rng.uniform() * env > 2.0 * d.hw(yy));
          y = yy;
          x = d.teeth_x[k] + rng.uniform(-d.hw(yy), d.hw(yy));
        }
        break;
      }
      case RootLand: {
        // uniform over the exposed root line (teeth removed)
        const double land = d.len - nt * 2.0 * hw_root;
        double s = rng.uniform() * land;
        x = -d.len / 2;
        for (int t = 0; t <= nt; ++t) {
          const double seg_start =
              t == 0 ? -d.len / 2 : d.teeth_x[t - 1] + hw_root;
          const double seg_end =
              t == nt ? d.len / 2 : d.teeth_x[t] - hw_root;
          const double seg = seg_end - seg_start;
          if (s <= seg) {
            x = seg_start + s;
            break;
          }
          s -= seg;
        }
        y = d.root_y;
        z = rng.uniform(-d.w / 2, d.w / 2);
        break;
      }
      case Flank: {
        const double yy = rng.uniform(d.root_y, d.tip_y);
        const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
        x = d.teeth_x[k] + side * d.hw(yy);
        y = yy;
        z = rng.uniform(-d.w / 2, d.w / 2);
        break;
      }
      case TipFace:
        x = d.teeth_x[k] + rng.uniform(-hw_tip, hw_tip);
        y = d.tip_y;
        z = rng.uniform(-d.w / 2, d.w / 2);
        break;
    }
    cloud.row(i) = (spec.center + x * ex + y * ey + z * ez).transpose();
  }
  return cloud;
}

bool rack_box_contains(const PartSpec& rack, const Eigen::Vector3d& p,
                       double tol) {
  const Eigen::Vector3d q = p - rack.center;
  const double x = rack.axis.dot(q);
  const double y = rack_normal(rack).dot(q);
  const double z = q.z();
  return std::abs(x) <= rack.length / 2 + tol && y >= -2.75 * rack.module - tol &&
         y <= rack.module + tol && std::abs(z) <= rack.width / 2 + tol;
}

}  // namespace gearmotion
