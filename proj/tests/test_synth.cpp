#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "coupling.hpp"
#include "dataset.hpp"
#include "synth.hpp"

using namespace gearmotion;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

double mean_nn_spacing(const PointCloud& c) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    double best = 1e30;
    for (Eigen::Index j = 0; j < c.rows(); ++j) {
      if (i == j) continue;
      best = std::min(best, (c.row(i) - c.row(j)).squaredNorm());
    }
    sum += std::sqrt(best);
  }
  return sum / static_cast<double>(c.rows());
}

double chamfer_one_sided(const PointCloud& from, const PointCloud& to) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < from.rows(); ++i) {
    double best = 1e30;
    for (Eigen::Index j = 0; j < to.rows(); ++j)
      best = std::min(best, (from.row(i) - to.row(j)).squaredNorm());
    sum += std::sqrt(best);
  }
  return sum / static_cast<double>(from.rows());
}

double chamfer_symmetric(const PointCloud& a, const PointCloud& b) {
  return 0.5 * (chamfer_one_sided(a, b) + chamfer_one_sided(b, a));
}

PartSpec test_gear(int teeth, double module = 0.1) {
  PartSpec g;
  g.kind = PartKind::SpurGear;
  g.tooth_count = teeth;
  g.module = module;
  g.pitch_radius = module * teeth / 2.0;
  g.width = 6.0 * module;
  g.center = {0.2, -0.1, 0.0};
  g.axis = Eigen::Vector3d::UnitZ();
  g.phase = 0.37;
  return g;
}

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("gearmotion_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("gear_profile determinism, symmetry, radial bound") {
  const PartSpec g = test_gear(17);
  const PointCloud a = gear_profile(g, 1024, 99);
  const PointCloud b = gear_profile(g, 1024, 99);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  const PointCloud c = gear_profile(g, 1024, 100);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);

  // tooth-count-fold symmetry via Chamfer
  const RigidTransform rot =
      rotation_about_axis(g.center, g.axis, 2.0 * kPi / g.tooth_count);
  const double chamfer = chamfer_symmetric(apply(rot, a), a);
  CHECK(chamfer < 2.0 * mean_nn_spacing(a));

  // every point within the declared tip-radius bound of the axis
  const double bound = g.pitch_radius + 1.25 * g.module;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::RowVector3d d = a.row(i) - g.center.transpose();
    CHECK(std::hypot(d.x(), d.y()) <= bound + 1e-9);
  }
}

TEST_CASE("rack_profile determinism, periodicity, bounding box") {
  PartSpec r;
  r.kind = PartKind::Rack;
  r.module = 0.1;
  r.width = 0.6;
  r.length = 3.0;
  r.center = {0.1, 0.2, 0.0};
  r.axis = Eigen::Vector3d(1, 1, 0).normalized();
  r.phase = 1.1;
  r.tooth_count = static_cast<int>(rack_tooth_centers(r).size());
  CHECK(r.tooth_count > 4);

  const PointCloud a = rack_profile(r, 1024, 7);
  CHECK((a - rack_profile(r, 1024, 7)).cwiseAbs().maxCoeff() == 0.0);

  // translating by one pitch maps interior teeth onto the pattern
  const double pitch = kPi * r.module;
  PointCloud interior(a.rows(), 3);
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double x = r.axis.dot(a.row(i).transpose() - r.center);
    if (std::abs(x) < r.length / 2.0 - 2.0 * pitch) interior.row(n++) = a.row(i);
  }
  interior.conservativeResize(n, 3);
  REQUIRE(n > 200);
  PointCloud shifted = interior;
  shifted.rowwise() += (pitch * r.axis).transpose();
  CHECK(chamfer_one_sided(shifted, a) < 2.0 * mean_nn_spacing(a));

  for (Eigen::Index i = 0; i < a.rows(); ++i)
    CHECK(rack_box_contains(r, a.row(i).transpose(), 1e-9));
}

TEST_CASE("build_assembly placement, coupling and normalization") {
  const GeneratorConfig config = GeneratorConfig::desk_preset();
  int checked = 0;
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    Assembly asm_;
    try {
      asm_ = build_assembly(config, seed);
    } catch (const Error& e) {
      if (e.fault() == Fault::PlacementFailed) continue;
      throw;
    }
    ++checked;
    CHECK(asm_.coupling_gt.is_connected());
    CHECK(asm_.parts.size() >= 2);
    CHECK(asm_.parts.size() <= 3);
    CHECK(asm_.parts[asm_.driver_index].kind == PartKind::SpurGear);

    double max_norm = 0.0;
    for (const auto& cloud : asm_.clouds)
      max_norm = std::max(max_norm, cloud.rowwise().norm().maxCoeff());
    CHECK(max_norm <= 1.0 + 1e-12);

    for (size_t i = 0; i < asm_.clouds.size(); ++i)
      for (size_t j = i + 1; j < asm_.clouds.size(); ++j)
        CHECK(min_cloud_distance(asm_.clouds[i], asm_.clouds[j]) > 0.0);
  }
  CHECK(checked >= 25);
}

TEST_CASE("motion: ratios, full driver turn, twist structure") {
  GeneratorConfig config = GeneratorConfig::desk_preset();
  config.min_parts = 3;
  config.max_parts = 3;
  const Assembly asm_ = build_assembly(config, 77, 3);
  const auto rates = propagate_rates(asm_, 10.0);
  const auto tracks = ground_truth_motion(asm_, 36, 10.0);

  // driver at +10 deg/frame
  CHECK(rates[asm_.driver_index] == doctest::Approx(10.0 * kPi / 180.0));

  // pitch-point speed matching with opposite signs for meshed gears
  const int m = static_cast<int>(asm_.parts.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (!asm_.coupling_gt.at(i, j)) continue;
      const PartSpec& pi = asm_.parts[i];
      const PartSpec& pj = asm_.parts[j];
      if (pi.kind == PartKind::SpurGear && pj.kind == PartKind::SpurGear) {
        CHECK(std::abs(pi.pitch_radius * std::abs(rates[i]) -
                       pj.pitch_radius * std::abs(rates[j])) < 1e-9);
        CHECK(rates[i] * rates[j] < 0.0);
      }
    }

  // 36 frames x 10 deg: driver returns to identity
  const RigidTransform& last = tracks[asm_.driver_index].transforms[35];
  CHECK((last.R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(last.t.norm() < 1e-9);

  for (int k = 0; k < m; ++k) {
    const auto& twists = tracks[k].twists;
    // constant-rate motion: all relative twists equal
    for (size_t t = 1; t < twists.size(); ++t) {
      CHECK((twists[t].as_vector() - twists[0].as_vector())
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
    if (asm_.parts[k].kind == PartKind::SpurGear) {
      // omega parallel to the axis with magnitude |rate|
      const Eigen::Vector3d w = twists[0].omega;
      CHECK(std::abs(w.norm() - std::abs(rates[k])) < 1e-10);
      CHECK(w.cross(asm_.parts[k].axis).norm() < 1e-10);
    } else {
      CHECK(twists[0].omega.norm() < 1e-12);
      CHECK((twists[0].v - rates[k] * asm_.parts[k].axis).norm() < 1e-12);
    }

    // reconstruction: composed twists reach the final transform
    RigidTransform acc = RigidTransform::identity();
    for (const auto& xi : twists) acc = compose(exp_se3(xi), acc);
    const RigidTransform& want = tracks[k].transforms.back();
    CHECK((acc.R - want.R).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((acc.t - want.t).norm() < 1e-8);
  }

  // static part: zero twists
  std::vector<RigidTransform> still(5, RigidTransform::identity());
  for (const auto& xi : derive_twists(still)) {
    CHECK(xi.omega.norm() == 0.0);
    CHECK(xi.v.norm() == 0.0);
  }
}

TEST_CASE("rack kinematics: slide speed equals r*theta") {
  GeneratorConfig config = GeneratorConfig::desk_preset();
  config.rack_probability = 1.0;
  for (uint64_t seed = 5; seed < 40; ++seed) {
    Assembly asm_;
    try {
      asm_ = build_assembly(config, seed, 2);
    } catch (const Error& e) {
      if (e.fault() == Fault::PlacementFailed) continue;
      throw;
    }
    if (asm_.parts[1].kind != PartKind::Rack) continue;
    const auto rates = propagate_rates(asm_, 10.0);
    const PartSpec& pinion = asm_.parts[0];
    CHECK(std::abs(std::abs(rates[1]) -
                   pinion.pitch_radius * std::abs(rates[0])) < 1e-12);
    return;
  }
  FAIL("no rack assembly produced");
}

TEST_CASE("contact band: coupled parts neither detach nor interpenetrate") {
  GeneratorConfig config = GeneratorConfig::desk_preset();
  config.min_parts = 2;
  config.max_parts = 4;
  int pairs_checked = 0;
  for (uint64_t seed = 100; seed < 112; ++seed) {
    Assembly asm_;
    try {
      asm_ = build_assembly(config, seed);
    } catch (const Error& e) {
      if (e.fault() == Fault::PlacementFailed) continue;
      throw;
    }
    const auto tracks = ground_truth_motion(asm_, 36, 10.0);
    const int m = static_cast<int>(asm_.parts.size());
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        if (!asm_.coupling_gt.at(i, j)) continue;
        const double d0 = min_cloud_distance(asm_.clouds[i], asm_.clouds[j]);
        CHECK(d0 > 0.0);
        for (int t = 0; t < 36; t += 5) {
          const PointCloud a = apply(tracks[i].transforms[t], asm_.clouds[i]);
          const PointCloud b = apply(tracks[j].transforms[t], asm_.clouds[j]);
          const double dt = min_cloud_distance(a, b);
          CHECK(dt >= 0.75 * d0);
          CHECK(dt <= 1.25 * d0);
        }
        ++pairs_checked;
      }
  }
  CHECK(pairs_checked >= 10);
}

TEST_CASE("mobility units") {
  GeneratorConfig config = GeneratorConfig::desk_preset();
  config.rack_probability = 1.0;
  const Assembly asm_ = build_assembly(config, 9, 3);
  const auto units = mobility_units(asm_);
  REQUIRE(units.size() == asm_.parts.size());
  for (size_t k = 0; k < units.size(); ++k) {
    int bits = 0;
    for (uint8_t b : units[k].dof) bits += b;
    CHECK(bits == 1);
    if (asm_.parts[k].kind == PartKind::SpurGear) {
      CHECK(units[k].motion_type == MotionType::Rotation);
      CHECK(units[k].dof[2] == 1);
      CHECK((units[k].axis - Eigen::Vector3d::UnitZ()).norm() < 1e-12);
    } else {
      CHECK(units[k].motion_type == MotionType::Translation);
      CHECK(units[k].dof[5] == 1);
    }
    CHECK((units[k].center - asm_.parts[k].center).norm() == 0.0);
  }
}

TEST_CASE("estimated coupling matches construction ground truth") {
  GeneratorConfig config = GeneratorConfig::desk_preset();
  config.min_parts = 2;
  config.max_parts = 4;
  int checked = 0;
  for (uint64_t seed = 300; seed < 320; ++seed) {
    Assembly asm_;
    try {
      asm_ = build_assembly(config, seed);
    } catch (const Error& e) {
      if (e.fault() == Fault::PlacementFailed) continue;
      throw;
    }
    const CouplingMatrix est = estimate_coupling(asm_.clouds);
    CHECK(est == asm_.coupling_gt);
    ++checked;
  }
  CHECK(checked >= 15);
}

TEST_CASE("dataset generation: determinism, round trip, summary") {
  GeneratorConfig config = GeneratorConfig::desk_preset();
  config.count = 5;
  config.points_per_part = 256;
  config.frames = 12;

  const fs::path dir_a = temp_dir("gen_a");
  const fs::path dir_b = temp_dir("gen_b");
  const DatasetSummary sa = generate_dataset(config, 31, dir_a);
  const DatasetSummary sb = generate_dataset(config, 31, dir_b);
  CHECK(sa.count == 5);
  CHECK(sa.total_parts == sb.total_parts);

  // regeneration with the same seed is byte-identical
  const auto dirs_a = list_record_dirs(dir_a);
  const auto dirs_b = list_record_dirs(dir_b);
  REQUIRE(dirs_a.size() == 5);
  REQUIRE(dirs_b.size() == 5);
  for (size_t i = 0; i < dirs_a.size(); ++i) {
    for (const auto& entry : fs::directory_iterator(dirs_a[i])) {
      std::ifstream fa(entry.path(), std::ios::binary);
      std::ifstream fb(dirs_b[i] / entry.path().filename(), std::ios::binary);
      REQUIRE(fb.good());
      std::string ca((std::istreambuf_iterator<char>(fa)), {});
      std::string cb((std::istreambuf_iterator<char>(fb)), {});
      CHECK(ca == cb);
    }
  }

  // loaded records reproduce the written content
  const DatasetRecord rec = load_record(dirs_a[0]);
  CHECK(rec.assembly.parts.size() >= 2);
  CHECK(rec.tracks.size() == rec.assembly.parts.size());
  CHECK(rec.tracks[0].frame_count() == 12);
  CHECK(rec.assembly.coupling_gt.is_connected());
  for (const auto& cloud : rec.assembly.clouds) CHECK(cloud.rows() == 256);

  // writing a loaded record back is byte-identical (lossless text round trip)
  const fs::path dir_c = temp_dir("gen_c");
  write_record(dir_c / "assembly_0000", rec.assembly, rec.tracks, 10.0);
  for (const auto& entry : fs::directory_iterator(dirs_a[0])) {
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fc(dir_c / "assembly_0000" / entry.path().filename(),
                     std::ios::binary);
    REQUIRE(fc.good());
    std::string ca((std::istreambuf_iterator<char>(fa)), {});
    std::string cc((std::istreambuf_iterator<char>(fc)), {});
    CHECK(ca == cc);
  }

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  fs::remove_all(dir_c);
}

TEST_CASE("exact-count scheduler reproduces the full-scale histogram") {
  const GeneratorConfig paper = GeneratorConfig::paper_preset();
  const std::vector<int> plan = plan_part_counts(paper, 123);
  REQUIRE(static_cast<int>(plan.size()) == 693);
  std::map<int, int> hist;
  int total = 0;
  for (int n : plan) {
    hist[n] += 1;
    total += n;
  }
  CHECK(hist[2] == 187);
  CHECK(hist[3] == 214);
  CHECK(hist[4] == 127);
  CHECK(hist[5] == 98);
  CHECK(hist[6] == 38);
  CHECK(hist[7] == 29);
  CHECK(total == 2445);
}

TEST_CASE("desk-scale histogram matches requested counts exactly") {
  GeneratorConfig config = GeneratorConfig::desk_preset();
  config.count = 6;
  config.exact_histogram = {{2, 4}, {3, 2}};
  config.points_per_part = 128;
  config.frames = 4;
  const fs::path dir = temp_dir("hist");
  const DatasetSummary s = generate_dataset(config, 8, dir);
  CHECK(s.part_histogram.at(2) == 4);
  CHECK(s.part_histogram.at(3) == 2);
  CHECK(s.total_parts == 14);
  fs::remove_all(dir);
}
