// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
#include "dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gearmotion {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

json vec3_json(const Eigen::Vector3d& v) {
  return json::array({v.x(), v.y(), v.z()});
}

Eigen::Vector3d vec3_from(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Fault::Io, "cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Fault::Io, "cannot open for reading: " + path.string());
  return in;
}

constexpr const char* kMotionHeader =
    "r00,r01,r02,r10,r11,r12,r20,r21,r22,tx,ty,tz,wx,wy,wz,vx,vy,vz";

}  // namespace

void write_record(const fs::path& dir, const Assembly& asm_,
                  const std::vector<MotionTrack>& tracks,
                  double driver_step_deg) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Fault::Io, "cannot create directory: " + dir.string());

  json manifest;
  manifest["id"] = asm_.id;
  manifest["seed"] = asm_.seed;
  manifest["scale"] = asm_.scale;
  manifest["module"] = asm_.module;
  manifest["driver_index"] = asm_.driver_index;
  manifest["driver_step_deg"] = driver_step_deg;
  manifest["frames"] = tracks.empty() ? 0 : tracks.front().frame_count();
  manifest["toolkit_version"] = kToolkitVersion;

  json coupling = json::array();
  for (int i = 0; i < asm_.coupling_gt.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < asm_.coupling_gt.size(); ++j)
      row.push_back(static_cast<int>(asm_.coupling_gt.at(i, j)));
    coupling.push_back(row);
  }
  manifest["coupling_gt"] = coupling;

  json parts = json::array();
  for (const auto& p : asm_.parts) {
    json jp;
    jp["kind"] = p.kind == PartKind::SpurGear ? "spur_gear" : "rack";
    jp["tooth_count"] = p.tooth_count;
    jp["pitch_radius"] = p.pitch_radius;
    jp["length"] = p.length;
    jp["width"] = p.width;
    jp["module"] = p.module;
    jp["center"] = vec3_json(p.center);
    jp["axis"] = vec3_json(p.axis);
    jp["phase"] = p.phase;
    parts.push_back(jp);
  }
  manifest["parts"] = parts;

  json mobility = json::array();
  for (const auto& u : mobility_units(asm_)) {
    json ju;
    ju["motion_type"] =
        u.motion_type == MotionType::Rotation ? "rotation" : "translation";
    ju["axis"] = vec3_json(u.axis);
    ju["center"] = vec3_json(u.center);
    ju["dof"] = json::array();
    for (uint8_t b : u.dof) ju["dof"].push_back(static_cast<int>(b));
    mobility.push_back(ju);
  }
  manifest["mobility"] = mobility;

  {
    auto out = open_out(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
  }

  for (size_t k = 0; k < asm_.clouds.size(); ++k) {
    auto out = open_out(dir / ("part_" + std::to_string(k) + ".xyz"));
    const PointCloud& cloud = asm_.clouds[k];
    for (Eigen::Index i = 0; i < cloud.rows(); ++i) {
      out << format_g17(cloud(i, 0)) << ' ' << format_g17(cloud(i, 1)) << ' '
          << format_g17(cloud(i, 2)) << '\n';
    }
  }

  for (size_t k = 0; k < tracks.size(); ++k) {
    auto out = open_out(dir / ("motion_" + std::to_string(k) + ".csv"));
    out << kMotionHeader << '\n';
    const MotionTrack& track = tracks[k];
    for (int t = 0; t < track.frame_count(); ++t) {
      const RigidTransform& T = track.transforms[t];
      const Twist& xi = track.twists[t];
      std::string row;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
          row += format_g17(T.R(r, c));
          row += ',';
        }
      for (int r = 0; r < 3; ++r) {
        row += format_g17(T.t(r));
        row += ',';
      }
      for (int r = 0; r < 3; ++r) {
        row += format_g17(xi.omega(r));
        row += ',';
      }
      for (int r = 0; r < 3; ++r) {
        row += format_g17(xi.v(r));
        if (r < 2) row += ',';
      }
      out << row << '\n';
    }
  }
}

namespace {

PointCloud read_xyz(const fs::path& path) {
  auto in = open_in(path);
  std::vector<Eigen::RowVector3d> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    double x = std::strtod(s, &end);
    double y = std::strtod(end, &end);
    double z = std::strtod(end, &end);
    rows.emplace_back(x, y, z);
  }
  PointCloud cloud(static_cast<Eigen::Index>(rows.size()), 3);
  for (size_t i = 0; i < rows.size(); ++i) cloud.row(i) = rows[i];
  return cloud;
}

MotionTrack read_motion_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(Fault::Io, "empty motion file: " + path.string());
  MotionTrack track;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 18> vals{};
    const char* s = line.c_str();
    char* end = nullptr;
    for (int i = 0; i < 18; ++i) {
      vals[i] = std::strtod(s, &end);
      if (end == s)
        throw Error(Fault::Io, "malformed motion row in " + path.string());
      s = (*end == ',') ? end + 1 : end;
    }
    RigidTransform T;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) T.R(r, c) = vals[r * 3 + c];
    T.t = Eigen::Vector3d(vals[9], vals[10], vals[11]);
    Twist xi;
    xi.omega = Eigen::Vector3d(vals[12], vals[13], vals[14]);
    xi.v = Eigen::Vector3d(vals[15], vals[16], vals[17]);
    track.transforms.push_back(T);
    track.twists.push_back(xi);
  }
  return track;
}

}  // namespace

DatasetRecord load_record(const fs::path& dir) {
  DatasetRecord rec;
  rec.dir = dir;
  auto in = open_in(dir / "manifest.json");
  json manifest = json::parse(in, nullptr, true);

  Assembly& a = rec.assembly;
  a.id = manifest.at("id").get<std::string>();
  a.seed = manifest.at("seed").get<uint64_t>();
  a.scale = manifest.at("scale").get<double>();
  a.module = manifest.at("module").get<double>();
  a.driver_index = manifest.at("driver_index").get<int>();

  const json& parts = manifest.at("parts");
  const int m = static_cast<int>(parts.size());
  a.parts.resize(m);
  for (int k = 0; k < m; ++k) {
    const json& jp = parts.at(k);
    PartSpec& p = a.parts[k];
    p.kind = jp.at("kind").get<std::string>() == "rack" ? PartKind::Rack
                                                        : PartKind::SpurGear;
    p.tooth_count = jp.at("tooth_count").get<int>();
    p.pitch_radius = jp.at("pitch_radius").get<double>();
    p.length = jp.at("length").get<double>();
    p.width = jp.at("width").get<double>();
    p.module = jp.at("module").get<double>();
    p.center = vec3_from(jp.at("center"));
    p.axis = vec3_from(jp.at("axis"));
    p.phase = jp.at("phase").get<double>();
  }

  a.coupling_gt = CouplingMatrix(m);
  const json& coupling = manifest.at("coupling_gt");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (coupling.at(i).at(j).get<int>() != 0) a.coupling_gt.set(i, j, true);

  a.clouds.resize(m);
  for (int k = 0; k < m; ++k)
    a.clouds[k] = read_xyz(dir / ("part_" + std::to_string(k) + ".xyz"));

  rec.tracks.resize(m);
  for (int k = 0; k < m; ++k) {
    const fs::path motion = dir / ("motion_" + std::to_string(k) + ".csv");
    if (fs::exists(motion)) rec.tracks[k] = read_motion_csv(motion);
  }
  return rec;
}

std::vector<fs::path> list_record_dirs(const fs::path& root) {
  if (!fs::is_directory(root))
    throw Error(Fault::Io, "dataset directory not found: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json"))
      dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

std::vector<int> plan_part_counts(const GeneratorConfig& config,
                                  uint64_t seed) {
  std::vector<int> plan;
  if (config.exact_histogram.empty()) return plan;
  for (const auto& [parts, n] : config.exact_histogram)
    plan.insert(plan.end(), n, parts);
  Rng rng(derive_seed(seed, 0x9d5c));
  for (size_t i = plan.size(); i > 1; --i)
    std::swap(plan[i - 1], plan[rng.next_u64() % i]);
  return plan;
}

DatasetSummary generate_dataset(const GeneratorConfig& config, uint64_t seed,
                                const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw Error(Fault::Io, "cannot create directory: " + out_dir.string());

  const std::vector<int> plan = plan_part_counts(config, seed);
  if (!plan.empty() && static_cast<int>(plan.size()) != config.count)
    throw Error(Fault::ConfigParse,
                "exact histogram totals " + std::to_string(plan.size()) +
                    " assemblies but count is " + std::to_string(config.count));

  DatasetSummary summary;
  for (int i = 0; i < config.count; ++i) {
    Assembly asm_;
    bool built = false;
    for (int retry = 0; retry < 64 && !built; ++retry) {
      try {
        asm_ = build_assembly(
            config, derive_seed(derive_seed(seed, i), retry),
            plan.empty() ? std::nullopt : std::optional<int>(plan[i]));
        built = true;
      } catch (const Error& e) {
        if (e.fault() != Fault::PlacementFailed || retry == 63) throw;
      }
    }
    char name[32];
    std::snprintf(name, sizeof(name), "assembly_%04d", i);
    asm_.id = name;
    const auto tracks =
        ground_truth_motion(asm_, config.frames, config.driver_step_deg);
    write_record(out_dir / name, asm_, tracks, config.driver_step_deg);
    summary.part_histogram[static_cast<int>(asm_.parts.size())] += 1;
    summary.total_parts += static_cast<int>(asm_.parts.size());
    summary.count += 1;
  }

  json js;
  js["count"] = summary.count;
  js["total_parts"] = summary.total_parts;
  json hist;
  for (const auto& [parts, n] : summary.part_histogram)
    hist[std::to_string(parts)] = n;
  js["part_histogram"] = hist;
  auto out = open_out(out_dir / "summary.json");
  out << js.dump(2) << "\n";
  return summary;
}

}  // namespace gearmotion
