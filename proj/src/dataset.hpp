// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "synth.hpp"

namespace gearmotion {

// One dataset record: a generated assembly plus its motion annotation.
struct DatasetRecord {
  Assembly assembly;
  std::vector<MotionTrack> tracks;
  std::filesystem::path dir;
};

struct DatasetSummary {
  int count = 0;
  std::map<int, int> part_histogram;
  int total_parts = 0;
};

// Record layout inside a directory:
//   manifest.json   part specs, driver, coupling, mobility, scale, seed
//   part_<k>.xyz    one "x y z" line per point, 17 significant digits
//   motion_<k>.csv  header; per frame 9 rotation entries (row-major), 3
//                   translation entries, then the 6 twist entries
void write_record(const std::filesystem::path& dir, const Assembly& asm_,
                  const std::vector<MotionTrack>& tracks,
                  double driver_step_deg);

DatasetRecord load_record(const std::filesystem::path& dir);

// Sorted list of record directories under a dataset root.
std::vector<std::filesystem::path> list_record_dirs(
    const std::filesystem::path& root);

// Generates `config.count` assemblies under out_dir (one directory each,
// named assembly_<index>), writes summary.json and returns the summary.
// Deterministic for a fixed (config, seed).
DatasetSummary generate_dataset(const GeneratorConfig& config, uint64_t seed,
                                const std::filesystem::path& out_dir);

// The part-count schedule used by generate_dataset: exact expansion of
// config.exact_histogram (deterministically shuffled) when present,
// otherwise empty (counts are drawn per assembly).
std::vector<int> plan_part_counts(const GeneratorConfig& config, uint64_t seed);

// 17-significant-digit formatting used for all text output of doubles.
std::string format_g17(double x);

}  // namespace gearmotion
