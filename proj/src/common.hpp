// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gearmotion {

using PointCloud = Eigen::Matrix<double, Eigen::Dynamic, 3>;

// Broad failure classes; mapped 1:1 onto CLI exit codes.
enum class ErrorClass : int {
  Config = 2,
  Io = 3,
  Numeric = 4,
};

// Specific failure kinds the library distinguishes.
enum class Fault {
  ConfigParse,
  Io,
  AngleNearPi,
  DegenerateAxis,
  PlacementFailed,
  InconsistentLoop,
  ShapeMismatch,
  EmptyNeighborhood,
  NonFiniteGradient,
  DegenerateCloud,
};

class Error : public std::runtime_error {
 public:
  Error(Fault fault, const std::string& what)
      : std::runtime_error(what), fault_(fault) {}

  Fault fault() const { return fault_; }

  ErrorClass error_class() const {
    switch (fault_) {
      case Fault::ConfigParse:
        return ErrorClass::Config;
      case Fault::Io:
        return ErrorClass::Io;
      default:
        return ErrorClass::Numeric;
    }
  }

 private:
  Fault fault_;
};

// Platform-independent RNG. std::mt19937_64 has a standard-defined sequence
// but the std distributions do not, so all draws go through these helpers.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    // splitmix64
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [lo, hi] inclusive
  int uniform_int(int lo, int hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

 private:
  uint64_t state_;
};

// Stable combination of a global seed with a per-item index.
inline uint64_t derive_seed(uint64_t global_seed, uint64_t index) {
  Rng r(global_seed ^ (0x51a7b2c93d4e5f60ULL + index * 0x2545f4914f6cdd1dULL));
  return r.next_u64();
}

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace gearmotion
