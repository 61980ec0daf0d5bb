// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
#include "coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace gearmotion {

bool CouplingMatrix::is_connected() const {
  if (m_ <= 1) return true;
  std::vector<int> stack{0};
  std::vector<char> seen(m_, 0);
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < m_; ++j) {
      if (at(i, j) && !seen[j]) {
        seen[j] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == m_;
}

long pairwise_contact_count_bruteforce(const PointCloud& a, const PointCloud& b,
                                       double tau_d) {
  const double t2 = tau_d * tau_d;
  long count = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::RowVector3d p = a.row(i);
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      if ((p - b.row(j)).squaredNorm() < t2) ++count;
    }
  }
  return count;
}

namespace {

struct CellKey {
  int64_t x, y, z;
  bool operator==(const CellKey& o) const {
    return x == o.x && y == o.y && z == o.z;
  }
};

struct CellHash {
  size_t operator()(const CellKey& k) const {
    uint64_t h = 1469598103934665603ULL;
    for (int64_t v : {k.x, k.y, k.z}) {
      h ^= static_cast<uint64_t>(v);
      h *= 1099511628211ULL;
    }
    return static_cast<size_t>(h);
  }
};

using Grid = std::unordered_map<CellKey, std::vector<int>, CellHash>;

Grid build_grid(const PointCloud& pts, double cell) {
  Grid g;
  g.reserve(static_cast<size_t>(pts.rows()));
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    CellKey k{static_cast<int64_t>(std::floor(pts(i, 0) / cell)),
              static_cast<int64_t>(std::floor(pts(i, 1) / cell)),
              static_cast<int64_t>(std::floor(pts(i, 2) / cell))};
    g[k].push_back(static_cast<int>(i));
  }
  return g;
}

}  // namespace

long pairwise_contact_count(const PointCloud& a, const PointCloud& b,
                            double tau_d) {
  const Grid grid = build_grid(b, tau_d);
  const double t2 = tau_d * tau_d;
  long count = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::RowVector3d p = a.row(i);
    const int64_t cx = static_cast<int64_t>(std::floor(p.x() / tau_d));
    const int64_t cy = static_cast<int64_t>(std::floor(p.y() / tau_d));
    const int64_t cz = static_cast<int64_t>(std::floor(p.z() / tau_d));
    for (int64_t dx = -1; dx <= 1; ++dx)
      for (int64_t dy = -1; dy <= 1; ++dy)
        for (int64_t dz = -1; dz <= 1; ++dz) {
          auto it = grid.find(CellKey{cx + dx, cy + dy, cz + dz});
          if (it == grid.end()) continue;
          for (int j : it->second) {
            if ((p - b.row(j)).squaredNorm() < t2) ++count;
          }
        }
  }
  return count;
}

double min_cloud_distance(const PointCloud& a, const PointCloud& b) {
  // Seed an upper bound from a strided sweep, then prune a-points that
  // cannot beat it via the centroid bound before their full pass over b.
  const Eigen::RowVector3d cb = b.colwise().mean();
  double rb = 0.0;
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    rb = std::max(rb, (b.row(j) - cb).norm());

  double best2 = std::numeric_limits<double>::infinity();
  const Eigen::Index stride = std::max<Eigen::Index>(1, a.rows() / 32);
  for (Eigen::Index i = 0; i < a.rows(); i += stride)
    for (Eigen::Index j = 0; j < b.rows(); ++j)
      best2 = std::min(best2, (a.row(i) - b.row(j)).squaredNorm());

  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::RowVector3d p = a.row(i);
    const double lower = (p - cb).norm() - rb;
    if (lower > 0 && lower * lower >= best2) continue;
    for (Eigen::Index j = 0; j < b.rows(); ++j)
      best2 = std::min(best2, (p - b.row(j)).squaredNorm());
  }
  return std::sqrt(best2);
}

CouplingMatrix estimate_coupling(const std::vector<PointCloud>& clouds,
                                 const CouplingParams& params) {
  const int m = static_cast<int>(clouds.size());
  CouplingMatrix c(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      long n = pairwise_contact_count(clouds[i], clouds[j], params.tau_d);
      c.set(i, j, n >= params.tau_c);
    }
  return c;
}

}  // namespace gearmotion
