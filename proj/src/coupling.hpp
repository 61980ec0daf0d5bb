// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "common.hpp"

namespace gearmotion {

// Symmetric binary contact adjacency over parts, zero diagonal.
class CouplingMatrix {
 public:
  CouplingMatrix() = default;
  explicit CouplingMatrix(int m) : m_(m), c_(static_cast<size_t>(m) * m, 0) {}

  int size() const { return m_; }
  uint8_t at(int i, int j) const { return c_[static_cast<size_t>(i) * m_ + j]; }
  void set(int i, int j, bool coupled) {
    if (i == j) return;
    c_[static_cast<size_t>(i) * m_ + j] = coupled ? 1 : 0;
    c_[static_cast<size_t>(j) * m_ + i] = coupled ? 1 : 0;
  }
  const std::vector<uint8_t>& raw() const { return c_; }

  bool is_connected() const;
  bool operator==(const CouplingMatrix& o) const {
    return m_ == o.m_ && c_ == o.c_;
  }

 private:
  int m_ = 0;
  std::vector<uint8_t> c_;
};

// Exact number of cross pairs (p in a, q in b) with |p - q| < tau_d.
// Brute-force O(N*M) reference.
long pairwise_contact_count_bruteforce(const PointCloud& a, const PointCloud& b,
                                       double tau_d);

// Same count through a uniform grid of cell size tau_d (27-cell neighbor
// scan). Returns exactly the brute-force count.
long pairwise_contact_count(const PointCloud& a, const PointCloud& b,
                            double tau_d);

// Smallest distance between any point of a and any point of b.
double min_cloud_distance(const PointCloud& a, const PointCloud& b);

struct CouplingParams {
  double tau_d = 0.02;  // 2% of the unit-sphere normalized scale
  int tau_c = 10;       // minimum number of close point pairs
};

// c_ij = 1 iff contact count between clouds i and j reaches tau_c.
CouplingMatrix estimate_coupling(const std::vector<PointCloud>& clouds,
                                 const CouplingParams& params = {});

}  // namespace gearmotion
