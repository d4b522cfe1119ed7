// SPDX-License-Identifier: Apache-2.0
//
// Codeword-length allocation. The instance solver picks the shortest length
// whose predicted distortion clears the threshold. The group solver is a
// bottom-up water-filling pass over an outage table under an average-length
// budget, validated against exhaustive enumeration at small sizes.

#pragma once

#include <cstdint>
#include <vector>

#include "scan/csi/csi.hpp"

namespace scan {

struct OutageTable {
  // g[m*t_levels + t] == 1 predicts an outage for image m at length level t.
  std::vector<uint8_t> g;
  std::size_t m = 0;
  LengthSet lambda;

  uint8_t at(std::size_t image, std::size_t level) const {
    return g[image * lambda.levels() + level];
  }
};

struct AllocationStrategy {
  std::vector<int> level_index;  // per image, index into lambda.values
  LengthSet lambda;
};

struct InstanceResult {
  bool feasible = false;
  int level_index = 0;  // chosen level; falls back to the longest when infeasible
  int b = 0;
};

/// Smallest B in lambda with d_hat(B) <= d_th; infeasible inputs fall back
/// to the longest length with feasible == false.
InstanceResult solve_instance(const std::vector<double>& d_hat, double d_th,
                              const LengthSet& lambda);

/// G[m,t] = 1 iff d_hat[m][t] > d_th (strict).
OutageTable build_outage_table(const std::vector<std::vector<double>>& d_hat, double d_th,
                               const LengthSet& lambda);

/// Bottom-up water filling. Every image starts at the shortest length; level
/// by level, undetermined images whose predicted outage clears at that level
/// are promoted, unless the promotion would break the average budget, in
/// which case the promotion is reverted and the whole pass terminates.
/// literal_revert switches the revert target to the previous level's length
/// (the historical behavior) instead of the image's prior assignment.
/// Throws std::invalid_argument when l_th < L_1.
AllocationStrategy solve_group(const OutageTable& table, double l_th,
                               bool literal_revert = false);

struct OracleResult {
  int min_outages = 0;
  AllocationStrategy omega;
};

/// Brute force over all T^M assignments under the budget; tie-break prefers
/// smaller total length, then lexicographically smaller assignments.
/// Throws std::invalid_argument when T^M would exceed 1e7.
OracleResult exhaustive_oracle(const OutageTable& table, double l_th);

/// Predicted outages of an assignment under a table.
int predicted_outages(const OutageTable& table, const AllocationStrategy& omega);

/// M * ceil(log2(T)) bits to signal the chosen levels.
int indicator_bits(int t_levels, int m = 1);

double average_length(const AllocationStrategy& omega);

/// Indicator bitstream: ceil(log2 T) bits per image, packed big-endian
/// (first image in the most significant bits of the first byte).
std::vector<uint8_t> pack_indicators(const AllocationStrategy& omega);
AllocationStrategy unpack_indicators(const std::vector<uint8_t>& bytes, std::size_t m,
                                     const LengthSet& lambda);

}  // namespace scan
