// SPDX-License-Identifier: Apache-2.0

#include "scan/alloc/allocator.hpp"

#include <cmath>
#include <stdexcept>

namespace scan {

namespace {

long long total_length(const std::vector<int>& levels, const LengthSet& lambda) {
  long long sum = 0;
  for (int lv : levels) sum += lambda.values[static_cast<std::size_t>(lv)];
  return sum;
}

}  // namespace

InstanceResult solve_instance(const std::vector<double>& d_hat, double d_th,
                              const LengthSet& lambda) {
  if (d_hat.size() != lambda.levels())
    throw std::invalid_argument("solve_instance: prediction/length-set size mismatch");
  InstanceResult r;
  for (std::size_t t = 0; t < d_hat.size(); ++t) {
    if (d_hat[t] <= d_th) {
      r.feasible = true;
      r.level_index = static_cast<int>(t);
      r.b = lambda.values[t];
      return r;
    }
  }
  r.feasible = false;
  r.level_index = static_cast<int>(lambda.levels()) - 1;
  r.b = lambda.longest();
  return r;
}

OutageTable build_outage_table(const std::vector<std::vector<double>>& d_hat, double d_th,
                               const LengthSet& lambda) {
  OutageTable table;
  table.lambda = lambda;
  table.m = d_hat.size();
  table.g.resize(table.m * lambda.levels());
  for (std::size_t m = 0; m < table.m; ++m) {
    if (d_hat[m].size() != lambda.levels())
      throw std::invalid_argument("build_outage_table: row width mismatch");
    for (std::size_t t = 0; t < lambda.levels(); ++t)
      table.g[m * lambda.levels() + t] = d_hat[m][t] > d_th ? 1 : 0;
  }
  return table;
}

AllocationStrategy solve_group(const OutageTable& table, double l_th, bool literal_revert) {
  const std::size_t m = table.m;
  const std::size_t t_levels = table.lambda.levels();
  if (l_th < static_cast<double>(table.lambda.shortest()))
    throw std::invalid_argument("solve_group: budget below the shortest length");

  AllocationStrategy omega;
  omega.lambda = table.lambda;
  omega.level_index.assign(m, 0);  // everyone starts at L_1
  if (m == 0) return omega;

  std::vector<bool> determined(m, false);
  long long sum = total_length(omega.level_index, table.lambda);
  const double budget = l_th * static_cast<double>(m) + 1e-9;

  for (std::size_t t = 0; t < t_levels; ++t) {
    bool all_done = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (determined[i]) continue;
      all_done = false;
      if (table.at(i, t) != 0) continue;
      const int prior = omega.level_index[i];
      sum -= table.lambda.values[static_cast<std::size_t>(prior)];
      sum += table.lambda.values[t];
      omega.level_index[i] = static_cast<int>(t);
      if (static_cast<double>(sum) > budget) {
        // revert and terminate the whole pass
        const int revert_to = literal_revert ? static_cast<int>(t) - 1 : prior;
        const int target = revert_to < 0 ? 0 : revert_to;
        sum -= table.lambda.values[t];
        sum += table.lambda.values[static_cast<std::size_t>(target)];
        omega.level_index[i] = target;
        return omega;
      }
      determined[i] = true;
    }
    if (all_done) break;
  }
  return omega;
}

OracleResult exhaustive_oracle(const OutageTable& table, double l_th) {
  const std::size_t m = table.m;
  const std::size_t t_levels = table.lambda.levels();
  double space = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    space *= static_cast<double>(t_levels);
    if (space > 1e7) throw std::invalid_argument("exhaustive_oracle: search space too large");
  }

  const double budget = l_th * static_cast<double>(m) + 1e-9;
  std::vector<int> current(m, 0);
  OracleResult best;
  best.min_outages = -1;
  long long best_total = 0;

  while (true) {
    const long long total = total_length(current, table.lambda);
    if (static_cast<double>(total) <= budget) {
      int outages = 0;
      for (std::size_t i = 0; i < m; ++i)
        outages += table.at(i, static_cast<std::size_t>(current[i]));
      if (best.min_outages < 0 || outages < best.min_outages ||
          (outages == best.min_outages && total < best_total)) {
        best.min_outages = outages;
        best_total = total;
        best.omega.level_index = current;
      }
    }
    // odometer increment in lexicographic order
    std::size_t pos = m;
    while (pos > 0) {
      --pos;
      if (++current[pos] < static_cast<int>(t_levels)) break;
      current[pos] = 0;
      if (pos == 0) {
        if (best.min_outages < 0)
          throw std::invalid_argument("exhaustive_oracle: budget below the shortest length");
        best.omega.lambda = table.lambda;
        return best;
      }
    }
    if (m == 0) {
      best.min_outages = 0;
      best.omega.lambda = table.lambda;
      return best;
    }
  }
}

int predicted_outages(const OutageTable& table, const AllocationStrategy& omega) {
  int acc = 0;
  for (std::size_t i = 0; i < table.m; ++i)
    acc += table.at(i, static_cast<std::size_t>(omega.level_index[i]));
  return acc;
}

int indicator_bits(int t_levels, int m) {
  if (t_levels < 1 || m < 1) throw std::invalid_argument("indicator_bits: positive sizes only");
  int bits = 0;
  while ((1 << bits) < t_levels) ++bits;
  return m * bits;
}

double average_length(const AllocationStrategy& omega) {
  if (omega.level_index.empty()) throw std::invalid_argument("average_length: empty allocation");
  return static_cast<double>(total_length(omega.level_index, omega.lambda)) /
         static_cast<double>(omega.level_index.size());
}

std::vector<uint8_t> pack_indicators(const AllocationStrategy& omega) {
  const int bits = indicator_bits(static_cast<int>(omega.lambda.levels()), 1);
  std::vector<uint8_t> out((omega.level_index.size() * static_cast<std::size_t>(bits) + 7) / 8, 0);
  std::size_t bitpos = 0;
  for (int lv : omega.level_index) {
    for (int k = bits - 1; k >= 0; --k) {
      const int bit = (lv >> k) & 1;
      out[bitpos / 8] |= static_cast<uint8_t>(bit << (7 - bitpos % 8));
      ++bitpos;
    }
  }
  return out;
}

AllocationStrategy unpack_indicators(const std::vector<uint8_t>& bytes, std::size_t m,
                                     const LengthSet& lambda) {
  const int bits = indicator_bits(static_cast<int>(lambda.levels()), 1);
  if (bytes.size() < (m * static_cast<std::size_t>(bits) + 7) / 8)
    throw std::invalid_argument("unpack_indicators: byte stream too short");
  AllocationStrategy omega;
  omega.lambda = lambda;
  omega.level_index.resize(m);
  std::size_t bitpos = 0;
  for (std::size_t i = 0; i < m; ++i) {
    int lv = 0;
    for (int k = 0; k < bits; ++k) {
      lv = (lv << 1) | ((bytes[bitpos / 8] >> (7 - bitpos % 8)) & 1);
      ++bitpos;
    }
    if (lv >= static_cast<int>(lambda.levels()))
      throw std::invalid_argument("unpack_indicators: level index out of range");
    omega.level_index[i] = lv;
  }
  return omega;
}

}  // namespace scan
