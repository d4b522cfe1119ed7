// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "scan/eval/evaluator.hpp"

namespace scan {

/// Binary checkpoint: "SCEV" magic + format version, the loss/feature
/// configuration, then per-net layer dims and row-major 64-bit weight
/// blocks, all little-endian. save/load round trips byte-identically.
void save_checkpoint(const EvaluatorModel& m, const std::string& path);
EvaluatorModel load_checkpoint(const std::string& path);

}  // namespace scan
