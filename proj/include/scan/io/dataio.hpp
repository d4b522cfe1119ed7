// SPDX-License-Identifier: Apache-2.0
//
// Image ingestion and export. CIFAR-10 binary batches (3073-byte records:
// label byte + 1024 R + 1024 G + 1024 B, row-major within plane), filtered
// synthetic image generation, and binary PPM output for eyeballing results.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "scan/codec/codec.hpp"
#include "scan/numerics/rng.hpp"

namespace scan {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse a CIFAR-10 binary batch. Pixels map byte/255 into [0,1]; plane-major
/// source order becomes interleaved RGB, row-major. Throws FormatError (with
/// the offending offset) when the file is not a whole number of records.
std::vector<ImageSample> read_cifar_batch(const std::string& path);

/// Inverse of read_cifar_batch for fixture construction; labels default to 0.
void write_cifar_batch(const std::string& path, const std::vector<ImageSample>& images,
                       const std::vector<uint8_t>& labels = {});

struct SyntheticSpec {
  int width = 32;
  int height = 32;
  int channels = 3;
  double cutoff = 0.5;  // fraction of zigzag-ordered coefficients kept, (0,1]
};

/// Low-pass filtered white noise, min-max renormalized to [0,1]. The cutoff
/// fraction is the image-complexity knob: lower cutoff, smoother image.
std::vector<ImageSample> synth_images(const SyntheticSpec& spec, std::size_t n, RngStream rng);

/// Binary PPM (P6), maxval 255, rounding half-up.
void write_ppm(const ImageSample& s, const std::string& path);

}  // namespace scan
