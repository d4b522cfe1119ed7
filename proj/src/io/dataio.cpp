// SPDX-License-Identifier: Apache-2.0

#include "scan/io/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "scan/codec/dct.hpp"

namespace scan {

namespace {

constexpr std::size_t kCifarDim = 32;
constexpr std::size_t kCifarPlane = kCifarDim * kCifarDim;
constexpr std::size_t kCifarRecord = 1 + 3 * kCifarPlane;

}  // namespace

std::vector<ImageSample> read_cifar_batch(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("read_cifar_batch: cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.empty() || bytes.size() % kCifarRecord != 0)
    throw FormatError("read_cifar_batch: truncated file, stray bytes at offset " +
                      std::to_string(bytes.size() - bytes.size() % kCifarRecord));

  const std::size_t count = bytes.size() / kCifarRecord;
  std::vector<ImageSample> images(count);
  for (std::size_t r = 0; r < count; ++r) {
    const uint8_t* rec = bytes.data() + r * kCifarRecord;
    ImageSample& img = images[r];
    img.width = img.height = static_cast<int>(kCifarDim);
    img.channels = 3;
    img.pixels.resize(3 * kCifarPlane);
    // rec[0] is the label; planes follow R, G, B, each row-major
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t p = 0; p < kCifarPlane; ++p)
        img.pixels[p * 3 + c] = static_cast<double>(rec[1 + c * kCifarPlane + p]) / 255.0;
  }
  return images;
}

void write_cifar_batch(const std::string& path, const std::vector<ImageSample>& images,
                       const std::vector<uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("write_cifar_batch: cannot open " + path);
  for (std::size_t r = 0; r < images.size(); ++r) {
    const ImageSample& img = images[r];
    if (img.width != static_cast<int>(kCifarDim) || img.height != static_cast<int>(kCifarDim) ||
        img.channels != 3)
      throw FormatError("write_cifar_batch: images must be 32x32x3");
    std::vector<uint8_t> rec(kCifarRecord, 0);
    rec[0] = r < labels.size() ? labels[r] : 0;
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t p = 0; p < kCifarPlane; ++p) {
        const double v = std::clamp(img.pixels[p * 3 + c], 0.0, 1.0);
        rec[1 + c * kCifarPlane + p] = static_cast<uint8_t>(std::floor(v * 255.0 + 0.5));
      }
    out.write(reinterpret_cast<const char*>(rec.data()), static_cast<std::streamsize>(rec.size()));
  }
}

std::vector<ImageSample> synth_images(const SyntheticSpec& spec, std::size_t n, RngStream rng) {
  if (!(spec.cutoff > 0.0) || spec.cutoff > 1.0)
    throw std::invalid_argument("synth_images: cutoff must be in (0,1]");
  const std::size_t w = spec.width, h = spec.height, c = spec.channels;
  const auto& order = zigzag_order(h, w);
  const std::size_t keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(spec.cutoff * static_cast<double>(h * w))));

  std::vector<ImageSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream img_rng = rng.fork(i);
    ImageSample& img = out[i];
    img.width = spec.width;
    img.height = spec.height;
    img.channels = spec.channels;
    img.pixels.resize(w * h * c);

    std::vector<double> plane(h * w);
    for (std::size_t ch = 0; ch < c; ++ch) {
      for (auto& v : plane) v = img_rng.normal();
      auto coeffs = dct2(plane, h, w);
      if (keep < order.size()) {
        std::vector<double> kept(h * w, 0.0);
        for (std::size_t p = 0; p < keep; ++p) {
          const std::size_t idx = static_cast<std::size_t>(order[p].first) * w + order[p].second;
          kept[idx] = coeffs[idx];
        }
        coeffs.swap(kept);
      }
      const auto filtered = idct2(coeffs, h, w);
      for (std::size_t p = 0; p < h * w; ++p) img.pixels[p * c + ch] = filtered[p];
    }

    const auto [lo_it, hi_it] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi - lo > 1e-12) {
      const double inv = 1.0 / (hi - lo);
      for (auto& v : img.pixels) v = (v - lo) * inv;
    } else {
      std::fill(img.pixels.begin(), img.pixels.end(), 0.5);
    }
  }
  return out;
}

void write_ppm(const ImageSample& s, const std::string& path) {
  if (s.channels != 3) throw std::invalid_argument("write_ppm: needs a 3-channel image");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_ppm: cannot open " + path);
  out << "P6\n" << s.width << " " << s.height << "\n255\n";
  std::vector<uint8_t> row(static_cast<std::size_t>(s.width) * 3);
  for (int r = 0; r < s.height; ++r) {
    for (int col = 0; col < s.width; ++col)
      for (int c = 0; c < 3; ++c) {
        const double v = std::clamp(s.pixels[(static_cast<std::size_t>(r) * s.width + col) * 3 + c],
                                    0.0, 1.0);
        row[static_cast<std::size_t>(col) * 3 + c] =
            static_cast<uint8_t>(std::floor(v * 255.0 + 0.5));
      }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw std::runtime_error("write_ppm: write failed for " + path);
}

}  // namespace scan
