// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tgs {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Row-major 8-bit RGB raster; pixel (u, v) has u as column, v as row.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool contains(int u, int v) const { return u >= 0 && v >= 0 && u < width_ && v < height_; }

  Rgb at(int u, int v) const;
  void set(int u, int v, Rgb c);
  /// Writes only when (u, v) is inside the raster.
  void plot(int u, int v, Rgb c) {
    if (contains(u, v)) set(u, v, c);
  }

  const std::vector<std::uint8_t>& bytes() const { return data_; }
  bool operator==(const RgbImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Deterministic PNG encoding (8-bit RGB, no filtering, zlib level 9).
std::vector<std::uint8_t> encode_png(const RgbImage& image);
void write_png(const RgbImage& image, const std::filesystem::path& path);

// Drawing primitives used by the marker renderer.
void draw_disc(RgbImage& image, double cu, double cv, int radius, Rgb color);
void draw_thick_line(RgbImage& image, double u0, double v0, double u1, double v1, int width,
                     Rgb color);
/// Decimal label centred on (cu, cv) using a built-in 3x5 digit font.
void draw_number(RgbImage& image, double cu, double cv, int number, Rgb color);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);

}  // namespace tgs
