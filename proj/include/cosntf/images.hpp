#pragma once

#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "cosntf/tensor.hpp"

namespace cosntf {

/// Grayscale image with values in [0, 1], row-major.
struct GrayImage {
  Index height = 0;
  Index width = 0;
  std::vector<double> pixels;

  double at(Index r, Index c) const { return pixels[static_cast<std::size_t>(r * width + c)]; }
};

/// Reads a binary (P5, 8 or 16 bit) or ASCII (P2) PGM file, divided by maxval.
GrayImage read_pgm(const std::filesystem::path& path);
/// Writes an 8-bit P5 file; values are clamped to [0, 1] and rounded.
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

/// Bilinear resampling with pixel-centre alignment and edge clamping.
GrayImage resize_bilinear(const GrayImage& img, Index height, Index width);

/// Stacks every .pgm file in `dir` (sorted by file name) as lateral slices:
/// A(i, j, k) = pixel (i, k) of image j, so m = height, n = count, p = width.
/// Images are resized first when `resize` gives (height, width). Throws
/// IoError for unreadable input and DimensionError on mixed sizes.
Tensor3 ingest_images(const std::filesystem::path& dir,
                      std::optional<std::pair<Index, Index>> resize = std::nullopt);

}  // namespace cosntf
