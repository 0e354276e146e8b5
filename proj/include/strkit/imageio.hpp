#pragma once

#include <filesystem>

#include "strkit/image.hpp"
#include "strkit/slic.hpp"

namespace strkit {

/// Decode a PNG or JPEG file (by content, not extension) into RGB.
/// Palette, grayscale, 16-bit and alpha variants are normalized to 8-bit RGB.
RgbImage load_rgb(const std::filesystem::path& path);

/// Decode and convert to grayscale (BT.601 luma when the file is color).
GrayImage load_gray(const std::filesystem::path& path);

/// Load a mask stored as 0/255 PNG (any decodable image works; pixels with
/// gray value >= 128 become true).
BinaryMask load_mask(const std::filesystem::path& path);

void save_png(const std::filesystem::path& path, const RgbImage& img);
void save_png(const std::filesystem::path& path, const GrayImage& img);
/// Masks are persisted as 8-bit grayscale PNG with 0/255 values.
void save_png(const std::filesystem::path& path, const BinaryMask& mask);

/// Diagnostic-only: label ids as 16-bit grayscale PNG. Ids above 65535 are
/// clamped, which loses information on absurdly fine partitions.
void save_label_png16(const std::filesystem::path& path, const LabelMap& labels);

}  // namespace strkit
