#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace alocc {

/// 8-bit interleaved image, row-major; channels is 1 (gray) or 3 (RGB).
struct Image8 {
    int width = 0, height = 0, channels = 0;
    std::vector<uint8_t> pixels;
};

/// Decodes PNG (via libpng) or PGM/PPM (P2/P3/P5/P6, maxval <= 255).
/// Dispatches on file content, not extension. Throws FormatError naming the
/// file on any decode failure.
Image8 decode_image(const std::string& path);

void write_pgm(const std::string& path, const Image8& img);
void write_png(const std::string& path, const Image8& img);

} // namespace alocc
