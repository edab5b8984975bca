#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace supersal {

// 8-bit image, interleaved channels (1 = gray, 3 = RGB).
struct Image {
  int width{0};
  int height{0};
  int channels{1};
  std::vector<std::uint8_t> pixels;
};

// Binary PGM/PPM (maxval 255) or PNG (8-bit gray or RGB; alpha is dropped).
Image read_image(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const Image& image);
void write_png(const std::filesystem::path& path, const Image& image);

// Frame files named 000000.*, 000001.*, ... in order; numbering must be contiguous.
std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir);

}  // namespace supersal
