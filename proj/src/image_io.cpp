#include "supersal/image_io.hpp"

#include "supersal/error.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <string>

namespace supersal {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      if (!tok.empty()) break;
    } else {
      tok.push_back(static_cast<char>(c));
    }
    c = in.get();
  }
  return tok;
}

Image read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  const std::string magic = pnm_token(in);
  Image img;
  if (magic == "P5") {
    img.channels = 1;
  } else if (magic == "P6") {
    img.channels = 3;
  } else {
    throw Error(ErrorCode::BadMagic, path.string() + ": expected binary PGM/PPM");
  }
  try {
    img.width = std::stoi(pnm_token(in));
    img.height = std::stoi(pnm_token(in));
    const int maxval = std::stoi(pnm_token(in));
    if (maxval != 255) throw Error(ErrorCode::InvalidArgument, path.string() + ": only maxval 255 is supported");
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::BadMagic, path.string() + ": malformed PNM header");
  }
  if (img.width <= 0 || img.height <= 0) throw Error(ErrorCode::BadMagic, path.string() + ": bad dimensions");
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * img.channels);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw Error(ErrorCode::TruncatedFile, path.string());
  }
  return img;
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(ErrorCode::BadMagic, path.string() + ": not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  Image img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::TruncatedFile, path.string() + ": PNG decode failed");
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.channels = static_cast<int>(png_get_channels(png, info));
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * img.channels);
  rows.resize(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * img.width * img.channels;
  }
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm(path);
  throw Error(ErrorCode::InvalidArgument, path.string() + ": unsupported image extension");
}

void write_pgm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << (image.channels == 3 ? "P6" : "P5") << '\n' << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void write_png(const std::filesystem::path& path, const Image& image) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "PNG encode failed: " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               image.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    png_write_row(png, image.pixels.data() + static_cast<std::size_t>(y) * image.width * image.channels);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
  std::map<int, std::filesystem::path> numbered;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string stem = entry.path().stem().string();
    if (stem.size() != 6 || !std::all_of(stem.begin(), stem.end(), [](unsigned char c) { return std::isdigit(c); })) {
      continue;
    }
    const std::string ext = lower_extension(entry.path());
    if (ext != ".png" && ext != ".pgm" && ext != ".ppm" && ext != ".pnm") continue;
    const int index = std::stoi(stem);
    if (!numbered.emplace(index, entry.path()).second) {
      throw Error(ErrorCode::InvalidArgument, dir.string() + ": duplicate frame " + stem);
    }
  }
  std::vector<std::filesystem::path> files;
  for (const auto& [index, path] : numbered) {
    if (index != static_cast<int>(files.size())) {
      throw Error(ErrorCode::InvalidArgument,
                  dir.string() + ": frame numbering has a gap before " + path.filename().string());
    }
    files.push_back(path);
  }
  return files;
}

}  // namespace supersal
