// SPDX-License-Identifier: Apache-2.0
#include "volcap/core/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <stdexcept>

namespace volcap {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const char* what) {
  throw std::runtime_error(std::string(what) + ": " + path.string());
}

void write_png_impl(const std::filesystem::path& path, int width, int height,
                    int bit_depth, int color_type, const std::vector<png_bytep>& rows) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) fail(path, "cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    fail(path, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "png write error");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);  // in-memory values are host little-endian
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FilePtr fp;

  explicit PngReader(const std::filesystem::path& path) {
    fp = FilePtr(std::fopen(path.string().c_str(), "rb"));
    if (!fp) fail(path, "cannot open for reading");
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) fail(path, "libpng init failed");
    if (setjmp(png_jmpbuf(png))) fail(path, "png read error");
    png_init_io(png, fp.get());
    png_read_info(png, info);
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

}  // namespace

void write_png(const std::filesystem::path& path, const ColorImage& img) {
  std::vector<png_bytep> rows(img.height());
  auto* base = reinterpret_cast<const std::uint8_t*>(img.data().data());
  for (int y = 0; y < img.height(); ++y)
    rows[y] = const_cast<png_bytep>(base + static_cast<std::size_t>(y) * img.width() * 3);
  write_png_impl(path, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB, rows);
}

void write_png(const std::filesystem::path& path, const DepthImage& img) {
  std::vector<png_bytep> rows(img.height());
  auto* base = reinterpret_cast<const std::uint8_t*>(img.data().data());
  for (int y = 0; y < img.height(); ++y)
    rows[y] = const_cast<png_bytep>(base + static_cast<std::size_t>(y) * img.width() * 2);
  write_png_impl(path, img.width(), img.height(), 16, PNG_COLOR_TYPE_GRAY, rows);
}

ColorImage read_color_png(const std::filesystem::path& path) {
  PngReader r(path);
  if (setjmp(png_jmpbuf(r.png))) fail(path, "png read error");
  png_set_expand(r.png);
  png_set_strip_16(r.png);
  png_set_strip_alpha(r.png);
  png_set_gray_to_rgb(r.png);
  png_read_update_info(r.png, r.info);
  const int w = png_get_image_width(r.png, r.info);
  const int h = png_get_image_height(r.png, r.info);
  if (png_get_rowbytes(r.png, r.info) != static_cast<std::size_t>(w) * 3)
    fail(path, "unexpected png layout for color image");
  ColorImage img(w, h);
  std::vector<png_bytep> rows(h);
  auto* base = reinterpret_cast<std::uint8_t*>(img.data().data());
  for (int y = 0; y < h; ++y) rows[y] = base + static_cast<std::size_t>(y) * w * 3;
  png_read_image(r.png, rows.data());
  return img;
}

DepthImage read_depth_png(const std::filesystem::path& path) {
  PngReader r(path);
  if (setjmp(png_jmpbuf(r.png))) fail(path, "png read error");
  if (png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_GRAY ||
      png_get_bit_depth(r.png, r.info) != 16)
    fail(path, "depth png must be 16-bit grayscale");
  png_set_swap(r.png);
  png_read_update_info(r.png, r.info);
  const int w = png_get_image_width(r.png, r.info);
  const int h = png_get_image_height(r.png, r.info);
  DepthImage img(w, h);
  std::vector<png_bytep> rows(h);
  auto* base = reinterpret_cast<std::uint8_t*>(img.data().data());
  for (int y = 0; y < h; ++y) rows[y] = base + static_cast<std::size_t>(y) * w * 2;
  png_read_image(r.png, rows.data());
  return img;
}

}  // namespace volcap
