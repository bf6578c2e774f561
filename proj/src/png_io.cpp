#include "nlos/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <vector>

#include "nlos/errors.hpp"

// Arrays here are shaped (width, height) and indexed (x, y): img(x, y) is
// column x of PNG row y.

namespace nlos {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

bool is_png_file(const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) return false;
  unsigned char sig[8] = {};
  if (std::fread(sig, 1, 8, f.get()) != 8) return false;
  return png_sig_cmp(sig, 0, 8) == 0;
}

Eigen::Array<uint16_t, Eigen::Dynamic, Eigen::Dynamic> read_png16(
    const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) throw DataError("cannot open PNG: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DataError("libpng init failed");
  }

  std::vector<std::vector<png_byte>> rows;
  int width = 0, height = 0, bit_depth = 0, color_type = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("malformed PNG: " + path.string());
  }

  png_init_io(png, f.get());
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  bit_depth = png_get_bit_depth(png, info);
  color_type = png_get_color_type(png, info);

  if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("depth image must be 16-bit single-channel grayscale: " + path.string() +
                    " (bit depth " + std::to_string(bit_depth) + ", color type " +
                    std::to_string(color_type) + ")");
  }

  // PNG stores 16-bit samples big-endian; swap to host order.
  png_set_swap(png);
  rows.assign(height, std::vector<png_byte>(png_get_rowbytes(png, info)));
  std::vector<png_bytep> row_ptrs(height);
  for (int y = 0; y < height; ++y) row_ptrs[y] = rows[y].data();
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Eigen::Array<uint16_t, Eigen::Dynamic, Eigen::Dynamic> img(width, height);
  for (int y = 0; y < height; ++y) {
    const uint16_t* row = reinterpret_cast<const uint16_t*>(rows[y].data());
    for (int x = 0; x < width; ++x) img(x, y) = row[x];
  }
  return img;
}

namespace {

template <typename T>
void write_png_gray(const Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic>& img,
                    const std::filesystem::path& path, int bit_depth) {
  const int width = static_cast<int>(img.rows());
  const int height = static_cast<int>(img.cols());
  if (width <= 0 || height <= 0) throw DataError("empty image: " + path.string());

  FilePtr f(std::fopen(path.string().c_str(), "wb"));
  if (!f) throw DataError("cannot write PNG: " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw DataError("libpng init failed");
  }

  std::vector<std::vector<png_byte>> rows(height, std::vector<png_byte>(width * sizeof(T)));
  for (int y = 0; y < height; ++y) {
    T* row = reinterpret_cast<T*>(rows[y].data());
    for (int x = 0; x < width; ++x) row[x] = img(x, y);
  }
  std::vector<png_bytep> row_ptrs(height);
  for (int y = 0; y < height; ++y) row_ptrs[y] = rows[y].data();

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("PNG write failed: " + path.string());
  }

  png_init_io(png, f.get());
  png_set_IHDR(png, info, width, height, bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png16(const Eigen::Array<uint16_t, Eigen::Dynamic, Eigen::Dynamic>& img,
                 const std::filesystem::path& path) {
  write_png_gray(img, path, 16);
}

void write_png8(const Eigen::Array<uint8_t, Eigen::Dynamic, Eigen::Dynamic>& img,
                const std::filesystem::path& path) {
  write_png_gray(img, path, 8);
}

}  // namespace nlos
