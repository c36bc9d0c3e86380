#include "himix/io.hpp"

#include <png.h>

#include <array>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <sstream>

namespace himix {

namespace {

struct DecodedPng {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  int color_type = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> data;  // tightly packed rows as stored
  std::size_t row_bytes = 0;
};

struct ReadCursor {
  std::string_view bytes;
  std::size_t pos = 0;
};

void read_callback(png_structp png, png_bytep out, png_size_t n) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + n > cur->bytes.size())
    png_error(png, "truncated PNG");
  std::memcpy(out, cur->bytes.data() + cur->pos, n);
  cur->pos += n;
}

void write_callback(png_structp png, png_bytep in, png_size_t n) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(in), n);
}

void flush_callback(png_structp) {}

void error_callback(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  *err = msg;
  png_longjmp(png, 1);
}

void warning_callback(png_structp, png_const_charp) {}

DecodedPng decode_png(std::string_view bytes, const std::string& name) {
  if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0)
    throw DataError(name + ": not a PNG file");
  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, error_callback, warning_callback);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("libpng initialisation failed");
  }
  ReadCursor cursor{bytes, 0};
  DecodedPng out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError(name + ": " + err);
  }
  png_set_read_fn(png, &cursor, read_callback);
  png_read_info(png, info);
  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  out.color_type = png_get_color_type(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  if (out.bit_depth == 16)
    png_set_swap(png);  // host little-endian order for 16-bit samples
  png_read_update_info(png, info);
  out.row_bytes = png_get_rowbytes(png, info);
  out.data.resize(out.row_bytes * out.height);
  rows.resize(out.height);
  for (std::uint32_t y = 0; y < out.height; ++y)
    rows[y] = out.data.data() + y * out.row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

std::string encode_png(std::uint32_t width, std::uint32_t height, int color_type, int bit_depth,
                       const std::uint8_t* data, std::size_t row_bytes) {
  std::string err;
  std::string out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, error_callback, warning_callback);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw DataError("libpng initialisation failed");
  }
  std::vector<png_bytep> rows(height);
  for (std::uint32_t y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(data + y * row_bytes);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("PNG encode failed: " + err);
  }
  png_set_write_fn(png, &out, write_callback, flush_callback);
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16)
    png_set_swap(png);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DecodedPng decode_gray8(const std::filesystem::path& path) {
  auto png = decode_png(read_file(path), path.string());
  if (png.color_type != PNG_COLOR_TYPE_GRAY || png.bit_depth != 8)
    throw DataError(path.string() + ": expected 8-bit grayscale");
  return png;
}

constexpr std::array<std::array<std::uint8_t, 3>, 7> kPalette = {{
    {255, 255, 255},
    {255, 0, 0},
    {255, 255, 0},
    {0, 0, 255},
    {159, 129, 183},
    {0, 255, 0},
    {255, 195, 128},
}};

}  // namespace

std::string encode_png_rgb8(const Image& image) {
  return encode_png(static_cast<std::uint32_t>(image.width()), static_cast<std::uint32_t>(image.height()),
                    PNG_COLOR_TYPE_RGB, 8, image.pixels().data(), static_cast<std::size_t>(image.width()) * 3);
}

std::string encode_png_gray8(const Raster<std::uint8_t>& plane) {
  if (plane.channels() != 1)
    throw DataError("gray PNG needs a single-channel raster");
  return encode_png(static_cast<std::uint32_t>(plane.width()), static_cast<std::uint32_t>(plane.height()),
                    PNG_COLOR_TYPE_GRAY, 8, plane.pixels().data(), static_cast<std::size_t>(plane.width()));
}

std::string encode_png_gray16(const Raster<std::uint16_t>& plane) {
  if (plane.channels() != 1)
    throw DataError("gray PNG needs a single-channel raster");
  return encode_png(static_cast<std::uint32_t>(plane.width()), static_cast<std::uint32_t>(plane.height()),
                    PNG_COLOR_TYPE_GRAY, 16, reinterpret_cast<const std::uint8_t*>(plane.pixels().data()),
                    static_cast<std::size_t>(plane.width()) * 2);
}

Image load_image_png(const std::filesystem::path& path) {
  auto png = decode_png(read_file(path), path.string());
  if (png.color_type != PNG_COLOR_TYPE_RGB || png.bit_depth != 8)
    throw DataError(path.string() + ": expected 8-bit RGB");
  Image image(png.height, png.width);
  std::memcpy(image.pixels().data(), png.data.data(), png.data.size());
  return image;
}

void save_image_png(const Image& image, const std::filesystem::path& path) {
  write_file_atomic(path, encode_png_rgb8(image));
}

Raster<std::uint8_t> load_gray8_png(const std::filesystem::path& path) {
  auto png = decode_gray8(path);
  Raster<std::uint8_t> plane(png.height, png.width, 1);
  std::memcpy(plane.pixels().data(), png.data.data(), png.data.size());
  return plane;
}

void save_gray8_png(const Raster<std::uint8_t>& plane, const std::filesystem::path& path) {
  write_file_atomic(path, encode_png_gray8(plane));
}

LabelMap load_label_png(const std::filesystem::path& path, int num_classes) {
  if (num_classes < 1 || num_classes > kIgnoreLabel)
    throw DataError("num_classes out of range");
  auto plane = load_gray8_png(path);
  LabelMap labels(plane.height(), plane.width(), num_classes);
  labels.pixels() = plane.pixels();
  for (Index y = 0; y < labels.height(); ++y) {
    for (Index x = 0; x < labels.width(); ++x) {
      const auto v = labels(y, x);
      if (v != kIgnoreLabel && v >= num_classes) {
        std::ostringstream os;
        os << path.string() << ": class index " << int(v) << " at (row " << y << ", col " << x
           << ") out of range for " << num_classes << " classes";
        throw DataError(os.str());
      }
    }
  }
  return labels;
}

void save_label_png(const LabelMap& labels, const std::filesystem::path& path) {
  save_gray8_png(labels, path);
}

Image colorize(const LabelMap& labels) {
  Image out(labels.height(), labels.width());
  const auto* cls = labels.pixels().data();
  for (Index i = 0; i < labels.size(); ++i) {
    if (cls[i] == kIgnoreLabel)
      continue;
    const auto& color = kPalette[cls[i] % kPalette.size()];
    for (Index c = 0; c < 3; ++c)
      out.pixels()(i, c) = color[static_cast<std::size_t>(c)];
  }
  return out;
}

std::string instance_table_csv(const InstanceMap& instances) {
  std::string out = "id,class,domain,count\n";
  for (auto id : instances.ids()) {
    const auto& info = instances.info(id);
    out += std::to_string(id) + ',' + std::to_string(int(info.class_index)) + ',' + to_string(info.domain) + ',' +
           std::to_string(info.pixel_count) + '\n';
  }
  return out;
}

void save_instances(const InstanceMap& instances, const std::filesystem::path& png_path,
                    const std::filesystem::path& table_path) {
  if (!instances.empty() && instances.last_id() > 0xFFFFu)
    throw DataError("instance ids exceed the 16-bit PNG range");
  Raster<std::uint16_t> plane(instances.height(), instances.width(), 1);
  plane.pixels() = instances.pixels().cast<std::uint16_t>();
  write_file_atomic(png_path, encode_png_gray16(plane));
  write_file_atomic(table_path, instance_table_csv(instances));
}

}  // namespace himix
