#pragma once

#include "himix/core.hpp"
#include "himix/instances.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace himix {

/// Write `bytes` to a sibling temp file, then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

// PMAP: "PMAP", u32le H, u32le W, u32le C, then H*W*C f32le, class fastest.
std::string encode_pmap(const ProbMap& probs);
/// The normalized flag is inferred from the per-pixel sums.
ProbMap decode_pmap(std::string_view bytes);
void save_pmap(const ProbMap& probs, const std::filesystem::path& path);
ProbMap load_pmap(const std::filesystem::path& path);

// PNG codecs. Errors throw DataError.
std::string encode_png_rgb8(const Image& image);
std::string encode_png_gray8(const Raster<std::uint8_t>& plane);
std::string encode_png_gray16(const Raster<std::uint16_t>& plane);

Image load_image_png(const std::filesystem::path& path);
void save_image_png(const Image& image, const std::filesystem::path& path);

/// Pixel value is the class index; 255 is ignore. Any other value at or above
/// num_classes is rejected with its coordinates.
LabelMap load_label_png(const std::filesystem::path& path, int num_classes);
void save_label_png(const LabelMap& labels, const std::filesystem::path& path);

/// Raw 8-bit gray plane, no range checks.
Raster<std::uint8_t> load_gray8_png(const std::filesystem::path& path);
void save_gray8_png(const Raster<std::uint8_t>& plane, const std::filesystem::path& path);

/// Palette rendering of a label map for viewing; ignore pixels are black.
Image colorize(const LabelMap& labels);

/// Instance ids as 16-bit gray plus the `id,class,domain,count` sidecar.
/// Throws DataError when an id does not fit in 16 bits.
void save_instances(const InstanceMap& instances, const std::filesystem::path& png_path,
                    const std::filesystem::path& table_path);
std::string instance_table_csv(const InstanceMap& instances);

}  // namespace himix
