#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include "nlos/volume.hpp"

namespace nlos {

// NLVT binary volume container.
//
// Layout (all integers and floats little-endian):
//   bytes 0-3   magic "NLVT"
//   byte  4     version, currently 1
//   byte  5     kind (0 transient, 1 reflectance-z, 2 reflectance-u,
//               3 heatmap, 4 depth)
//   bytes 6-7   reserved, 0
//   3 x u32     dims d0, d1, d2
//   5 x f64     wall_width_m, bin_width_s, t_start, meters_per_unit,
//               reserved (0)
//   payload     d0*d1*d2 float32 values, d0 (x) outermost, d2 innermost
enum class VolumeKind : uint8_t {
  Transient = 0,
  ReflectanceZ = 1,
  ReflectanceU = 2,
  HeatMap = 3,
  Depth = 4,
};

constexpr uint8_t kNlvtVersion = 1;
constexpr size_t kNlvtHeaderBytes = 60;

using AnyVolume = std::variant<TransientImage, ReflectanceVolume, HeatMap2D, DepthMap>;

void write_volume(const TransientImage& vol, const std::filesystem::path& path);
void write_volume(const ReflectanceVolume& vol, const std::filesystem::path& path);
void write_volume(const HeatMap2D& vol, const std::filesystem::path& path);
void write_volume(const DepthMap& vol, const std::filesystem::path& path);
void write_volume(const AnyVolume& vol, const std::filesystem::path& path);

AnyVolume read_volume(const std::filesystem::path& path);

// Convenience readers that enforce the expected kind.
TransientImage read_transient(const std::filesystem::path& path);
ReflectanceVolume read_reflectance(const std::filesystem::path& path);

// Reads a depth map from either a 16-bit single-channel grayscale PNG or an
// NLVT depth file. For PNG input, pixel value k maps to k * meters_per_unit;
// 0 stays the "no surface" sentinel; values beyond grid.z_max() clamp to
// z_max. NLVT depth payloads already store meters and use the scale recorded
// in their own header.
DepthMap read_depth_map(const std::filesystem::path& path, const GridSpec& grid,
                        double meters_per_unit);

// Sequences are directories of numbered NLVT transient files.
void write_sequence(const FrameSequence& seq, const std::filesystem::path& dir);
FrameSequence read_sequence(const std::filesystem::path& dir);
std::string frame_file_name(size_t index);

}  // namespace nlos
