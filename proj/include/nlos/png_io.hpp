#pragma once

#include <Eigen/Core>
#include <filesystem>

namespace nlos {

// 16-bit single-channel grayscale PNG, raw pixel values. Rejects anything
// that is not exactly 16-bit gray (no alpha, no palette, no RGB).
Eigen::Array<uint16_t, Eigen::Dynamic, Eigen::Dynamic> read_png16(
    const std::filesystem::path& path);
void write_png16(const Eigen::Array<uint16_t, Eigen::Dynamic, Eigen::Dynamic>& img,
                 const std::filesystem::path& path);

// 8-bit grayscale PNG for heat-map previews.
void write_png8(const Eigen::Array<uint8_t, Eigen::Dynamic, Eigen::Dynamic>& img,
                const std::filesystem::path& path);

bool is_png_file(const std::filesystem::path& path);

}  // namespace nlos
