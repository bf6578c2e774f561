#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "nlos/grid.hpp"
#include "nlos/rescan.hpp"
#include "nlos/synth.hpp"

namespace nlos {

// Everything a pipeline run needs, grouped by module. Accepted on disk as
// either flat dotted key=value lines ("grid.nx = 32", '#' comments) or a
// single JSON object ({"grid":{"nx":32},...}). Unknown keys are rejected;
// grid.wall_width_m and grid.bin_width_s are required since no sane default
// exists for a capture setup.
struct PipelineConfig {
  GridSpec grid;
  AugmentConfig augment;
  struct Lct {
    double alpha = 0.1;
    std::string correction_path;  // optional NLVT reflectance-u file
  } lct;
  struct Rescan {
    double scan_rate_hz = 4.0;
    ScanOrder order = ScanOrder::RowMajor;
  } rescan;
  struct Io {
    std::string input_dir;
    std::string output_dir;
    double meters_per_unit = 0.001;
  } io;

  void validate() const;
};

PipelineConfig parse_config_text(const std::string& text, const std::string& origin = "config");
PipelineConfig load_config(const std::filesystem::path& path);

// Canonical serialization (sorted JSON); equal configs hash equal.
std::string config_canonical(const PipelineConfig& cfg);
uint64_t config_hash(const PipelineConfig& cfg);

std::string scan_order_name(ScanOrder order);
ScanOrder parse_scan_order(const std::string& name);

}  // namespace nlos
