#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlos/config.hpp"
#include "nlos/pose.hpp"

namespace nlos::cli {

struct GlobalOptions {
  std::optional<uint64_t> seed;  // overrides augment.seed
  int jobs = 1;
  bool verbose = false;
};

// Full dispatch from argv-style arguments (without the program name).
// Returns the process exit code: 0 ok, 1 usage/config error, 2 data error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Individual commands; throw ConfigError/DataError on failure.
void cmd_psf(const PipelineConfig& cfg, const std::filesystem::path& out_path);
void cmd_synth(const PipelineConfig& cfg, const std::filesystem::path& depth_dir,
               const std::filesystem::path& out_dir, const GlobalOptions& opts);
void cmd_reconstruct(const PipelineConfig& cfg, const std::filesystem::path& psf_path,
                     const std::filesystem::path& transient_dir,
                     const std::filesystem::path& out_dir, bool global_max,
                     const GlobalOptions& opts);
void cmd_resample(const PipelineConfig& cfg, const std::filesystem::path& in_dir,
                  const std::filesystem::path& out_dir, double from_hz, double to_hz);
void cmd_metrics(const std::filesystem::path& est_path, const std::filesystem::path& gt_path,
                 const std::optional<std::pair<std::filesystem::path, std::filesystem::path>>&
                     keypoints_2d,
                 const std::filesystem::path& csv_path, std::ostream& out);
void cmd_reward(const std::filesystem::path& est_path, const std::filesystem::path& gt_path,
                const RewardWeights& weights, const std::filesystem::path& out_csv,
                std::ostream& out);

}  // namespace nlos::cli
