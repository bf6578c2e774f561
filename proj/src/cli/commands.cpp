#include "cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlos/lct.hpp"
#include "nlos/nlvt.hpp"
#include "nlos/parallel.hpp"
#include "nlos/png_io.hpp"
#include "nlos/pose_io.hpp"
#include "nlos/rescan.hpp"
#include "nlos/synth.hpp"

namespace nlos::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

char hex_digit(uint64_t v) { return "0123456789abcdef"[v & 0xf]; }

std::string hex64(uint64_t v) {
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[size_t(i)] = hex_digit(v);
  return s;
}

// Manifests carry only replay-stable content: no timestamps, no absolute
// paths, so identical runs write identical bytes.
void write_manifest(const fs::path& dir, json manifest) {
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw DataError("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << "\n";
}

std::vector<fs::path> sorted_files(const fs::path& dir,
                                   const std::vector<std::string>& extensions) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end())
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string level_dir_name(double shift_m) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "shift_%+.3f", shift_m);
  return buf;
}

Psf load_psf_file(const fs::path& path, const GridSpec& grid) {
  ReflectanceVolume vol = read_reflectance(path);
  if (vol.axis_kind != AxisKind::UUniform)
    throw DataError("PSF file must be reflectance-u kind: " + path.string());
  Psf psf;
  psf.grid = grid;
  if (vol.data.dim0() != 2 * grid.nx || vol.data.dim1() != 2 * grid.ny ||
      vol.data.dim2() != 2 * grid.nt)
    throw DataError("PSF dims (" + std::to_string(vol.data.dim0()) + "," +
                    std::to_string(vol.data.dim1()) + "," + std::to_string(vol.data.dim2()) +
                    ") do not match padded grid (" + std::to_string(2 * grid.nx) + "," +
                    std::to_string(2 * grid.ny) + "," + std::to_string(2 * grid.nt) +
                    "): " + path.string());
  // same dims can still mean different physics
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); };
  if (!close(vol.grid.wall_width_m, grid.wall_width_m) ||
      !close(vol.grid.bin_width_s, grid.bin_width_s))
    throw DataError("PSF was built for wall " + std::to_string(vol.grid.wall_width_m) +
                    " m / bin " + std::to_string(vol.grid.bin_width_s) +
                    " s, config wants wall " + std::to_string(grid.wall_width_m) + " m / bin " +
                    std::to_string(grid.bin_width_s) + " s: " + path.string());
  psf.data = std::move(vol.data);
  return psf;
}

Eigen::Array<uint8_t, Eigen::Dynamic, Eigen::Dynamic> to_png8(const HeatMap2D& map,
                                                              float max_value) {
  Eigen::Array<uint8_t, Eigen::Dynamic, Eigen::Dynamic> img(map.data.rows(), map.data.cols());
  if (max_value <= 0.0f) {
    img.setZero();
    return img;
  }
  for (Eigen::Index i = 0; i < map.data.rows(); ++i)
    for (Eigen::Index j = 0; j < map.data.cols(); ++j) {
      const float v = std::clamp(map.data(i, j) / max_value, 0.0f, 1.0f);
      img(i, j) = uint8_t(std::lround(v * 255.0f));
    }
  return img;
}

}  // namespace

void cmd_psf(const PipelineConfig& cfg, const fs::path& out_path) {
  Psf psf = build_psf(cfg.grid);
  ReflectanceVolume vol;
  vol.grid = cfg.grid;
  vol.axis_kind = AxisKind::UUniform;
  vol.data = std::move(psf.data);
  write_volume(vol, out_path);
}

void cmd_synth(const PipelineConfig& cfg, const fs::path& depth_dir, const fs::path& out_dir,
               const GlobalOptions& opts) {
  AugmentConfig augment = cfg.augment;
  if (opts.seed) augment.seed = *opts.seed;

  const auto files = sorted_files(depth_dir, {".png", ".nlvt"});
  if (files.empty()) throw DataError("no depth files (.png or .nlvt) in " + depth_dir.string());

  std::vector<DepthMap> depths;
  depths.reserve(files.size());
  for (const auto& f : files) depths.push_back(read_depth_map(f, cfg.grid, cfg.io.meters_per_unit));

  if (opts.verbose)
    std::cerr << "synth: " << depths.size() << " depth frames x " << augment.shift_levels_m.size()
              << " shift levels\n";

  const PsfSpectrum spectrum = psf_spectrum(build_psf(cfg.grid));
  const auto sequences = augment_dataset(depths, spectrum, augment, 30.0, opts.jobs);

  fs::create_directories(out_dir);
  json levels = json::array();
  for (size_t level = 0; level < sequences.size(); ++level) {
    const std::string name = level_dir_name(augment.shift_levels_m[level]);
    write_sequence(sequences[level], out_dir / name);
    levels.push_back({{"dir", name},
                      {"shift_m", augment.shift_levels_m[level]},
                      {"frames", sequences[level].frames.size()}});
  }

  PipelineConfig hashed = cfg;
  hashed.augment = augment;
  write_manifest(out_dir, json{{"command", "synth"},
                               {"config_hash", hex64(config_hash(hashed))},
                               {"seed", augment.seed},
                               {"seed_rule", "derive_seed(seed, level_index, frame_index)"},
                               {"rate_hz", 30.0},
                               {"levels", levels}});
}

void cmd_reconstruct(const PipelineConfig& cfg, const fs::path& psf_path,
                     const fs::path& transient_dir, const fs::path& out_dir, bool global_max,
                     const GlobalOptions& opts) {
  if (!fs::exists(psf_path)) throw DataError("missing PSF file: " + psf_path.string());
  const Psf psf = load_psf_file(psf_path, cfg.grid);
  const PsfSpectrum spectrum = psf_spectrum(psf);

  CorrectionVolume correction;
  const CorrectionVolume* correction_ptr = nullptr;
  if (!cfg.lct.correction_path.empty()) {
    ReflectanceVolume vol = read_reflectance(cfg.lct.correction_path);
    correction.data = std::move(vol.data);
    correction_ptr = &correction;
  }

  const auto files = sorted_files(transient_dir, {".nlvt"});
  if (files.empty()) throw DataError("no .nlvt transients in " + transient_dir.string());

  fs::create_directories(out_dir);
  std::vector<HeatMap2D> maps(files.size());
  std::vector<std::string> names(files.size());
  parallel_for(files.size(), opts.jobs, [&](size_t i) {
    TransientImage tau = read_transient(files[i]);
    if (!(tau.grid == cfg.grid))
      throw DataError("transient grid does not match config: " + files[i].string());
    ReflectanceVolume rho = wiener_reconstruct(tau, spectrum, cfg.lct.alpha, correction_ptr);
    maps[i] = depth_max_project(rho);
    names[i] = files[i].stem().string();
    write_volume(maps[i], out_dir / (names[i] + "_heatmap.nlvt"));
  });

  float shared_max = 0.0f;
  if (global_max)
    for (const auto& m : maps) shared_max = std::max(shared_max, m.data.maxCoeff());

  parallel_for(files.size(), opts.jobs, [&](size_t i) {
    const float scale = global_max ? shared_max : maps[i].data.maxCoeff();
    write_png8(to_png8(maps[i], scale), out_dir / (names[i] + "_heatmap.png"));
  });

  json outputs = json::array();
  for (const auto& n : names) outputs.push_back(n + "_heatmap.nlvt");
  write_manifest(out_dir, json{{"command", "reconstruct"},
                               {"config_hash", hex64(config_hash(cfg))},
                               {"alpha", cfg.lct.alpha},
                               {"correction", cfg.lct.correction_path},
                               {"normalization", global_max ? "global-max" : "per-frame-max"},
                               {"outputs", outputs}});
}

void cmd_resample(const PipelineConfig& cfg, const fs::path& in_dir, const fs::path& out_dir,
                  double from_hz, double to_hz) {
  if (!(from_hz > 0.0) || !(to_hz > 0.0)) throw ConfigError("rates must be > 0");
  if (from_hz == to_hz)
    throw ConfigError("resample: --from-hz and --to-hz are both " + std::to_string(from_hz) +
                      "; nothing to do");

  FrameSequence seq = read_sequence(in_dir);
  if (seq.frames.size() == 1)
    seq.rate_hz = from_hz;  // a lone frame carries no gap to infer the rate from
  else if (std::abs(seq.rate_hz - from_hz) > 1e-6)
    throw DataError("sequence in " + in_dir.string() + " runs at " + std::to_string(seq.rate_hz) +
                    " Hz, not --from-hz " + std::to_string(from_hz));

  FrameSequence out;
  RasterSchedule sched;
  if (to_hz < from_hz) {
    // high-rate scene -> raster-scanned capture at the scan rate
    sched = build_schedule(seq.frames.front().grid, to_hz, cfg.rescan.order);
    out = downsample_to_scan_rate(seq, sched);
  } else {
    // scanned capture -> policy-rate frames
    sched = build_schedule(seq.frames.front().grid, from_hz, cfg.rescan.order);
    out = upsample_to_policy_rate(seq, sched, to_hz);
  }
  write_sequence(out, out_dir);

  write_manifest(out_dir, json{{"command", "resample"},
                               {"config_hash", hex64(config_hash(cfg))},
                               {"from_hz", from_hz},
                               {"to_hz", to_hz},
                               {"frames_in", seq.frames.size()},
                               {"frames_out", out.frames.size()},
                               {"schedule",
                                {{"order", scan_order_name(sched.order)},
                                 {"scan_rate_hz", sched.scan_rate_hz},
                                 {"dwell_s", sched.dwell_s()}}}});
}

void cmd_metrics(const fs::path& est_path, const fs::path& gt_path,
                 const std::optional<std::pair<fs::path, fs::path>>& keypoints_2d,
                 const fs::path& csv_path, std::ostream& out) {
  const PoseSequence est = read_pose_jsonl(est_path);
  const PoseSequence gt = read_pose_jsonl(gt_path);

  std::map<std::string, double> values;
  values["mpjpe_mm"] = mpjpe_mm(est, gt);
  values["e_vel"] = velocity_error(est, gt);
  values["a_accl"] = avg_acceleration(est);
  if (keypoints_2d) {
    const Keypoints2D kp_est = read_keypoints_jsonl(keypoints_2d->first);
    const Keypoints2D kp_gt = read_keypoints_jsonl(keypoints_2d->second);
    values["e_key"] = keypoint_error_2d(kp_est, kp_gt);
  }

  for (const auto& [key, value] : values) out << key << "=" << value << "\n";

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) throw DataError("cannot write CSV: " + csv_path.string());
    std::string header, row;
    for (const auto& [key, value] : values) {
      if (!header.empty()) {
        header += ",";
        row += ",";
      }
      header += key;
      row += std::to_string(value);
    }
    csv << header << "\n" << row << "\n";
  }
}

void cmd_reward(const fs::path& est_path, const fs::path& gt_path, const RewardWeights& weights,
                const fs::path& out_csv, std::ostream& out) {
  const PoseSequence est = read_pose_jsonl(est_path);
  const PoseSequence gt = read_pose_jsonl(gt_path);
  if (est.frames.size() != gt.frames.size())
    throw DataError("reward: sequence lengths differ (" + std::to_string(est.frames.size()) +
                    " vs " + std::to_string(gt.frames.size()) + ")");

  std::ostringstream csv;
  csv << "frame,r_q,r_e,r_p,r_v,total\n";
  for (size_t t = 0; t < est.frames.size(); ++t) {
    const PoseFrame& f = est.frames[t];
    const PoseFrame& g = gt.frames[t];
    csv << t << "," << reward_pose(f, g) << "," << reward_end_effector(f, g) << ","
        << reward_root_pose(f, g) << "," << reward_root_velocity(f, g) << ","
        << total_reward(f, g, weights) << "\n";
  }

  if (out_csv.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(out_csv, std::ios::trunc);
    if (!file) throw DataError("cannot write CSV: " + out_csv.string());
    file << csv.str();
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confocal NLOS transient toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  GlobalOptions opts;
  uint64_t seed_value = 0;
  app.add_option("--config", config_path, "pipeline config file (key=value or JSON)");
  auto* seed_opt = app.add_option("--seed", seed_value, "override augment.seed");
  app.add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", opts.verbose, "chatty progress on stderr");

  auto* psf = app.add_subcommand("psf", "write the hypercone PSF as an NLVT volume");
  std::string psf_out;
  psf->add_option("--out", psf_out, "output file (default <output_dir>/psf.nlvt)");

  auto* synth = app.add_subcommand("synth", "synthesize augmented pseudo-transient sequences");
  std::string synth_depth_dir, synth_out_dir;
  synth->add_option("--depth-dir", synth_depth_dir, "directory of 16-bit PNG or NLVT depth maps");
  synth->add_option("--out-dir", synth_out_dir, "output root (one subdir per shift level)");

  auto* rec = app.add_subcommand("reconstruct", "Wiener-reconstruct transients into heat maps");
  std::string rec_psf, rec_in_dir, rec_out_dir, rec_correction;
  double rec_alpha = -1.0;
  bool rec_global_max = false;
  rec->add_option("--psf", rec_psf, "PSF file written by `psf`")->required();
  rec->add_option("--transient-dir", rec_in_dir, "directory of transient NLVT frames");
  rec->add_option("--out-dir", rec_out_dir, "output directory");
  rec->add_option("--alpha", rec_alpha, "Wiener noise parameter (overrides config)");
  rec->add_option("--correction", rec_correction, "additive inverse-PSF correction volume");
  rec->add_flag("--global-max", rec_global_max, "normalize PNGs by the sequence-wide max");

  auto* res = app.add_subcommand("resample", "raster-scan aware rate conversion");
  std::string res_in_dir, res_out_dir, res_order;
  double res_from = 0.0, res_to = 0.0;
  res->add_option("--from-hz", res_from, "input frame rate")->required();
  res->add_option("--to-hz", res_to, "output frame rate")->required();
  res->add_option("--in-dir", res_in_dir, "input sequence directory");
  res->add_option("--out-dir", res_out_dir, "output sequence directory");
  res->add_option("--order", res_order, "scan order: rowmajor|serpentine (overrides config)");

  auto* met = app.add_subcommand("metrics", "pose metrics between estimate and ground truth");
  std::string met_est, met_gt, met_csv;
  std::vector<std::string> met_kp;
  met->add_option("est", met_est, "estimated pose JSONL")->required();
  met->add_option("gt", met_gt, "ground-truth pose JSONL")->required();
  met->add_option("--keypoints2d", met_kp, "EST2D GT2D keypoint JSONL pair")->expected(2);
  met->add_option("--csv", met_csv, "also write a one-row CSV");

  auto* rew = app.add_subcommand("reward", "per-frame imitation rewards as CSV");
  std::string rew_est, rew_gt, rew_out, rew_weights;
  rew->add_option("est", rew_est, "estimated pose JSONL")->required();
  rew->add_option("gt", rew_gt, "ground-truth pose JSONL")->required();
  rew->add_option("--weights", rew_weights, "w_q,w_e,w_p,w_v (default 0.5,0.3,0.1,0.1)");
  rew->add_option("--out", rew_out, "CSV path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (seed_opt->count() > 0) opts.seed = seed_value;

    auto need_config = [&]() -> PipelineConfig {
      if (config_path.empty()) throw ConfigError("--config is required for this command");
      return load_config(config_path);
    };

    if (psf->parsed()) {
      PipelineConfig cfg = need_config();
      fs::path out_path = psf_out.empty() ? fs::path(cfg.io.output_dir) / "psf.nlvt"
                                          : fs::path(psf_out);
      if (psf_out.empty() && cfg.io.output_dir.empty())
        throw ConfigError("psf: give --out or set io.output_dir");
      if (!out_path.parent_path().empty()) fs::create_directories(out_path.parent_path());
      cmd_psf(cfg, out_path);
      if (opts.verbose) err << "wrote " << out_path << "\n";
    } else if (synth->parsed()) {
      PipelineConfig cfg = need_config();
      const std::string depth_dir = synth_depth_dir.empty() ? cfg.io.input_dir : synth_depth_dir;
      const std::string out_dir = synth_out_dir.empty() ? cfg.io.output_dir : synth_out_dir;
      if (depth_dir.empty()) throw ConfigError("synth: give --depth-dir or set io.input_dir");
      if (out_dir.empty()) throw ConfigError("synth: give --out-dir or set io.output_dir");
      cmd_synth(cfg, depth_dir, out_dir, opts);
    } else if (rec->parsed()) {
      PipelineConfig cfg = need_config();
      if (rec_alpha > 0.0) cfg.lct.alpha = rec_alpha;
      else if (rec->count("--alpha") > 0) throw ConfigError("--alpha must be > 0");
      if (!rec_correction.empty()) cfg.lct.correction_path = rec_correction;
      const std::string in_dir = rec_in_dir.empty() ? cfg.io.input_dir : rec_in_dir;
      const std::string out_dir = rec_out_dir.empty() ? cfg.io.output_dir : rec_out_dir;
      if (in_dir.empty()) throw ConfigError("reconstruct: give --transient-dir or io.input_dir");
      if (out_dir.empty()) throw ConfigError("reconstruct: give --out-dir or io.output_dir");
      cmd_reconstruct(cfg, rec_psf, in_dir, out_dir, rec_global_max, opts);
    } else if (res->parsed()) {
      PipelineConfig cfg = need_config();
      if (!res_order.empty()) cfg.rescan.order = parse_scan_order(res_order);
      const std::string in_dir = res_in_dir.empty() ? cfg.io.input_dir : res_in_dir;
      const std::string out_dir = res_out_dir.empty() ? cfg.io.output_dir : res_out_dir;
      if (in_dir.empty()) throw ConfigError("resample: give --in-dir or set io.input_dir");
      if (out_dir.empty()) throw ConfigError("resample: give --out-dir or set io.output_dir");
      cmd_resample(cfg, in_dir, out_dir, res_from, res_to);
    } else if (met->parsed()) {
      std::optional<std::pair<fs::path, fs::path>> kp;
      if (!met_kp.empty()) kp = std::make_pair(fs::path(met_kp[0]), fs::path(met_kp[1]));
      cmd_metrics(met_est, met_gt, kp, met_csv, out);
    } else if (rew->parsed()) {
      RewardWeights weights;
      if (!rew_weights.empty()) {
        double w[4];
        if (std::sscanf(rew_weights.c_str(), "%lf,%lf,%lf,%lf", &w[0], &w[1], &w[2], &w[3]) != 4)
          throw ConfigError("--weights wants w_q,w_e,w_p,w_v");
        weights = RewardWeights{w[0], w[1], w[2], w[3]};
        weights.validate();
      }
      cmd_reward(rew_est, rew_gt, weights, rew_out, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace nlos::cli
