#pragma once

#include <filesystem>

#include "nlos/pose.hpp"

namespace nlos {

// Pose sequences travel as JSON lines, one frame object per line:
//   {"root_pos":[x,y,z], "root_quat":[w,x,y,z],
//    "joints":{"name":[w,x,y,z],...}, "joint_pos":{"name":[x,y,z],...},
//    "end_effectors":{"name":[x,y,z],...},
//    "lin_vel":[x,y,z], "ang_vel":[x,y,z], "joint_vel":[...]}
// Absent fields default to empty/zero so fixtures can stay minimal.
PoseSequence read_pose_jsonl(const std::filesystem::path& path, double rate_hz = 30.0);
void write_pose_jsonl(const PoseSequence& seq, const std::filesystem::path& path);

// 2D keypoints, one frame per line: {"keypoints":{"hip":[x,y],...}}
Keypoints2D read_keypoints_jsonl(const std::filesystem::path& path);
void write_keypoints_jsonl(const Keypoints2D& kp, const std::filesystem::path& path);

}  // namespace nlos
