#include "nlos/pose_io.hpp"

#include <fstream>

#include "json.hpp"

namespace nlos {

using nlohmann::json;

namespace {

Eigen::Vector3d vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw DataError(where + ": expected [x,y,z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Eigen::Vector2d vec2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw DataError(where + ": expected [x,y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Eigen::Quaterniond quat(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) throw DataError(where + ": expected [w,x,y,z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }
json to_json(const Eigen::Quaterniond& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

PoseFrame parse_frame(const json& j, const std::string& where) {
  PoseFrame f;
  if (j.contains("root_pos")) f.root_pos = vec3(j["root_pos"], where + " root_pos");
  if (j.contains("root_quat")) f.root_quat = quat(j["root_quat"], where + " root_quat");
  if (j.contains("joints"))
    for (const auto& [name, q] : j["joints"].items())
      f.joint_quats.emplace(name, quat(q, where + " joint " + name));
  if (j.contains("joint_pos"))
    for (const auto& [name, p] : j["joint_pos"].items())
      f.joint_pos.emplace(name, vec3(p, where + " joint_pos " + name));
  if (j.contains("end_effectors"))
    for (const auto& [name, p] : j["end_effectors"].items())
      f.end_effectors.emplace(name, vec3(p, where + " end_effector " + name));
  if (j.contains("lin_vel")) f.lin_vel = vec3(j["lin_vel"], where + " lin_vel");
  if (j.contains("ang_vel")) f.ang_vel = vec3(j["ang_vel"], where + " ang_vel");
  if (j.contains("joint_vel")) {
    const auto& arr = j["joint_vel"];
    if (!arr.is_array()) throw DataError(where + " joint_vel: expected array");
    f.joint_vel.resize(Eigen::Index(arr.size()));
    for (size_t i = 0; i < arr.size(); ++i) f.joint_vel[Eigen::Index(i)] = arr[i].get<double>();
  }
  f.validate();
  return f;
}

json frame_to_json(const PoseFrame& f) {
  json j;
  j["root_pos"] = to_json(f.root_pos);
  j["root_quat"] = to_json(f.root_quat);
  json joints = json::object();
  for (const auto& [name, q] : f.joint_quats) joints[name] = to_json(q);
  j["joints"] = joints;
  json pos = json::object();
  for (const auto& [name, p] : f.joint_pos) pos[name] = to_json(p);
  j["joint_pos"] = pos;
  json eff = json::object();
  for (const auto& [name, p] : f.end_effectors) eff[name] = to_json(p);
  j["end_effectors"] = eff;
  j["lin_vel"] = to_json(f.lin_vel);
  j["ang_vel"] = to_json(f.ang_vel);
  j["joint_vel"] = json::array();
  for (Eigen::Index i = 0; i < f.joint_vel.size(); ++i) j["joint_vel"].push_back(f.joint_vel[i]);
  return j;
}

std::vector<json> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());
  std::vector<json> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": invalid JSON");
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace

PoseSequence read_pose_jsonl(const std::filesystem::path& path, double rate_hz) {
  PoseSequence seq;
  seq.rate_hz = rate_hz;
  size_t n = 0;
  for (const auto& j : read_lines(path))
    seq.frames.push_back(parse_frame(j, path.string() + ":" + std::to_string(++n)));
  if (seq.frames.empty()) throw DataError("no pose frames in " + path.string());
  return seq;
}

void write_pose_jsonl(const PoseSequence& seq, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write: " + path.string());
  for (const auto& f : seq.frames) out << frame_to_json(f).dump() << "\n";
  if (!out) throw DataError("write failed: " + path.string());
}

Keypoints2D read_keypoints_jsonl(const std::filesystem::path& path) {
  Keypoints2D kp;
  size_t n = 0;
  for (const auto& j : read_lines(path)) {
    ++n;
    const std::string where = path.string() + ":" + std::to_string(n);
    if (!j.contains("keypoints")) throw DataError(where + ": missing 'keypoints'");
    std::map<std::string, Eigen::Vector2d> frame;
    for (const auto& [name, p] : j["keypoints"].items())
      frame.emplace(name, vec2(p, where + " " + name));
    kp.frames.push_back(std::move(frame));
  }
  if (kp.frames.empty()) throw DataError("no keypoint frames in " + path.string());
  return kp;
}

void write_keypoints_jsonl(const Keypoints2D& kp, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write: " + path.string());
  for (const auto& frame : kp.frames) {
    json j;
    json pts = json::object();
    for (const auto& [name, p] : frame) pts[name] = json::array({p.x(), p.y()});
    j["keypoints"] = pts;
    out << j.dump() << "\n";
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace nlos
