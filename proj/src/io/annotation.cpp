// SPDX-License-Identifier: Apache-2.0
#include "evoc/io/annotation.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "evoc/io/frame_file.hpp"
#include "io/bytes.hpp"
#include "io/json_util.hpp"

namespace evoc::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RigidTransform parse_pose(const json& j, const std::string& where) {
  const auto q = detail::number_array<4>(detail::member(j, "rotation", where), where + ".rotation");
  const auto t =
      detail::number_array<3>(detail::member(j, "translation", where), where + ".translation");
  return detail::stored_pose(Quat(q[0], q[1], q[2], q[3]), Vec3(t[0], t[1], t[2]),
                             kFrameQuaternionTolerance);
}

json pose_json(double timestamp, const RigidTransform& pose) {
  const Quat& q = pose.rotation();
  const Vec3& t = pose.translation();
  return {{"timestamp", timestamp},
          {"rotation", {q.w(), q.x(), q.y(), q.z()}},
          {"translation", {t.x(), t.y(), t.z()}}};
}

bool declared(const std::vector<AnnotatedFrame>& frames, double t) {
  for (const auto& f : frames) {
    if (std::abs(f.timestamp - t) <= ObjectTrack::kTimeTolerance) return true;
  }
  return false;
}

}  // namespace

fs::path Annotation::frame_path(std::size_t i, const fs::path& base_dir) const {
  const fs::path& p = frames.at(i).path;
  return p.is_absolute() ? p : base_dir / p;
}

Annotation parse_annotation(const std::string& text) {
  const json root = detail::parse_json(text, "annotation");
  detail::require_object(root, "annotation");
  detail::reject_unknown_keys(root, {"sequence_id", "frames", "tracks"}, "annotation");

  Annotation a;
  a.sequence_id = detail::get_string(root, "sequence_id", "annotation");

  const json& frames = detail::member(root, "frames", "annotation");
  if (!frames.is_array() || frames.empty()) {
    throw InputError("annotation: \"frames\" must be a non-empty array");
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string where = "annotation.frames[" + std::to_string(i) + "]";
    detail::require_object(frames[i], where);
    detail::reject_unknown_keys(frames[i], {"timestamp", "path"}, where);
    AnnotatedFrame f{detail::get_number(frames[i], "timestamp", where),
                     detail::get_string(frames[i], "path", where)};
    if (!a.frames.empty() && !(f.timestamp > a.frames.back().timestamp)) {
      throw InputError(where + ": timestamps must be strictly increasing");
    }
    a.frames.push_back(std::move(f));
  }

  if (root.contains("tracks")) {
    const json& tracks = root.at("tracks");
    if (!tracks.is_array()) throw InputError("annotation: \"tracks\" must be an array");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      const std::string where = "annotation.tracks[" + std::to_string(i) + "]";
      detail::require_object(tracks[i], where);
      detail::reject_unknown_keys(tracks[i], {"id", "size", "poses"}, where);
      const std::string id = detail::get_string(tracks[i], "id", where);
      if (!ids.insert(id).second) throw InputError(where + ": duplicate track id " + id);
      const auto size = detail::number_array<3>(detail::member(tracks[i], "size", where),
                                                where + ".size");
      ObjectTrack track(id, Vec3(size[0], size[1], size[2]));
      const json& poses = detail::member(tracks[i], "poses", where);
      if (!poses.is_array()) throw InputError(where + ": \"poses\" must be an array");
      for (std::size_t k = 0; k < poses.size(); ++k) {
        const std::string pw = where + ".poses[" + std::to_string(k) + "]";
        detail::require_object(poses[k], pw);
        detail::reject_unknown_keys(poses[k], {"timestamp", "rotation", "translation"}, pw);
        const double t = detail::get_number(poses[k], "timestamp", pw);
        if (!declared(a.frames, t)) {
          throw InputError(pw + ": timestamp " + detail::format_number(t) +
                           " is not a declared frame");
        }
        track.set_pose(t, parse_pose(poses[k], pw));
      }
      a.tracks.push_back(std::move(track));
    }
  }
  return a;
}

std::string format_annotation(const Annotation& a) {
  json frames = json::array();
  for (const auto& f : a.frames) {
    frames.push_back({{"timestamp", f.timestamp}, {"path", f.path.generic_string()}});
  }
  json tracks = json::array();
  for (const auto& t : a.tracks) {
    json poses = json::array();
    for (const auto& [time, pose] : t.poses()) poses.push_back(pose_json(time, pose));
    tracks.push_back({{"id", t.id()},
                      {"size", {t.size().x(), t.size().y(), t.size().z()}},
                      {"poses", std::move(poses)}});
  }
  const json root = {{"sequence_id", a.sequence_id}, {"frames", frames}, {"tracks", tracks}};
  return root.dump(2) + "\n";
}

Annotation read_annotation(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  Annotation a = parse_annotation(text.str());
  const fs::path base = path.parent_path();
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    const fs::path p = a.frame_path(i, base);
    if (!fs::is_regular_file(p)) throw InputError("annotated frame file missing: " + p.string());
  }
  return a;
}

void write_annotation(const fs::path& path, const Annotation& annotation) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << format_annotation(annotation);
  if (!out) throw InputError("write failed for " + path.string());
}

std::vector<SensorFrame> load_frames(const Annotation& annotation, const fs::path& base_dir) {
  std::vector<SensorFrame> frames;
  frames.reserve(annotation.frames.size());
  for (std::size_t i = 0; i < annotation.frames.size(); ++i) {
    const fs::path p = annotation.frame_path(i, base_dir);
    SensorFrame f = read_frame(p);
    if (std::abs(f.timestamp - annotation.frames[i].timestamp) > ObjectTrack::kTimeTolerance) {
      throw InputError(p.string() + ": timestamp " + detail::format_number(f.timestamp) +
                       " differs from the annotated " +
                       detail::format_number(annotation.frames[i].timestamp));
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace evoc::io
