// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "evoc/sensor.hpp"

namespace evoc::io {

struct AnnotatedFrame {
  double timestamp = 0.0;
  /// As written in the file: relative paths are relative to the annotation
  /// file's directory.
  std::filesystem::path path;
};

/// Sequence description in JSON:
///
///   {
///     "sequence_id": "scene-0001",
///     "frames": [{"timestamp": 0.0, "path": "frames/000000.evoc"}, ...],
///     "tracks": [{"id": "car-1", "size": [4.0, 2.0, 1.6],
///                 "poses": [{"timestamp": 0.0,
///                            "rotation": [qw, qx, qy, qz],
///                            "translation": [x, y, z]}, ...]}, ...]
///   }
struct Annotation {
  std::string sequence_id;
  std::vector<AnnotatedFrame> frames;
  std::vector<ObjectTrack> tracks;

  /// Frame path resolved against `base_dir`.
  std::filesystem::path frame_path(std::size_t i, const std::filesystem::path& base_dir) const;
};

/// Parses and checks the annotation: at least one frame, strictly increasing
/// timestamps, unique track ids, and track poses only at declared frame
/// timestamps. Frame files are not opened here.
Annotation parse_annotation(const std::string& text);
std::string format_annotation(const Annotation& annotation);

/// Also checks that every referenced frame file exists.
Annotation read_annotation(const std::filesystem::path& path);
void write_annotation(const std::filesystem::path& path, const Annotation& annotation);

/// Reads every frame listed in the annotation. Frame timestamps must match
/// the annotated ones within ObjectTrack::kTimeTolerance.
std::vector<SensorFrame> load_frames(const Annotation& annotation,
                                     const std::filesystem::path& base_dir);

}  // namespace evoc::io
