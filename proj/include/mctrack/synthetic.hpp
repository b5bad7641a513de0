#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mctrack/image.hpp"
#include "mctrack/sequence_io.hpp"

namespace mctrack {

struct Offset {
  int x = 0;
  int y = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

enum class CoordinateFrame { World, Image };

struct BackgroundSpec {
  enum class Kind { Noise, Checker } kind = Kind::Noise;
  std::uint64_t seed = 1;
  double low = 40.0;  // noise range before smoothing
  double high = 160.0;
  int checker_size = 8;
};

/// A solid rectangle. `trajectory` holds its top-left corner for every frame.
/// World trajectories move with the scene; image trajectories are screen-fixed.
struct ObjectSpec {
  int width = 20;
  int height = 20;
  double intensity = 230.0;
  CoordinateFrame coords = CoordinateFrame::World;
  std::vector<Offset> trajectory;
};

/// Static rectangle in world coordinates, drawn over the objects.
struct OccluderSpec {
  Box rect;
  double intensity = 90.0;
};

/// Region of per-pixel, per-frame uniform noise in [-amplitude, amplitude],
/// fixed in world coordinates.
struct FlickerSpec {
  Box region;
  double amplitude = 0.0;
  std::uint64_t seed = 7;
};

struct SceneSpec {
  int width = 200;
  int height = 200;
  int frames = 100;
  BackgroundSpec background;
  /// Camera displacement between frame t-1 and t; entry 0 is the first frame's
  /// offset. A pan of +2 moves scene content 2 px left per frame.
  std::vector<Offset> camera_steps;
  std::vector<ObjectSpec> objects;
  std::vector<OccluderSpec> occluders;
  std::vector<FlickerSpec> flicker;
};

struct SyntheticSequence {
  std::vector<Frame> frames;
  std::vector<std::vector<GroundTruthBox>> truth;  // per object, one entry per frame
  std::vector<Offset> camera_offsets;              // cumulative, per frame
};

/// Constant camera velocity for `frames` frames, starting at offset zero.
std::vector<Offset> constant_camera(int frames, Offset velocity);

std::vector<Offset> cumulative_offsets(const SceneSpec& spec);

/// Straight-line trajectory with the given velocity in `coords`. With `bounce`
/// set, the velocity component reverses whenever the object's image box would
/// leave the frame.
std::vector<Offset> linear_trajectory(const SceneSpec& spec, Offset start, Offset velocity,
                                      int width, int height, CoordinateFrame coords, bool bounce);

/// Top-left corner of object `k` in image coordinates on 0-based frame `t`.
Offset image_position(const SceneSpec& spec, const ObjectSpec& object, int t);

/// Throws SpecValidationError when any trajectory leaves the frame.
void validate(const SceneSpec& spec);

GrayImage render_background(const SceneSpec& spec);

SyntheticSequence render(const SceneSpec& spec);

/// Per-frame mask of a world-fixed rectangle after the camera shift (wraps).
Mask world_region_mask(const SceneSpec& spec, const Box& region, int t);

SceneSpec scene_from_json(const std::string& text);
SceneSpec load_scene(const std::filesystem::path& path);

/// Writes frame_NNNN.pgm files and gt_object<k>.txt truth files.
void write_sequence(const std::filesystem::path& dir, const SyntheticSequence& sequence);

}  // namespace mctrack
