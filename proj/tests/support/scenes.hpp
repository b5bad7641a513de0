#pragma once

#include "mctrack/synthetic.hpp"

namespace fixtures {

/// Pan scene: textured background, camera step `pan` per frame, one 20x20
/// square bouncing vertically at `speed` px/frame in image coordinates.
inline mctrack::SceneSpec pan_scene(int size, int frames, int pan, int speed,
                                    std::uint64_t seed = 7) {
  mctrack::SceneSpec s;
  s.width = size;
  s.height = size;
  s.frames = frames;
  s.background.seed = seed;
  s.camera_steps = mctrack::constant_camera(frames, {pan, 0});
  mctrack::ObjectSpec o;
  o.width = o.height = 20;
  o.coords = mctrack::CoordinateFrame::Image;
  o.trajectory = mctrack::linear_trajectory(s, {size / 2 - 10, size / 6}, {0, speed}, 20, 20,
                                            mctrack::CoordinateFrame::Image, true);
  s.objects.push_back(o);
  return s;
}

}  // namespace fixtures
