#pragma once

#include <vector>

#include "mctrack/evaluation.hpp"

namespace fixtures {

/// A frame-per-judgement set with the given outcome counts. TD frames carry
/// centroid errors cycling through 0..errors_mod-1.
inline std::vector<mctrack::FrameJudgement> judgement_set(int td, int fd_only, int md, int tn,
                                                          int errors_mod = 7) {
  std::vector<mctrack::FrameJudgement> out;
  int frame = 1;
  for (int i = 0; i < td; ++i)
    out.push_back({frame++, mctrack::Outcome::TD, static_cast<double>(i % errors_mod)});
  for (int i = 0; i < fd_only; ++i) out.push_back({frame++, mctrack::Outcome::FD, std::nullopt});
  for (int i = 0; i < md; ++i) out.push_back({frame++, mctrack::Outcome::MD, std::nullopt});
  for (int i = 0; i < tn; ++i) out.push_back({frame++, mctrack::Outcome::TN, std::nullopt});
  return out;
}

}  // namespace fixtures
