#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace mctrack::detail {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan plan_for(int width, int height, int sign) {
  static std::map<std::tuple<int, int, int>, PlanPtr> plans;
  std::lock_guard lock(planner_mutex());
  auto& slot = plans[{width, height, sign}];
  if (!slot) {
    std::vector<fftw_complex> scratch(static_cast<std::size_t>(width) * height);
    slot.reset(fftw_plan_dft_2d(height, width, scratch.data(), scratch.data(), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED));
  }
  return slot.get();
}

}  // namespace

void dft2d(std::span<std::complex<double>> data, int width, int height, int sign) {
  static_assert(sizeof(std::complex<double>) == sizeof(fftw_complex));
  fftw_plan plan = plan_for(width, height, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace mctrack::detail
