#include "fft2d.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>
#include <stdexcept>

namespace rdmusic::detail {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
};

}  // namespace

void fft2d_positive_inplace(std::span<std::complex<double>> data, std::size_t rows, std::size_t cols,
                            std::size_t count) {
  if (data.size() != rows * cols * count) throw std::invalid_argument("fft2d: size mismatch");
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  const int n[2] = {static_cast<int>(rows), static_cast<int>(cols)};
  const int dist = static_cast<int>(rows * cols);
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_many_dft(2, n, static_cast<int>(count), buf, nullptr, 1, dist, buf, nullptr, 1,
                                  dist, FFTW_BACKWARD, FFTW_ESTIMATE));
  }
  if (!plan) throw std::runtime_error("fft2d: FFTW planning failed");
  fftw_execute(plan.get());
}

}  // namespace rdmusic::detail
