#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace dispersim::detail {

namespace {

class PlanCache {
public:
  ~PlanCache() {
    for (auto &[key, plan] : plans_) fftw_destroy_plan(plan);
  }

  // n2 == 0 selects a 1-D plan of length n1.
  fftw_plan get(int n1, int n2, FftDirection dir) {
    const auto key = std::make_tuple(n1, n2, dir == FftDirection::forward);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    // The planner may scribble on its arrays; plan on scratch storage and
    // execute on caller data through the new-array interface.
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n1) *
                                             (n2 == 0 ? 1 : n2));
    auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
    const int sign = dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = n2 == 0 ? fftw_plan_dft_1d(n1, buf, buf, sign, flags)
                             : fftw_plan_dft_2d(n2, n1, buf, buf, sign, flags);
    if (plan == nullptr) throw std::runtime_error("fftw: planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache &cache() {
  static PlanCache instance;
  return instance;
}

} // namespace

void fft2d(std::span<std::complex<double>> data, int n1, int n2,
           FftDirection dir) {
  if (data.size() != static_cast<std::size_t>(n1) * n2)
    throw std::invalid_argument("fft2d: buffer size does not match shape");
  fftw_plan plan = cache().get(n1, n2, dir);
  auto *buf = reinterpret_cast<fftw_complex *>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

void fft1d(std::span<std::complex<double>> data, FftDirection dir) {
  if (data.empty()) return;
  fftw_plan plan = cache().get(static_cast<int>(data.size()), 0, dir);
  auto *buf = reinterpret_cast<fftw_complex *>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

} // namespace dispersim::detail
