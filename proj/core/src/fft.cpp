#include "fft.hpp"

#include <mutex>

#include <fftw3.h>

namespace longwave::detail {

void fft_inplace(std::vector<std::complex<double>>& a, int sign) {
  static std::mutex plan_mutex;
  auto* data = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(a.size()), data, data,
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(plan);
  }
}

}  // namespace longwave::detail
