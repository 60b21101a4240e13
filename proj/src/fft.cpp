#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace phnls::detail {

namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [k, p] : plans) fftw_destroy_plan(p);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan get_plan(std::size_t n, std::size_t howmany, int sign) {
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  auto key = std::make_tuple(n, howmany, sign);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  // FFTW_ESTIMATE keeps the algorithm choice, and so the rounding, reproducible.
  int len = static_cast<int>(n);
  fftw_complex* buf = fftw_alloc_complex(n * howmany);
  fftw_plan p = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), buf, nullptr, 1, len, buf, nullptr, 1, len,
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  c.plans.emplace(key, p);
  return p;
}

}  // namespace

void fft_rows(std::complex<double>* data, std::size_t n, std::size_t howmany, int sign) {
  if (n == 0 || howmany == 0) return;
  fftw_plan p = get_plan(n, howmany, sign);
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, d, d);
}

}  // namespace phnls::detail
