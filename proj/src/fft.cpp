#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace addcomb::fft {

namespace {

// FFTW's planner is not thread-safe; executing an existing plan on fresh
// arrays is. Plans are made once per shape and kept for the process lifetime.
class PlanCache {
 public:
  fftw_plan get(const std::vector<std::uint64_t>& dims, std::complex<double>* sample) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(dims);
    if (it != plans_.end()) return it->second;
    std::vector<int> n;
    for (auto d : dims) {
      if (d > static_cast<std::uint64_t>(INT32_MAX)) throw std::length_error("transform axis too long");
      n.push_back(static_cast<int>(d));
    }
    auto* buf = reinterpret_cast<fftw_complex*>(sample);
    const fftw_plan plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf, FFTW_FORWARD,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("FFTW could not plan the transform");
    plans_.emplace(dims, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::vector<std::uint64_t>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void forward(std::vector<std::complex<double>>& data, const std::vector<std::uint64_t>& dims) {
  if (data.empty()) return;
  // FFTW_ESTIMATE leaves the array untouched while planning.
  const fftw_plan plan = cache().get(dims, data.data());
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace addcomb::fft
