#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "weylscale/errors.hpp"

namespace weylscale::detail {

// Thin FFTW wrapper.  Plans are cached per (size, direction); FFTW plan
// creation is not thread safe, execution is, hence the mutex around the cache.
class FftPlans {
  public:
    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    void transform(std::vector<std::complex<double>>& data, int sign) {
        fftw_plan plan = get(data.size(), sign);
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                         reinterpret_cast<fftw_complex*>(data.data()));
    }

  private:
    FftPlans() = default;
    ~FftPlans() = default;

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        // UNALIGNED so the plan is valid for any caller buffer.
        std::vector<std::complex<double>> scratch(n);
        fftw_plan plan = fftw_plan_dft_1d(
            static_cast<int>(n), reinterpret_cast<fftw_complex*>(scratch.data()),
            reinterpret_cast<fftw_complex*>(scratch.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw numerical_guard("fft_plan", "fftw plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void fft_forward(std::vector<std::complex<double>>& data) {
    FftPlans::instance().transform(data, FFTW_FORWARD);
}

inline void fft_backward(std::vector<std::complex<double>>& data) {
    FftPlans::instance().transform(data, FFTW_BACKWARD);
}

}  // namespace weylscale::detail
