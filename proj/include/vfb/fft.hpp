#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "vfb/grid.hpp"

namespace vfb::detail {

/// Thin cache of FFTW complex-to-complex plans keyed by shape and direction.
/// Plans are created with FFTW_ESTIMATE | FFTW_UNALIGNED so they can execute
/// on any caller-provided buffer; creation is serialized, execution is not.
class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans plans;
        return plans;
    }

    void execute(std::complex<double>* data, const Grid& grid, int sign) {
        fftw_plan plan = acquire(grid, sign);
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }

    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;

private:
    FftPlans() = default;
    ~FftPlans() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan acquire(const Grid& grid, int sign) {
        const std::tuple<int, int, int> key{grid.dim(), grid.points_per_axis(), sign};
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> scratch(grid.size());
        int n[3] = {grid.points_per_axis(), grid.points_per_axis(), grid.points_per_axis()};
        fftw_plan plan = fftw_plan_dft(
            grid.dim(), n, reinterpret_cast<fftw_complex*>(scratch.data()),
            reinterpret_cast<fftw_complex*>(scratch.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

/// Unnormalized DFT with kernel e^{-2*pi*i*j*k/N}, in place.
inline void dft_forward(std::complex<double>* data, const Grid& grid) {
    FftPlans::instance().execute(data, grid, FFTW_FORWARD);
}

/// Unnormalized DFT with kernel e^{+2*pi*i*j*k/N}, in place.
inline void dft_backward(std::complex<double>* data, const Grid& grid) {
    FftPlans::instance().execute(data, grid, FFTW_BACKWARD);
}

} // namespace vfb::detail
