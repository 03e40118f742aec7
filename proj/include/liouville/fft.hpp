#pragma once

// Thin wrapper around FFTW's complex 1d transforms. FFTW planning is not
// thread-safe and plans are bound to their buffers, so every transform runs
// through a per-size cached plan under a global lock. Sizes here are small
// (<= 2^17), the copy in/out is noise.

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace liouville::detail {

class fft_engine {
public:
    static fft_engine& instance() {
        static fft_engine engine;
        return engine;
    }

    // In-place DFT, sign = FFTW_FORWARD (-1) or FFTW_BACKWARD (+1).
    // No normalization on either direction.
    void transform(std::vector<std::complex<double>>& data, int sign) {
        const int n = static_cast<int>(data.size());
        if (n == 0) throw std::invalid_argument("fft: empty input");
        std::lock_guard<std::mutex> lock(mutex_);
        plan_pair& p = plans_for(n);
        std::memcpy(p.buf, data.data(), sizeof(fftw_complex) * n);
        fftw_execute(sign == FFTW_FORWARD ? p.fwd : p.bwd);
        std::memcpy(data.data(), p.buf, sizeof(fftw_complex) * n);
    }

    fft_engine(const fft_engine&) = delete;
    fft_engine& operator=(const fft_engine&) = delete;

private:
    struct plan_pair {
        fftw_complex* buf = nullptr;
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
    };

    fft_engine() = default;

    ~fft_engine() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.fwd);
            fftw_destroy_plan(p.bwd);
            fftw_free(p.buf);
        }
    }

    plan_pair& plans_for(int n) {
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        plan_pair p;
        p.buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (!p.buf) throw std::bad_alloc();
        p.fwd = fftw_plan_dft_1d(n, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_1d(n, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        return plans_.emplace(n, p).first->second;
    }

    std::mutex mutex_;
    std::map<int, plan_pair> plans_;
};

inline void dft_forward(std::vector<std::complex<double>>& data) {
    fft_engine::instance().transform(data, FFTW_FORWARD);
}

inline void dft_backward(std::vector<std::complex<double>>& data) {
    fft_engine::instance().transform(data, FFTW_BACKWARD);
}

}  // namespace liouville::detail
