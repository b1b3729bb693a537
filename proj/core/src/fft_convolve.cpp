#include "fft_convolve.hpp"

#include <mutex>

#include <fftw3.h>

namespace whlab::detail {
namespace {

// FFTW's planner is not thread-safe.
std::mutex planner_mutex;

class FftBuffer {
public:
    explicit FftBuffer(int n)
        : n_(n), data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (data_ == nullptr) throw std::bad_alloc();
    }
    ~FftBuffer() { fftw_free(data_); }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    fftw_complex* get() noexcept { return data_; }
    std::complex<double>& operator[](int i) noexcept {
        return reinterpret_cast<std::complex<double>*>(data_)[i];
    }
    int size() const noexcept { return n_; }

private:
    int n_;
    fftw_complex* data_;
};

class Plan {
public:
    Plan(FftBuffer& buf, int sign) {
        std::lock_guard lock(planner_mutex);
        plan_ = fftw_plan_dft_1d(buf.size(), buf.get(), buf.get(), sign, FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex);
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

}  // namespace

Eigen::VectorXcd linear_convolve_fft(const std::vector<std::complex<double>>& a,
                                     const Eigen::VectorXcd& b) {
    const int la = static_cast<int>(a.size());
    const int lb = static_cast<int>(b.size());
    const int out_len = la + lb - 1;
    const int n = la + lb;  // padding >= signal + kernel length

    FftBuffer fa(n), fb(n);
    for (int i = 0; i < n; ++i) {
        fa[i] = i < la ? a[static_cast<std::size_t>(i)] : 0.0;
        fb[i] = i < lb ? b[i] : 0.0;
    }
    Plan pa(fa, FFTW_FORWARD), pb(fb, FFTW_FORWARD), inv(fa, FFTW_BACKWARD);
    pa.execute();
    pb.execute();
    for (int i = 0; i < n; ++i) fa[i] *= fb[i];
    inv.execute();

    Eigen::VectorXcd out(out_len);
    for (int i = 0; i < out_len; ++i) out[i] = fa[i] / static_cast<double>(n);
    return out;
}

}  // namespace whlab::detail
