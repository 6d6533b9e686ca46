#include "hopc/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "hopc/errors.hpp"

namespace hopc {

namespace {
// FFTW's planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft2D::Fft2D(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw InvalidParameter("FFT dimensions must be >= 1");
    std::lock_guard<std::mutex> lock(planner_mutex());
    std::vector<std::complex<double>> scratch_in(static_cast<std::size_t>(width) * height);
    std::vector<std::complex<double>> scratch_out(scratch_in.size());
    auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
    auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
    // FFTW_UNALIGNED lets the plans execute on ordinary vector storage.
    fwd_plan_ = fftw_plan_dft_2d(height, width, in, out, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    inv_plan_ = fftw_plan_dft_2d(height, width, in, out, FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_plan_ || !inv_plan_) throw Error("FFTW planning failed");
}

Fft2D::~Fft2D() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_plan_));
}

void Fft2D::forward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(fwd_plan_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft2D::inverse(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(inv_plan_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

} // namespace hopc
