#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace hopc {

/// Out-of-place 2-D complex FFT of a fixed size. Plans are created once in
/// the constructor (guarded against concurrent planner use); execution is
/// safe from multiple threads as long as each call uses its own buffers.
/// The inverse transform is unnormalized; callers divide by width*height.
class Fft2D {
public:
    Fft2D(int width, int height);
    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    int width() const { return width_; }
    int height() const { return height_; }

    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    void inverse(const std::complex<double>* in, std::complex<double>* out) const;

private:
    int width_;
    int height_;
    void* fwd_plan_;
    void* inv_plan_;
};

} // namespace hopc
