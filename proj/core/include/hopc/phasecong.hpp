#pragma once

#include <vector>

#include "hopc/image.hpp"

namespace hopc {

/// Geometry of the multi-scale, multi-orientation band-pass bank.
/// Wavelength of scale s (0-based) is min_wavelength * scale_mult^s.
struct FilterBankParams {
    int n_scales = 4;
    int n_orients = 6;
    double min_wavelength = 3.0;
    double scale_mult = 2.1;
    double sigma_ratio = 0.55;     // filter bandwidth: sigma/center on the log axis
    double angular_overlap = 1.2;  // angular sigma = 0.5 * (pi/n_orients) * this
    bool dc_zeroed = true;

    void validate() const;
};

/// Frequency-domain filter bank for one image size. Radial and angular
/// components are stored separately; the (scale, orient) transfer is their
/// product. Immutable once built.
class LogGaborBank {
public:
    static LogGaborBank build(int width, int height, const FilterBankParams& params);

    int width() const { return width_; }
    int height() const { return height_; }
    const FilterBankParams& params() const { return params_; }

    const std::vector<double>& radial(int scale) const { return radial_[scale]; }
    const std::vector<double>& angular(int orient) const { return angular_[orient]; }

    /// Filter direction of orientation slot o: (o * pi / n_orients) radians,
    /// measured in image coordinates (x right, y down).
    double orientation_angle(int orient) const;

    /// Sum over scales of the expected amplitude falloff (scale_mult^-s),
    /// used to extrapolate noise statistics from the smallest scale.
    double scale_gain_sum() const;

    /// Half-support of the largest-wavelength filter. Frequency-domain
    /// filtering wraps around the image border; pixels closer than this to
    /// an edge carry wrap-around artifacts and are excluded from interest
    /// point selection.
    int border_margin() const;

private:
    int width_ = 0;
    int height_ = 0;
    FilterBankParams params_;
    std::vector<std::vector<double>> radial_;
    std::vector<std::vector<double>> angular_;
};

/// Even/odd filter responses for every (scale, orientation) pair.
struct ResponseStack {
    int width = 0;
    int height = 0;
    FilterBankParams bank;
    /// Indexed [scale][orient], each raster width*height.
    std::vector<std::vector<double>> even;
    std::vector<std::vector<double>> odd;

    const std::vector<double>& even_at(int s, int o) const { return even[idx(s, o)]; }
    const std::vector<double>& odd_at(int s, int o) const { return odd[idx(s, o)]; }
    std::size_t idx(int s, int o) const { return static_cast<std::size_t>(s) * bank.n_orients + o; }
};

struct PCParams {
    double noise_gain = 2.0;     // k; 0 disables noise compensation
    double epsilon = 1e-4;       // guards divisions
    double spread_cutoff = 0.4;  // c in the frequency-spread sigmoid
    double spread_gain = 10.0;   // g in the frequency-spread sigmoid

    void validate() const;
};

/// Phase-congruency amplitude in [0,1] plus the parameters that produced it.
struct PCMap {
    int width = 0;
    int height = 0;
    std::vector<float> amplitude;
    FilterBankParams bank;
    PCParams pc;
};

/// Feature orientation in degrees, [0, 360). confidence is the magnitude of
/// the projected response vector; 0 marks pixels where the angle is
/// undefined (reported as 0 degrees).
struct OrientationMap {
    int width = 0;
    int height = 0;
    std::vector<float> phi_deg;
    std::vector<float> confidence;

    /// Axial view of the angles, [0, 180).
    std::vector<float> folded() const;
};

/// Convolves the image with every bank filter in the frequency domain.
/// Even responses are the real part, odd the imaginary part.
ResponseStack filter_responses(const GrayImage& img, const LogGaborBank& bank);

/// Noise energy threshold for one orientation. The smallest-scale amplitude
/// distribution is modeled as Rayleigh with mode median(A)/sqrt(ln 4); the
/// total-energy mean and sigma implied by that mode and the bank's scale
/// gain sum give T = k * (mean + sigma).
double estimate_noise_threshold(const ResponseStack& stack, int orient, const PCParams& params);

/// Phase-congruency amplitude map. Per orientation the scale-summed energy
/// is measured against the mean phase, noise-floored at T and weighted by
/// the frequency-spread sigmoid; the total is normalized by the summed
/// amplitudes. Output clamped to [0,1].
PCMap phase_congruency(const ResponseStack& stack, const PCParams& params);

/// Orientation map: odd responses are summed over scales per orientation,
/// projected onto the x and y axes and combined with atan2.
OrientationMap pc_orientation(const ResponseStack& stack);

} // namespace hopc
