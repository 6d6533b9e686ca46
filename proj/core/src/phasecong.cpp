#include "hopc/phasecong.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "hopc/errors.hpp"
#include "hopc/fft.hpp"
#include "hopc/parallel.hpp"

namespace hopc {

void FilterBankParams::validate() const {
    if (n_scales < 1) throw InvalidParameter("n_scales must be >= 1");
    if (n_orients < 1) throw InvalidParameter("n_orients must be >= 1");
    if (min_wavelength < 2.0) throw InvalidParameter("min_wavelength must be >= 2");
    if (!(scale_mult > 1.0)) throw InvalidParameter("scale_mult must be > 1");
    if (!(sigma_ratio > 0.0 && sigma_ratio < 1.0))
        throw InvalidParameter("sigma_ratio must be in (0,1)");
    if (!(angular_overlap > 0.0)) throw InvalidParameter("angular_overlap must be > 0");
}

void PCParams::validate() const {
    if (noise_gain < 0.0) throw InvalidParameter("noise_gain must be >= 0");
    if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be > 0");
    if (!(spread_gain > 0.0)) throw InvalidParameter("spread_gain must be > 0");
    if (!(spread_cutoff > 0.0 && spread_cutoff < 1.0))
        throw InvalidParameter("spread_cutoff must be in (0,1)");
}

namespace {

// Unshifted FFT bin frequencies in cycles/pixel: 0, 1/n, ..., then negative.
double bin_frequency(int i, int n) {
    const int f = (i < (n + 1) / 2) ? i : i - n;
    return static_cast<double>(f) / n;
}

} // namespace

LogGaborBank LogGaborBank::build(int width, int height, const FilterBankParams& params) {
    params.validate();
    if (width < 1 || height < 1) throw InvalidParameter("bank dimensions must be >= 1");

    LogGaborBank bank;
    bank.width_ = width;
    bank.height_ = height;
    bank.params_ = params;

    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<double> radius(n), theta(n);
    for (int y = 0; y < height; ++y) {
        const double fy = bin_frequency(y, height);
        for (int x = 0; x < width; ++x) {
            const double fx = bin_frequency(x, width);
            const std::size_t i = static_cast<std::size_t>(y) * width + x;
            radius[i] = std::hypot(fx, fy);
            theta[i] = std::atan2(fy, fx);
        }
    }
    radius[0] = 1.0; // avoids log(0); the DC gain is forced below

    const double log_sigma = std::log(params.sigma_ratio);
    const double denom = 2.0 * log_sigma * log_sigma;
    bank.radial_.resize(params.n_scales);
    for (int s = 0; s < params.n_scales; ++s) {
        const double wavelength = params.min_wavelength * std::pow(params.scale_mult, s);
        const double omega0 = 1.0 / wavelength;
        auto& g = bank.radial_[s];
        g.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double lr = std::log(radius[i] / omega0);
            g[i] = std::exp(-(lr * lr) / denom);
        }
        if (params.dc_zeroed) g[0] = 0.0;
    }

    const double theta_sigma =
        0.5 * (std::numbers::pi / params.n_orients) * params.angular_overlap;
    const double theta_denom = 2.0 * theta_sigma * theta_sigma;
    bank.angular_.resize(params.n_orients);
    for (int o = 0; o < params.n_orients; ++o) {
        const double angle = bank.orientation_angle(o);
        const double ca = std::cos(angle), sa = std::sin(angle);
        auto& g = bank.angular_[o];
        g.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Angular distance on the circle between the bin direction and
            // the filter direction; keeps the filter single-sided.
            const double ds = std::sin(theta[i]) * ca - std::cos(theta[i]) * sa;
            const double dc = std::cos(theta[i]) * ca + std::sin(theta[i]) * sa;
            const double dtheta = std::abs(std::atan2(ds, dc));
            g[i] = std::exp(-(dtheta * dtheta) / theta_denom);
        }
    }
    return bank;
}

double LogGaborBank::orientation_angle(int orient) const {
    return orient * std::numbers::pi / params_.n_orients;
}

double LogGaborBank::scale_gain_sum() const {
    double sum = 0.0;
    for (int s = 0; s < params_.n_scales; ++s) sum += std::pow(params_.scale_mult, -s);
    return sum;
}

int LogGaborBank::border_margin() const {
    const double largest =
        params_.min_wavelength * std::pow(params_.scale_mult, params_.n_scales - 1);
    return static_cast<int>(std::ceil(largest / 2.0));
}

ResponseStack filter_responses(const GrayImage& img, const LogGaborBank& bank) {
    if (img.width != bank.width() || img.height != bank.height())
        throw InvalidParameter("filter bank dimensions do not match the image");

    const auto& p = bank.params();
    const std::size_t n = img.size();
    ResponseStack stack;
    stack.width = img.width;
    stack.height = img.height;
    stack.bank = p;
    const int n_filters = p.n_scales * p.n_orients;
    stack.even.assign(n_filters, {});
    stack.odd.assign(n_filters, {});

    Fft2D fft(img.width, img.height);
    std::vector<std::complex<double>> spectrum(n);
    {
        std::vector<std::complex<double>> input(n);
        for (std::size_t i = 0; i < n; ++i) input[i] = {static_cast<double>(img.data[i]), 0.0};
        fft.forward(input.data(), spectrum.data());
    }

    const double scale = 1.0 / static_cast<double>(n);
    parallel_for(0, n_filters, [&](std::int64_t task) {
        const int s = static_cast<int>(task) / p.n_orients;
        const int o = static_cast<int>(task) % p.n_orients;
        const auto& radial = bank.radial(s);
        const auto& angular = bank.angular(o);
        std::vector<std::complex<double>> filtered(n), response(n);
        for (std::size_t i = 0; i < n; ++i) filtered[i] = spectrum[i] * (radial[i] * angular[i]);
        fft.inverse(filtered.data(), response.data());
        auto& even = stack.even[task];
        auto& odd = stack.odd[task];
        even.resize(n);
        odd.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            even[i] = response[i].real() * scale;
            odd[i] = response[i].imag() * scale;
        }
    });
    return stack;
}

double estimate_noise_threshold(const ResponseStack& stack, int orient, const PCParams& params) {
    if (stack.even.empty()) throw InvalidParameter("empty response stack");
    if (orient < 0 || orient >= stack.bank.n_orients)
        throw InvalidParameter("orientation index out of range");
    if (params.noise_gain <= 0.0) return 0.0;

    const auto& e = stack.even_at(0, orient);
    const auto& o = stack.odd_at(0, orient);
    std::vector<double> amp(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) amp[i] = std::hypot(e[i], o[i]);
    const std::size_t mid = amp.size() / 2;
    std::nth_element(amp.begin(), amp.begin() + mid, amp.end());
    const double median = amp[mid];

    // Rayleigh mode of the smallest-scale amplitude, extrapolated to the
    // total energy across scales via the bank's amplitude falloff.
    const double tau = median / std::sqrt(std::log(4.0));
    double gain_sum = 0.0;
    for (int s = 0; s < stack.bank.n_scales; ++s)
        gain_sum += std::pow(stack.bank.scale_mult, -s);
    const double total_tau = tau * gain_sum;
    const double mean_r = total_tau * std::sqrt(std::numbers::pi / 2.0);
    const double sigma_r = total_tau * std::sqrt((4.0 - std::numbers::pi) / 2.0);
    return params.noise_gain * (mean_r + sigma_r);
}

PCMap phase_congruency(const ResponseStack& stack, const PCParams& params) {
    params.validate();
    if (stack.even.empty()) throw InvalidParameter("empty response stack");

    const int n_scales = stack.bank.n_scales;
    const int n_orients = stack.bank.n_orients;
    const std::size_t n = static_cast<std::size_t>(stack.width) * stack.height;
    const double eps = params.epsilon;

    std::vector<double> numer(n, 0.0), denom(n, 0.0);
    for (int o = 0; o < n_orients; ++o) {
        const double t = estimate_noise_threshold(stack, o, params);
        parallel_for(0, stack.height, [&](std::int64_t row) {
            const std::size_t lo = static_cast<std::size_t>(row) * stack.width;
            const std::size_t hi = lo + stack.width;
            for (std::size_t i = lo; i < hi; ++i) {
                double sum_e = 0.0, sum_o = 0.0, sum_a = 0.0, max_a = 0.0;
                for (int s = 0; s < n_scales; ++s) {
                    const double ev = stack.even_at(s, o)[i];
                    const double od = stack.odd_at(s, o)[i];
                    const double a = std::hypot(ev, od);
                    sum_e += ev;
                    sum_o += od;
                    sum_a += a;
                    max_a = std::max(max_a, a);
                }
                const double x_energy = std::hypot(sum_e, sum_o) + eps;
                const double mean_e = sum_e / x_energy;
                const double mean_o = sum_o / x_energy;
                double energy = 0.0;
                for (int s = 0; s < n_scales; ++s) {
                    const double ev = stack.even_at(s, o)[i];
                    const double od = stack.odd_at(s, o)[i];
                    energy += ev * mean_e + od * mean_o - std::abs(ev * mean_o - od * mean_e);
                }
                const double spread = sum_a / (n_scales * (max_a + eps));
                const double weight =
                    1.0 / (1.0 + std::exp(params.spread_gain * (params.spread_cutoff - spread)));
                numer[i] += weight * std::max(energy - t, 0.0);
                denom[i] += sum_a;
            }
        });
    }

    PCMap map;
    map.width = stack.width;
    map.height = stack.height;
    map.bank = stack.bank;
    map.pc = params;
    map.amplitude.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        map.amplitude[i] = static_cast<float>(std::clamp(numer[i] / (denom[i] + eps), 0.0, 1.0));
    return map;
}

OrientationMap pc_orientation(const ResponseStack& stack) {
    if (stack.even.empty()) throw InvalidParameter("empty response stack");

    const int n_scales = stack.bank.n_scales;
    const int n_orients = stack.bank.n_orients;
    const std::size_t n = static_cast<std::size_t>(stack.width) * stack.height;

    OrientationMap map;
    map.width = stack.width;
    map.height = stack.height;
    map.phi_deg.resize(n);
    map.confidence.resize(n);

    std::vector<double> proj_x(n, 0.0), proj_y(n, 0.0);
    for (int o = 0; o < n_orients; ++o) {
        const double angle = o * std::numbers::pi / n_orients;
        const double ca = std::cos(angle), sa = std::sin(angle);
        parallel_for(0, stack.height, [&](std::int64_t row) {
            const std::size_t lo = static_cast<std::size_t>(row) * stack.width;
            const std::size_t hi = lo + stack.width;
            for (std::size_t i = lo; i < hi; ++i) {
                double sum_odd = 0.0;
                for (int s = 0; s < n_scales; ++s) sum_odd += stack.odd_at(s, o)[i];
                proj_x[i] += sum_odd * ca;
                proj_y[i] += sum_odd * sa;
            }
        });
    }

    constexpr double rad_to_deg = 180.0 / std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::hypot(proj_x[i], proj_y[i]);
        map.confidence[i] = static_cast<float>(mag);
        if (mag == 0.0) {
            map.phi_deg[i] = 0.0f;
            continue;
        }
        double deg = std::atan2(proj_y[i], proj_x[i]) * rad_to_deg;
        if (deg < 0.0) deg += 360.0;
        if (deg >= 360.0) deg -= 360.0;
        map.phi_deg[i] = static_cast<float>(deg);
    }
    return map;
}

std::vector<float> OrientationMap::folded() const {
    std::vector<float> out(phi_deg.size());
    for (std::size_t i = 0; i < phi_deg.size(); ++i) {
        float f = phi_deg[i];
        if (f >= 180.0f) f -= 180.0f;
        if (f >= 180.0f) f = 0.0f; // float rounding guard
        out[i] = f;
    }
    return out;
}

} // namespace hopc
