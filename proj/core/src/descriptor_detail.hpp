#pragma once

// Internals shared between the descriptor builders and the naive matching
// path in similarity.cpp. Both sides must multiply exactly the same factors
// so the dense cache reproduces the direct computation to rounding error.

#include <algorithm>
#include <cmath>
#include <vector>

#include "hopc/descriptor.hpp"

namespace hopc::detail {

constexpr double kNormGuard = 1e-3; // additive guard inside the L2 norm

struct AxisStencil {
    struct Deposit {
        int c0, c1;
        double w0, w1;
    };
    std::vector<double> gauss;  // gauss[u]: Gaussian weight at block-local u
    std::vector<Deposit> cell;  // cell[u]: up to two cell targets, weights sum to 1
};

inline AxisStencil make_axis_stencil(const DescriptorGeometry& geom) {
    const int bw = geom.block_width();
    const int m = geom.cells_per_block;
    const double center = (bw - 1) / 2.0;
    const double sigma = 0.5 * bw;
    AxisStencil st;
    st.gauss.resize(bw);
    st.cell.resize(bw);
    for (int u = 0; u < bw; ++u) {
        const double d = u - center;
        st.gauss[u] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        const double cf = (u + 0.5) / geom.cell_size - 0.5;
        const int i0 = static_cast<int>(std::floor(cf));
        const double w1 = cf - i0;
        int c0 = std::clamp(i0, 0, m - 1);
        int c1 = std::clamp(i0 + 1, 0, m - 1);
        double ww0 = 1.0 - w1, ww1 = w1;
        if (c0 == c1) {
            // Out-of-range half of the vote folds into the edge cell so the
            // deposited mass always sums to the pixel's weighted amplitude.
            ww0 += ww1;
            ww1 = 0.0;
        }
        st.cell[u] = {c0, c1, ww0, ww1};
    }
    return st;
}

// Splits an axial angle in [0, 180) between the two nearest bin centers
// (at (i + 0.5) * 180/bins), wrapping between the last and first bin.
inline void soft_bin(double angle_deg, int bins, int& b0, int& b1, double& w0, double& w1) {
    const double bc = angle_deg * bins / 180.0 - 0.5;
    const double fb = std::floor(bc);
    const double frac = bc - fb;
    int i0 = static_cast<int>(fb);
    i0 %= bins;
    if (i0 < 0) i0 += bins;
    b0 = i0;
    b1 = (i0 + 1) % bins;
    w0 = 1.0 - frac;
    w1 = frac;
}

inline void normalize_descriptor(double* d, int len) {
    double sumsq = 0.0;
    for (int i = 0; i < len; ++i) sumsq += d[i] * d[i];
    const double inv = 1.0 / std::sqrt(sumsq + kNormGuard * kNormGuard);
    for (int i = 0; i < len; ++i) d[i] *= inv;
}

// Unchecked single-block descriptor accumulation into out[0 .. len). The
// caller provides the stencil and guarantees the footprint is inside.
inline void block_descriptor_into(const FeatureField& field, int cx, int cy,
                                  const DescriptorGeometry& geom, const AxisStencil& st,
                                  double* out) {
    const int bw = geom.block_width();
    const int half = bw / 2;
    const int m = geom.cells_per_block;
    const int bins = geom.bins;
    std::fill(out, out + geom.descriptor_length(), 0.0);

    for (int v = 0; v < bw; ++v) {
        const int py = cy - half + v;
        const auto& dy = st.cell[v];
        const double gy = st.gauss[v];
        const std::size_t row = static_cast<std::size_t>(py) * field.width;
        for (int u = 0; u < bw; ++u) {
            const std::size_t i = row + (cx - half + u);
            const double amp = field.amplitude[i];
            if (amp == 0.0) continue;
            int b0, b1;
            double wb0, wb1;
            soft_bin(field.orientation_folded[i], bins, b0, b1, wb0, wb1);
            const double v0 = amp * wb0;
            const double v1 = amp * wb1;
            const auto& dx = st.cell[u];
            const double g = st.gauss[u] * gy;
            const double wxy00 = g * dx.w0 * dy.w0;
            const double wxy10 = g * dx.w1 * dy.w0;
            const double wxy01 = g * dx.w0 * dy.w1;
            const double wxy11 = g * dx.w1 * dy.w1;
            double* cell00 = out + (dy.c0 * m + dx.c0) * bins;
            double* cell10 = out + (dy.c0 * m + dx.c1) * bins;
            double* cell01 = out + (dy.c1 * m + dx.c0) * bins;
            double* cell11 = out + (dy.c1 * m + dx.c1) * bins;
            cell00[b0] += wxy00 * v0;
            cell00[b1] += wxy00 * v1;
            cell10[b0] += wxy10 * v0;
            cell10[b1] += wxy10 * v1;
            cell01[b0] += wxy01 * v0;
            cell01[b1] += wxy01 * v1;
            cell11[b0] += wxy11 * v0;
            cell11[b1] += wxy11 * v1;
        }
    }
    normalize_descriptor(out, geom.descriptor_length());
}

} // namespace hopc::detail
