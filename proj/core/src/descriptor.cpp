#include "hopc/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "descriptor_detail.hpp"
#include "hopc/errors.hpp"
#include "hopc/parallel.hpp"

namespace hopc {

int DescriptorGeometry::stride() const {
    const int s = static_cast<int>(std::lround((1.0 - overlap) * block_width()));
    return std::max(1, s);
}

void DescriptorGeometry::validate() const {
    if (cells_per_block < 1) throw InvalidParameter("cells_per_block must be >= 1");
    if (cell_size < 1) throw InvalidParameter("cell_size must be >= 1");
    if (bins < 2) throw InvalidParameter("bins must be >= 2");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw InvalidParameter("overlap must be in [0,1)");
}

FeatureField compute_feature_field(const GrayImage& img, FeatureMode mode,
                                   const FilterBankParams& bank_params,
                                   const PCParams& pc_params) {
    if (img.empty()) throw InvalidParameter("empty image");
    FeatureField field;
    field.width = img.width;
    field.height = img.height;
    field.mode = mode;

    if (mode == FeatureMode::PhaseCongruency) {
        const LogGaborBank bank = LogGaborBank::build(img.width, img.height, bank_params);
        const ResponseStack stack = filter_responses(img, bank);
        PCMap pc = phase_congruency(stack, pc_params);
        const OrientationMap orient = pc_orientation(stack);
        field.amplitude = std::move(pc.amplitude);
        field.orientation_folded = orient.folded();
        return field;
    }

    const std::size_t n = img.size();
    field.amplitude.resize(n);
    field.orientation_folded.resize(n);
    constexpr double rad_to_deg = 180.0 / std::numbers::pi;
    parallel_for(0, img.height, [&](std::int64_t row) {
        const int y = static_cast<int>(row);
        for (int x = 0; x < img.width; ++x) {
            const int xl = std::max(x - 1, 0), xr = std::min(x + 1, img.width - 1);
            const int yu = std::max(y - 1, 0), yd = std::min(y + 1, img.height - 1);
            const double gx = 0.5 * (img.at(xr, y) - img.at(xl, y));
            const double gy = 0.5 * (img.at(x, yd) - img.at(x, yu));
            const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
            field.amplitude[i] = static_cast<float>(std::hypot(gx, gy));
            double deg = std::atan2(gy, gx) * rad_to_deg;
            if (deg < 0.0) deg += 180.0;
            if (deg >= 180.0) deg -= 180.0;
            field.orientation_folded[i] = static_cast<float>(deg);
        }
    });
    return field;
}

std::vector<double> block_descriptor(const FeatureField& field, int cx, int cy,
                                     const DescriptorGeometry& geom) {
    geom.validate();
    const int bw = geom.block_width();
    const int half = bw / 2;
    if (cx - half < 0 || cy - half < 0 || cx - half + bw > field.width ||
        cy - half + bw > field.height)
        throw FootprintError("block footprint outside the image");

    const detail::AxisStencil st = detail::make_axis_stencil(geom);
    std::vector<double> desc(geom.descriptor_length());
    detail::block_descriptor_into(field, cx, cy, geom, st, desc.data());
    return desc;
}

BlockDescriptorField dense_block_field(const FeatureField& field, const DescriptorGeometry& geom) {
    geom.validate();
    const int bw = geom.block_width();
    const int w = field.width, h = field.height;
    if (w < bw || h < bw) throw FootprintError("image smaller than one block");

    const int m = geom.cells_per_block;
    const int bins = geom.bins;
    const int len = geom.descriptor_length();
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const int half = bw / 2;

    BlockDescriptorField out;
    out.width = w;
    out.height = h;
    out.geom = geom;
    out.desc_len = len;
    out.data.assign(n * len, 0.0);
    out.valid.assign(n, 0);
    out.sum.assign(n, 0.0);
    out.sumsq.assign(n, 0.0);

    // Soft-binned amplitude planes: binned[k](p) is the amplitude pixel p
    // votes into orientation bin k.
    std::vector<std::vector<double>> binned(bins, std::vector<double>(n, 0.0));
    parallel_for(0, h, [&](std::int64_t y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double amp = field.amplitude[i];
            if (amp == 0.0) continue;
            int b0, b1;
            double wb0, wb1;
            detail::soft_bin(field.orientation_folded[i], bins, b0, b1, wb0, wb1);
            binned[b0][i] += amp * wb0;
            binned[b1][i] += amp * wb1;
        }
    });

    const detail::AxisStencil st = detail::make_axis_stencil(geom);
    // Per-cell 1-D kernels with the Gaussian folded in; the 2-D block weight
    // factorizes as kx[ci] (x) kx[cj].
    std::vector<std::vector<double>> kx(m, std::vector<double>(bw, 0.0));
    for (int u = 0; u < bw; ++u) {
        kx[st.cell[u].c0][u] += st.gauss[u] * st.cell[u].w0;
        if (st.cell[u].w1 != 0.0) kx[st.cell[u].c1][u] += st.gauss[u] * st.cell[u].w1;
    }

    std::vector<std::vector<double>> row_tmp(bins, std::vector<double>(n));
    std::vector<std::vector<double>> col_tmp(bins, std::vector<double>(n));
    for (int ci = 0; ci < m; ++ci) {
        const auto& kxi = kx[ci];
        parallel_for(0, static_cast<std::int64_t>(bins) * h, [&](std::int64_t task) {
            const int k = static_cast<int>(task / h);
            const int y = static_cast<int>(task % h);
            const double* src = binned[k].data() + static_cast<std::size_t>(y) * w;
            double* dst = row_tmp[k].data() + static_cast<std::size_t>(y) * w;
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                const int u_lo = std::max(0, half - x);
                const int u_hi = std::min(bw, w - x + half);
                for (int u = u_lo; u < u_hi; ++u) acc += kxi[u] * src[x - half + u];
                dst[x] = acc;
            }
        });
        for (int cj = 0; cj < m; ++cj) {
            const auto& kyj = kx[cj];
            parallel_for(0, static_cast<std::int64_t>(bins) * h, [&](std::int64_t task) {
                const int k = static_cast<int>(task / h);
                const int y = static_cast<int>(task % h);
                const int v_lo = std::max(0, half - static_cast<int>(y));
                const int v_hi = std::min(bw, h - static_cast<int>(y) + half);
                const double* src = row_tmp[k].data();
                double* dst = col_tmp[k].data() + static_cast<std::size_t>(y) * w;
                for (int x = 0; x < w; ++x) {
                    double acc = 0.0;
                    for (int v = v_lo; v < v_hi; ++v)
                        acc += kyj[v] * src[static_cast<std::size_t>(y - half + v) * w + x];
                    dst[x] = acc;
                }
            });
            const int slot = (cj * m + ci) * bins;
            parallel_for(0, h, [&](std::int64_t y) {
                for (int x = 0; x < w; ++x) {
                    const std::size_t i = static_cast<std::size_t>(y) * w + x;
                    double* d = out.data.data() + i * len + slot;
                    for (int k = 0; k < bins; ++k) d[k] = col_tmp[k][i];
                }
            });
        }
    }

    const int cx_lo = half, cx_hi = w - bw + half;
    const int cy_lo = half, cy_hi = h - bw + half;
    parallel_for(0, h, [&](std::int64_t y) {
        const bool row_ok = y >= cy_lo && y <= cy_hi;
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            double* d = out.data.data() + i * len;
            if (!row_ok || x < cx_lo || x > cx_hi) {
                std::fill(d, d + len, 0.0);
                continue;
            }
            detail::normalize_descriptor(d, len);
            double s = 0.0, s2 = 0.0;
            for (int k = 0; k < len; ++k) {
                s += d[k];
                s2 += d[k] * d[k];
            }
            out.valid[i] = 1;
            out.sum[i] = s;
            out.sumsq[i] = s2;
        }
    });
    return out;
}

int template_grid_count(int window_size, const DescriptorGeometry& geom) {
    const int bw = geom.block_width();
    if (window_size < bw) throw InvalidParameter("window smaller than one block");
    return (window_size - bw) / geom.stride() + 1;
}

namespace {

struct TemplateGrid {
    int count;        // blocks per axis
    int first_center; // offset of the first block center from the window center
    int stride;
};

TemplateGrid make_grid(int window_size, const DescriptorGeometry& geom) {
    const int bw = geom.block_width();
    const int stride = geom.stride();
    const int count = template_grid_count(window_size, geom);
    const int span = (count - 1) * stride + bw;
    const int margin = (window_size - span) / 2;
    const int win_start = -(window_size / 2);
    return {count, win_start + margin + bw / 2, stride};
}

void check_window(int cx, int cy, int window_size, int width, int height) {
    const int start_x = cx - window_size / 2;
    const int start_y = cy - window_size / 2;
    if (start_x < 0 || start_y < 0 || start_x + window_size > width ||
        start_y + window_size > height)
        throw FootprintError("window outside the image");
}

} // namespace

TemplateDescriptor template_descriptor(const BlockDescriptorField& blocks, int cx, int cy,
                                       int window_size, FeatureMode mode) {
    const TemplateGrid grid = make_grid(window_size, blocks.geom);
    check_window(cx, cy, window_size, blocks.width, blocks.height);

    TemplateDescriptor td;
    td.grid_x = td.grid_y = grid.count;
    td.geom = blocks.geom;
    td.mode = mode;
    const int len = blocks.desc_len;
    td.values.resize(static_cast<std::size_t>(grid.count) * grid.count * len);
    double* dst = td.values.data();
    for (int ty = 0; ty < grid.count; ++ty) {
        const int by = cy + grid.first_center + ty * grid.stride;
        for (int tx = 0; tx < grid.count; ++tx) {
            const int bx = cx + grid.first_center + tx * grid.stride;
            if (!blocks.is_valid(bx, by))
                throw FootprintError("block cache invalid inside the window");
            const double* src = blocks.at(bx, by);
            std::copy(src, src + len, dst);
            dst += len;
        }
    }
    return td;
}

TemplateDescriptor template_descriptor_direct(const FeatureField& field, int cx, int cy,
                                              int window_size, const DescriptorGeometry& geom) {
    geom.validate();
    const TemplateGrid grid = make_grid(window_size, geom);
    check_window(cx, cy, window_size, field.width, field.height);

    TemplateDescriptor td;
    td.grid_x = td.grid_y = grid.count;
    td.geom = geom;
    td.mode = field.mode;
    const int len = geom.descriptor_length();
    td.values.resize(static_cast<std::size_t>(grid.count) * grid.count * len);
    const detail::AxisStencil st = detail::make_axis_stencil(geom);
    double* dst = td.values.data();
    for (int ty = 0; ty < grid.count; ++ty) {
        const int by = cy + grid.first_center + ty * grid.stride;
        for (int tx = 0; tx < grid.count; ++tx) {
            const int bx = cx + grid.first_center + tx * grid.stride;
            detail::block_descriptor_into(field, bx, by, geom, st, dst);
            dst += len;
        }
    }
    return td;
}

} // namespace hopc
