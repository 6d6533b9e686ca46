#pragma once

#include <cstdint>
#include <vector>

#include "hopc/image.hpp"
#include "hopc/phasecong.hpp"

namespace hopc {

enum class FeatureMode { PhaseCongruency, Gradient };

/// Per-pixel feature amplitude and axial orientation in [0, 180) degrees.
/// Either phase-congruency amplitude/orientation or gradient magnitude and
/// direction, depending on mode.
struct FeatureField {
    int width = 0;
    int height = 0;
    FeatureMode mode = FeatureMode::PhaseCongruency;
    std::vector<float> amplitude;
    std::vector<float> orientation_folded;
};

/// Block layout: cells_per_block x cells_per_block cells of cell_size px,
/// bins orientation bins per cell, adjacent blocks overlapping by the given
/// fraction of the block width.
struct DescriptorGeometry {
    int cells_per_block = 3;
    int cell_size = 4;
    int bins = 8;
    double overlap = 0.5;

    int block_width() const { return cells_per_block * cell_size; }
    int stride() const;
    int descriptor_length() const { return cells_per_block * cells_per_block * bins; }
    void validate() const;
    bool operator==(const DescriptorGeometry&) const = default;
};

/// Normalized block descriptor centered on every pixel whose block footprint
/// fits inside the image. Storage is pixel-major: the descriptor of (x,y)
/// occupies desc_len consecutive doubles. sum/sumsq cache per-descriptor
/// totals for the fast correlation path.
struct BlockDescriptorField {
    int width = 0;
    int height = 0;
    DescriptorGeometry geom;
    int desc_len = 0;
    std::vector<double> data;
    std::vector<std::uint8_t> valid;
    std::vector<double> sum;
    std::vector<double> sumsq;

    const double* at(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * desc_len;
    }
    bool is_valid(int x, int y) const {
        return valid[static_cast<std::size_t>(y) * width + x] != 0;
    }
    /// Inclusive range of block centers whose footprint fits.
    int min_center() const { return geom.block_width() / 2; }
    int max_center_x() const { return width - geom.block_width() + geom.block_width() / 2; }
    int max_center_y() const { return height - geom.block_width() + geom.block_width() / 2; }
};

/// Concatenated block descriptors on a stride grid inside a square window.
struct TemplateDescriptor {
    std::vector<double> values;
    int grid_x = 0;
    int grid_y = 0;
    DescriptorGeometry geom;
    FeatureMode mode = FeatureMode::PhaseCongruency;
};

/// Extracts the feature field for descriptor construction. PhaseCongruency
/// runs the full filter bank; Gradient uses central differences with
/// replicated borders.
FeatureField compute_feature_field(const GrayImage& img, FeatureMode mode,
                                   const FilterBankParams& bank_params = {},
                                   const PCParams& pc_params = {});

/// Descriptor of the single block centered at integer pixel (cx, cy).
/// Amplitudes are weighted by a Gaussian over the block (sigma = half the
/// block width) and distributed by trilinear interpolation across cell x,
/// cell y and orientation bin; the result is L2-normalized with a small
/// additive guard. Throws FootprintError when the block leaves the image.
std::vector<double> block_descriptor(const FeatureField& field, int cx, int cy,
                                     const DescriptorGeometry& geom);

/// Block descriptor for every valid pixel, computed with shared separable
/// accumulations. Entries match block_descriptor to rounding error.
BlockDescriptorField dense_block_field(const FeatureField& field, const DescriptorGeometry& geom);

/// Assembles the window descriptor from cached block descriptors. Block
/// centers lie on a stride grid centered in the window; floor((window_size -
/// block_width)/stride) + 1 blocks per axis, concatenated row-major.
TemplateDescriptor template_descriptor(const BlockDescriptorField& blocks, int cx, int cy,
                                       int window_size, FeatureMode mode);

/// Same window descriptor built directly from the feature field, one block
/// at a time, without any cache. Oracle and timing baseline for
/// template_descriptor.
TemplateDescriptor template_descriptor_direct(const FeatureField& field, int cx, int cy,
                                              int window_size, const DescriptorGeometry& geom);

/// Number of block grid positions per axis inside a window.
int template_grid_count(int window_size, const DescriptorGeometry& geom);

} // namespace hopc
