#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hopc {

/// Subpixel coordinate: x is the column, y the row.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
double distance(Point2 a, Point2 b);

/// Single-channel raster. Intensities are nominally in [0,1] after load
/// normalization; row-major storage, data.size() == width * height.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    GrayImage() = default;
    GrayImage(int w, int h, float fill = 0.0f);

    float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

enum class ImageFormat { Pgm8, Pgm16, F32Raw };

/// Picks the format from the file extension (.pgm by maxval in the header,
/// .f32/.raw as raw float). Throws IoError for unknown extensions.
ImageFormat detect_format(const std::string& path);

/// Loads an image and rescales intensities to [0,1]: 8-bit /255, 16-bit
/// /65535, raw float passed through bit-exact unless values fall outside
/// [0,1], in which case a min-max rescale is applied.
GrayImage load_image(const std::string& path, ImageFormat format);

/// Writes an image. Pgm8/Pgm16 quantize with rounding; F32Raw is bit-exact.
void save_image(const GrayImage& img, const std::string& path, ImageFormat format);

/// Min-max rescale to [0,1]. Constant images map to all zeros.
GrayImage normalize_to_unit(const GrayImage& img);

/// Bilinear interpolation of the four surrounding pixels. Returns nullopt
/// when p lies outside [0, width-1] x [0, height-1].
std::optional<double> sample_bilinear(const GrayImage& img, Point2 p);

/// 3x3 projective transform, row-major, normalized so m[8] == 1.
struct Homography {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Homography identity() { return Homography{}; }
    static Homography translation(double tx, double ty);

    /// Inverse transform. Throws FitError when |det| < 1e-12.
    Homography inverse() const;
    double det() const;
};

/// Applies h to p. Returns nullopt when the projected denominator collapses
/// (|h20*x + h21*y + 1| < 1e-12, a point at infinity).
std::optional<Point2> apply_homography(const Homography& h, Point2 p);

} // namespace hopc
