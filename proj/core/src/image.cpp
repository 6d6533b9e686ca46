#include "hopc/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "hopc/errors.hpp"

namespace hopc {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

GrayImage::GrayImage(int w, int h, float fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw InvalidParameter("image dimensions must be >= 1");
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

namespace {

constexpr char kRawMagic[4] = {'H', 'P', 'C', 'F'};

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

// Skips whitespace and '#' comment lines, then parses one unsigned integer.
long pgm_token(std::istream& is) {
    int c = is.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = is.get();
        } else if (std::isspace(c)) {
            c = is.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw IoError("malformed header: expected integer");
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1'000'000'000L) throw IoError("malformed header: value too large");
        c = is.get();
    }
    return v;
}

GrayImage load_pgm(const std::string& path, bool expect16) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    char m0 = 0, m1 = 0;
    is.get(m0);
    is.get(m1);
    if (m0 != 'P' || m1 != '5') throw IoError("malformed header: not a P5 PGM");
    const long w = pgm_token(is);
    const long h = pgm_token(is);
    const long maxval = pgm_token(is);
    if (w < 1 || h < 1) throw IoError("malformed header: zero dimensions");
    if (maxval < 1 || maxval > 65535) throw IoError("malformed header: bad maxval");
    const bool two_bytes = maxval > 255;
    if (expect16 != two_bytes)
        throw IoError("maxval does not match the requested sample depth");

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    const std::size_t n = img.size();
    std::vector<unsigned char> buf(n * (two_bytes ? 2 : 1));
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(is.gcount()) != buf.size())
        throw IoError("truncated payload in " + path);

    const float scale = 1.0f / static_cast<float>(maxval);
    if (two_bytes) {
        for (std::size_t i = 0; i < n; ++i) {
            // PGM stores 16-bit samples most significant byte first.
            const unsigned v = (static_cast<unsigned>(buf[2 * i]) << 8) | buf[2 * i + 1];
            img.data[i] = static_cast<float>(v) * scale;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) img.data[i] = static_cast<float>(buf[i]) * scale;
    }
    return img;
}

GrayImage load_f32raw(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    unsigned char header[16];
    is.read(reinterpret_cast<char*>(header), 16);
    if (is.gcount() != 16) throw IoError("truncated payload in " + path);
    if (std::memcmp(header, kRawMagic, 4) != 0) throw IoError("malformed header: bad magic");
    const std::uint32_t w = read_u32_le(header + 4);
    const std::uint32_t h = read_u32_le(header + 8);
    if (w == 0 || h == 0) throw IoError("malformed header: zero dimensions");
    if (w > (1u << 20) || h > (1u << 20)) throw IoError("malformed header: implausible size");

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    is.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.size() * sizeof(float)));
    if (static_cast<std::size_t>(is.gcount()) != img.size() * sizeof(float))
        throw IoError("truncated payload in " + path);

    bool inside = true;
    for (float v : img.data) {
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
            inside = false;
            break;
        }
    }
    if (!inside) return normalize_to_unit(img);
    return img;
}

void save_pgm(const GrayImage& img, const std::string& path, bool sixteen) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot create " + path);
    const long maxval = sixteen ? 65535 : 255;
    os << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    if (sixteen) {
        std::vector<unsigned char> buf(img.size() * 2);
        for (std::size_t i = 0; i < img.size(); ++i) {
            const double v = std::clamp(static_cast<double>(img.data[i]), 0.0, 1.0);
            const unsigned q = static_cast<unsigned>(std::lround(v * 65535.0));
            buf[2 * i] = static_cast<unsigned char>(q >> 8);
            buf[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
        }
        os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    } else {
        std::vector<unsigned char> buf(img.size());
        for (std::size_t i = 0; i < img.size(); ++i) {
            const double v = std::clamp(static_cast<double>(img.data[i]), 0.0, 1.0);
            buf[i] = static_cast<unsigned char>(std::lround(v * 255.0));
        }
        os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
    if (!os) throw IoError("write failed for " + path);
}

void save_f32raw(const GrayImage& img, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot create " + path);
    os.write(kRawMagic, 4);
    write_u32_le(os, static_cast<std::uint32_t>(img.width));
    write_u32_le(os, static_cast<std::uint32_t>(img.height));
    write_u32_le(os, 0);
    os.write(reinterpret_cast<const char*>(img.data.data()),
             static_cast<std::streamsize>(img.size() * sizeof(float)));
    if (!os) throw IoError("write failed for " + path);
}

} // namespace

ImageFormat detect_format(const std::string& path) {
    auto ends_with = [&](const char* suf) {
        const std::size_t n = std::strlen(suf);
        return path.size() >= n &&
               std::equal(path.end() - static_cast<long>(n), path.end(), suf,
                          [](char a, char b) { return std::tolower(a) == b; });
    };
    if (ends_with(".f32") || ends_with(".raw")) return ImageFormat::F32Raw;
    if (ends_with(".pgm")) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw IoError("cannot open " + path);
        char m0 = 0, m1 = 0;
        is.get(m0);
        is.get(m1);
        if (m0 != 'P' || m1 != '5') throw IoError("malformed header: not a P5 PGM");
        pgm_token(is);
        pgm_token(is);
        return pgm_token(is) > 255 ? ImageFormat::Pgm16 : ImageFormat::Pgm8;
    }
    throw IoError("cannot infer image format from " + path);
}

GrayImage load_image(const std::string& path, ImageFormat format) {
    switch (format) {
        case ImageFormat::Pgm8: return load_pgm(path, false);
        case ImageFormat::Pgm16: return load_pgm(path, true);
        case ImageFormat::F32Raw: return load_f32raw(path);
    }
    throw InvalidParameter("unknown image format");
}

void save_image(const GrayImage& img, const std::string& path, ImageFormat format) {
    if (img.empty()) throw InvalidParameter("cannot save an empty image");
    switch (format) {
        case ImageFormat::Pgm8: save_pgm(img, path, false); return;
        case ImageFormat::Pgm16: save_pgm(img, path, true); return;
        case ImageFormat::F32Raw: save_f32raw(img, path); return;
    }
    throw InvalidParameter("unknown image format");
}

GrayImage normalize_to_unit(const GrayImage& img) {
    GrayImage out = img;
    if (img.empty()) return out;
    float lo = std::numeric_limits<float>::infinity();
    float hi = -std::numeric_limits<float>::infinity();
    for (float v : img.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) {
        std::fill(out.data.begin(), out.data.end(), 0.0f);
        return out;
    }
    const float scale = 1.0f / (hi - lo);
    for (float& v : out.data) v = (v - lo) * scale;
    return out;
}

std::optional<double> sample_bilinear(const GrayImage& img, Point2 p) {
    if (!(p.x >= 0.0 && p.y >= 0.0 && p.x <= img.width - 1 && p.y <= img.height - 1))
        return std::nullopt;
    const int x0 = std::min(static_cast<int>(p.x), img.width - 2 >= 0 ? img.width - 2 : 0);
    const int y0 = std::min(static_cast<int>(p.y), img.height - 2 >= 0 ? img.height - 2 : 0);
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fx = p.x - x0;
    const double fy = p.y - y0;
    const double v00 = img.at(x0, y0);
    const double v10 = img.at(x1, y0);
    const double v01 = img.at(x0, y1);
    const double v11 = img.at(x1, y1);
    return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11);
}

Homography Homography::translation(double tx, double ty) {
    Homography h;
    h.m = {1, 0, tx, 0, 1, ty, 0, 0, 1};
    return h;
}

double Homography::det() const {
    const auto& a = m;
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
}

Homography Homography::inverse() const {
    const double d = det();
    if (std::abs(d) < 1e-12) throw FitError("homography is not invertible");
    const auto& a = m;
    Homography r;
    r.m[0] = (a[4] * a[8] - a[5] * a[7]) / d;
    r.m[1] = (a[2] * a[7] - a[1] * a[8]) / d;
    r.m[2] = (a[1] * a[5] - a[2] * a[4]) / d;
    r.m[3] = (a[5] * a[6] - a[3] * a[8]) / d;
    r.m[4] = (a[0] * a[8] - a[2] * a[6]) / d;
    r.m[5] = (a[2] * a[3] - a[0] * a[5]) / d;
    r.m[6] = (a[3] * a[7] - a[4] * a[6]) / d;
    r.m[7] = (a[1] * a[6] - a[0] * a[7]) / d;
    r.m[8] = (a[0] * a[4] - a[1] * a[3]) / d;
    if (std::abs(r.m[8]) >= 1e-12) {
        const double s = 1.0 / r.m[8];
        for (double& v : r.m) v *= s;
    }
    return r;
}

std::optional<Point2> apply_homography(const Homography& h, Point2 p) {
    const double den = h.m[6] * p.x + h.m[7] * p.y + h.m[8];
    if (std::abs(den) < 1e-12) return std::nullopt;
    return Point2{(h.m[0] * p.x + h.m[1] * p.y + h.m[2]) / den,
                  (h.m[3] * p.x + h.m[4] * p.y + h.m[5]) / den};
}

} // namespace hopc
