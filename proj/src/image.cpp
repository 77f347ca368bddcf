#include "parallax/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace parallax {

namespace {

void require_odd_kernel(int kernel_size, const char* op) {
    if (kernel_size < 1 || kernel_size % 2 == 0) {
        throw ParamError(std::string(op) + ": kernel size must be odd and positive, got " +
                         std::to_string(kernel_size));
    }
}

int clamp_index(int i, int n) { return std::min(std::max(i, 0), n - 1); }

// Round half up for non-negative channel values.
std::uint8_t to_channel(double v) {
    double r = std::floor(v + 0.5);
    return static_cast<std::uint8_t>(std::min(255.0, std::max(0.0, r)));
}

}  // namespace

std::size_t count(const BinaryMask& mask) {
    std::size_t n = 0;
    for (auto b : mask.bits) n += b;
    return n;
}

GrayField to_field(const BinaryMask& mask) {
    GrayField f(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.bits.size(); ++i) f.values[i] = mask.bits[i] ? 1.0 : 0.0;
    return f;
}

std::vector<double> gaussian_kernel_weights(int kernel_size) {
    require_odd_kernel(kernel_size, "gaussian_blur");
    const int half = (kernel_size - 1) / 2;
    const double sigma = 0.3 * (half - 1) + 0.8;
    std::vector<double> w(kernel_size);
    double sum = 0.0;
    for (int i = 0; i < kernel_size; ++i) {
        double x = i - half;
        w[i] = std::exp(-(x * x) / (2.0 * sigma * sigma));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

namespace {

// One separable pass along a line. The dot product is clamped to the
// min/max of the samples it combined, which keeps convex-combination
// semantics exact under floating point.
void blur_line(const double* src, double* dst, int n, int stride, const std::vector<double>& w) {
    const int half = (static_cast<int>(w.size()) - 1) / 2;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        double lo = src[static_cast<std::size_t>(clamp_index(i - half, n)) * stride];
        double hi = lo;
        for (int j = -half; j <= half; ++j) {
            double v = src[static_cast<std::size_t>(clamp_index(i + j, n)) * stride];
            acc += w[j + half] * v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        dst[static_cast<std::size_t>(i) * stride] = std::min(hi, std::max(lo, acc));
    }
}

}  // namespace

GrayField gaussian_blur(const GrayField& field, int kernel_size) {
    const auto w = gaussian_kernel_weights(kernel_size);
    if (field.width <= 0 || field.height <= 0) {
        throw ParamError("gaussian_blur: empty field");
    }
    if (kernel_size == 1) return field;

    GrayField tmp(field.width, field.height);
    GrayField out(field.width, field.height);
    // horizontal pass
    for (int r = 0; r < field.height; ++r) {
        blur_line(field.values.data() + static_cast<std::size_t>(r) * field.width,
                  tmp.values.data() + static_cast<std::size_t>(r) * field.width, field.width, 1, w);
    }
    // vertical pass
    for (int c = 0; c < field.width; ++c) {
        blur_line(tmp.values.data() + c, out.values.data() + c, field.height, field.width, w);
    }
    return out;
}

BinaryMask dilate(const BinaryMask& mask, int kernel_size) {
    require_odd_kernel(kernel_size, "dilate");
    const int half = (kernel_size - 1) / 2;
    const int w = mask.width, h = mask.height;
    // Square structuring element, so two run-OR passes.
    BinaryMask tmp(w, h), out(w, h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            std::uint8_t v = 0;
            int c0 = std::max(0, c - half), c1 = std::min(w - 1, c + half);
            for (int cc = c0; cc <= c1 && !v; ++cc) v = mask.bits[static_cast<std::size_t>(r) * w + cc];
            tmp.bits[static_cast<std::size_t>(r) * w + c] = v;
        }
    }
    for (int c = 0; c < w; ++c) {
        for (int r = 0; r < h; ++r) {
            std::uint8_t v = 0;
            int r0 = std::max(0, r - half), r1 = std::min(h - 1, r + half);
            for (int rr = r0; rr <= r1 && !v; ++rr) v = tmp.bits[static_cast<std::size_t>(rr) * w + c];
            out.bits[static_cast<std::size_t>(r) * w + c] = v;
        }
    }
    return out;
}

BinaryMask threshold(const GrayField& field, double t) {
    BinaryMask m(field.width, field.height);
    for (std::size_t i = 0; i < field.values.size(); ++i) m.bits[i] = field.values[i] >= t ? 1 : 0;
    return m;
}

Point center_of_mass(const BinaryMask& mask) {
    double sr = 0.0, sc = 0.0;
    std::size_t n = 0;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (mask.at(r, c)) {
                sr += r;
                sc += c;
                ++n;
            }
        }
    }
    if (n == 0) throw EmptyInputError("center_of_mass: mask has no set bits");
    return {sr / static_cast<double>(n), sc / static_cast<double>(n)};
}

RgbImage alpha_composite(const RgbImage& background, const RgbaLayer& layer, int dx, int dy) {
    RgbImage out = background;
    for (int r = 0; r < layer.height; ++r) {
        int br = r + dy;
        if (br < 0 || br >= background.height) continue;
        for (int c = 0; c < layer.width; ++c) {
            int bc = c + dx;
            if (bc < 0 || bc >= background.width) continue;
            const std::uint8_t* fg = layer.pixel(r, c);
            int a = fg[3];
            if (a == 0) continue;
            std::uint8_t* dst = out.pixel(br, bc);
            if (a == 255) {
                dst[0] = fg[0];
                dst[1] = fg[1];
                dst[2] = fg[2];
            } else {
                for (int ch = 0; ch < 3; ++ch) {
                    int x = a * fg[ch] + (255 - a) * dst[ch];
                    dst[ch] = static_cast<std::uint8_t>((x + 127) / 255);  // round half up
                }
            }
        }
    }
    return out;
}

namespace {

struct SampleAxis {
    std::vector<int> i0, i1;
    std::vector<double> frac;
};

SampleAxis make_axis(int out_n, int in_n, double scale) {
    SampleAxis ax;
    ax.i0.resize(out_n);
    ax.i1.resize(out_n);
    ax.frac.resize(out_n);
    for (int i = 0; i < out_n; ++i) {
        double src = (i + 0.5) / scale - 0.5;
        double f = std::floor(src);
        int lo = static_cast<int>(f);
        double frac = src - f;
        // edge replication for samples outside the source
        int a = clamp_index(lo, in_n);
        int b = clamp_index(lo + 1, in_n);
        ax.i0[i] = a;
        ax.i1[i] = b;
        ax.frac[i] = frac;
    }
    return ax;
}

template <int Channels>
std::vector<std::uint8_t> resample_buffer(const std::vector<std::uint8_t>& src, int w, int h,
                                          int out_w, int out_h, double scale) {
    SampleAxis xs = make_axis(out_w, w, scale);
    SampleAxis ys = make_axis(out_h, h, scale);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(out_w) * out_h * Channels);
    for (int r = 0; r < out_h; ++r) {
        const double fy = ys.frac[r];
        const std::size_t row0 = static_cast<std::size_t>(ys.i0[r]) * w;
        const std::size_t row1 = static_cast<std::size_t>(ys.i1[r]) * w;
        for (int c = 0; c < out_w; ++c) {
            const double fx = xs.frac[c];
            const std::size_t p00 = (row0 + xs.i0[c]) * Channels;
            const std::size_t p01 = (row0 + xs.i1[c]) * Channels;
            const std::size_t p10 = (row1 + xs.i0[c]) * Channels;
            const std::size_t p11 = (row1 + xs.i1[c]) * Channels;
            std::uint8_t* dst = out.data() + (static_cast<std::size_t>(r) * out_w + c) * Channels;
            for (int ch = 0; ch < Channels; ++ch) {
                double top = (1.0 - fx) * src[p00 + ch] + fx * src[p01 + ch];
                double bot = (1.0 - fx) * src[p10 + ch] + fx * src[p11 + ch];
                dst[ch] = to_channel((1.0 - fy) * top + fy * bot);
            }
        }
    }
    return out;
}

void require_scale(double scale) {
    if (!(scale > 0.0) || scale > 8.0) {
        throw ParamError("resample_bilinear: scale must be in (0, 8], got " + std::to_string(scale));
    }
}

int scaled_dim(int n, double scale) {
    return std::max(1, static_cast<int>(std::llround(n * scale)));
}

}  // namespace

RgbImage resample_bilinear(const RgbImage& image, double scale) {
    require_scale(scale);
    if (scale == 1.0) return image;
    RgbImage out(scaled_dim(image.width, scale), scaled_dim(image.height, scale));
    out.data = resample_buffer<3>(image.data, image.width, image.height, out.width, out.height, scale);
    return out;
}

RgbaLayer resample_bilinear(const RgbaLayer& layer, double scale) {
    require_scale(scale);
    if (scale == 1.0) return layer;
    RgbaLayer out(scaled_dim(layer.width, scale), scaled_dim(layer.height, scale));
    out.data = resample_buffer<4>(layer.data, layer.width, layer.height, out.width, out.height, scale);
    return out;
}

}  // namespace parallax
