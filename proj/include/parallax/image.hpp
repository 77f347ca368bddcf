#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "parallax/error.hpp"

namespace parallax {

// A (row, col) position with sub-pixel precision.
struct Point {
    double row = 0.0;
    double col = 0.0;
};

// Opaque 8-bit RGB raster, interleaved row-major.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 * width * height

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::size_t offset(int r, int c) const {
        return (static_cast<std::size_t>(r) * width + c) * 3;
    }
    const std::uint8_t* pixel(int r, int c) const { return data.data() + offset(r, c); }
    std::uint8_t* pixel(int r, int c) { return data.data() + offset(r, c); }
    bool in_bounds(int r, int c) const { return r >= 0 && r < height && c >= 0 && c < width; }

    bool operator==(const RgbImage&) const = default;
};

// 8-bit RGBA raster; alpha 0 = fully transparent, 255 = fully opaque.
struct RgbaLayer {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 4 * width * height

    RgbaLayer() = default;
    RgbaLayer(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 4, 0) {}

    std::size_t offset(int r, int c) const {
        return (static_cast<std::size_t>(r) * width + c) * 4;
    }
    const std::uint8_t* pixel(int r, int c) const { return data.data() + offset(r, c); }
    std::uint8_t* pixel(int r, int c) { return data.data() + offset(r, c); }

    bool operator==(const RgbaLayer&) const = default;
};

// Per-pixel nearness in [0, 1]; larger values are nearer to the camera
// (disparity convention).
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // width * height

    DepthMap() = default;
    DepthMap(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }
    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * width + c]; }
    bool in_bounds(int r, int c) const { return r >= 0 && r < height && c >= 0 && c < width; }

    bool operator==(const DepthMap&) const = default;
};

// Row-major boolean raster; true = inside the mask.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int r, int c) const { return bits[static_cast<std::size_t>(r) * width + c] != 0; }
    void set(int r, int c, bool v) { bits[static_cast<std::size_t>(r) * width + c] = v ? 1 : 0; }
    bool in_bounds(int r, int c) const { return r >= 0 && r < height && c >= 0 && c < width; }

    bool operator==(const BinaryMask&) const = default;
};

// Intermediate real-valued raster in [0, 1] (smoothed masks and the like).
struct GrayField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    GrayField() = default;
    GrayField(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }
    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * width + c]; }

    bool operator==(const GrayField&) const = default;
};

// Number of set bits.
std::size_t count(const BinaryMask& mask);

// Lift a mask to a {0.0, 1.0} field.
GrayField to_field(const BinaryMask& mask);

// Normalized 1-D Gaussian weights for an odd kernel size, with
// sigma = 0.3 * ((kernel_size - 1) / 2 - 1) + 0.8.
std::vector<double> gaussian_kernel_weights(int kernel_size);

// Separable Gaussian convolution with edge replication at the borders.
// Every output value stays inside the min/max envelope of the window it
// was computed from, so constant fields are preserved bit-exactly.
GrayField gaussian_blur(const GrayField& field, int kernel_size);

// Morphological dilation with a square structuring element (window
// clipped at the borders).
BinaryMask dilate(const BinaryMask& mask, int kernel_size);

// bit true iff value >= t.
BinaryMask threshold(const GrayField& field, double t);

// Unweighted mean of the (row, col) coordinates of all set bits.
Point center_of_mass(const BinaryMask& mask);

// Over-composite `layer` onto `background` with the layer origin placed
// at background column dx, row dy. Out-of-bounds layer pixels are
// discarded. Per channel: out = (a*fg + (255-a)*bg) / 255, round half up.
RgbImage alpha_composite(const RgbImage& background, const RgbaLayer& layer, int dx, int dy);

// Bilinear resampling to round(width*scale) x round(height*scale),
// scale in (0, 8]. Samples outside the source are edge-replicated.
RgbImage resample_bilinear(const RgbImage& image, double scale);
RgbaLayer resample_bilinear(const RgbaLayer& layer, double scale);

}  // namespace parallax
