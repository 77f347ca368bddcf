#pragma once

// Independent reference implementations used only by tests. Each one is
// written the straightforward slow way (direct window scans, iterative
// sweeps) so it shares no code path with the library.

#include <vector>

#include "parallax/image.hpp"

namespace oracle {

// Direct (non-separable) 2D convolution with the outer product of the
// 1-D weights, edge replication at the borders.
parallax::GrayField conv2d_replicate(const parallax::GrayField& field,
                                     const std::vector<double>& weights);

// Per-pixel window scan.
parallax::BinaryMask dilate_scan(const parallax::BinaryMask& mask, int kernel_size);

// Per-output-pixel bilinear evaluation for an interleaved raster.
std::vector<std::uint8_t> bilinear_resample(const std::vector<std::uint8_t>& data, int width,
                                            int height, int channels, double scale,
                                            int* out_width, int* out_height);

// 4-connected component labels of the set bits: -1 outside the mask,
// otherwise a component index in first-encounter scan order.
std::vector<int> flood_labels(const parallax::BinaryMask& mask);

// Eikonal |grad T| = 1 solved by Gauss-Seidel sweeps until the fixed
// point; T = 0 outside the hole. Infinity for unreachable pixels.
std::vector<double> eikonal_sweeps(const parallax::BinaryMask& hole);

// Exact Euclidean distance from each hole pixel to the closest known
// pixel, brute force over all known pixels.
std::vector<double> euclid_to_known(const parallax::BinaryMask& hole);

// Straightforward Telea-style flat fill: distances from eikonal_sweeps,
// pixels visited in ascending (T, row, col), weighted average of the
// already-usable pixels inside the radius.
parallax::RgbImage telea_reference(const parallax::RgbImage& image,
                                   const parallax::BinaryMask& hole, double radius);

}  // namespace oracle
