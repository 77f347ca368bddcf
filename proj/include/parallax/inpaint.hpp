#pragma once

#include "parallax/image.hpp"
#include "parallax/refine.hpp"

namespace parallax {

enum class CellState : std::uint8_t { Known, Band, Unknown };

// Arrival time of the fast-marching front, measured from the hole
// boundary into the hole. T = 0 on known pixels.
struct DistanceField {
    int width = 0;
    int height = 0;
    std::vector<double> travel_time;
    std::vector<CellState> state;

    double at(int r, int c) const { return travel_time[static_cast<std::size_t>(r) * width + c]; }
    CellState state_at(int r, int c) const { return state[static_cast<std::size_t>(r) * width + c]; }
};

// Solve |grad T| = 1 on the hole by the fast-marching method: a priority
// queue ordered by tentative T, freezing the minimal band pixel each
// step and relaxing its 4-neighbors with the two-neighbor quadratic
// update. Known pixels carry T = 0.
DistanceField fmm_distance(const BinaryMask& hole);

// Telea-style hole filling, flat-fill variant (no color gradient term).
// Hole pixels are processed in ascending T order; each is set per
// channel to the weighted average of known and already-filled pixels
// within `radius`, weights = direction * distance * level-set proximity.
RgbImage telea_inpaint(const RgbImage& image, const BinaryMask& hole, double radius);

// Fill the background component's hole; the result backs every frame.
RgbImage inpaint_background(const SceneLayers& layers, const PipelineConfig& config);

}  // namespace parallax
