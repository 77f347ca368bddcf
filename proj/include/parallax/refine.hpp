#pragma once

#include "parallax/image.hpp"
#include "parallax/layering.hpp"

namespace parallax {

// The two components the motion model animates: an object cutout on a
// transparent full-frame layer and the source image with the object
// region knocked out.
struct SceneLayers {
    RgbaLayer foreground;          // full-frame; alpha 0 outside the cutout
    RgbImage background_with_hole; // source pixels, hole pixels zeroed
    BinaryMask hole;               // pixels requiring inpainting
    int origin_row = 0;            // foreground layer placement, image coords
    int origin_col = 0;
};

// Smooth the mask (Gaussian, blur_kernel) and re-binarize at
// binarize_threshold. Returns the original mask when the result would
// be empty.
BinaryMask refine_foreground_mask(const BinaryMask& mask, const PipelineConfig& config);

// Dilate the mask by dilate_kernel so the inpainter never samples pixels
// of the removed object.
BinaryMask expand_background_hole(const BinaryMask& mask, const PipelineConfig& config);

// Cut the assigned foreground out of the image and knock the enlarged
// hole out of the background.
SceneLayers split_components(const RgbImage& image, const LayerAssignment& assignment,
                             const PipelineConfig& config);

}  // namespace parallax
