#include "parallax/refine.hpp"

#include <cmath>

namespace parallax {

BinaryMask refine_foreground_mask(const BinaryMask& mask, const PipelineConfig& config) {
    if (count(mask) == 0) throw EmptyInputError("refine_foreground_mask: empty mask");
    GrayField smoothed = gaussian_blur(to_field(mask), config.blur_kernel);
    BinaryMask refined = threshold(smoothed, config.binarize_threshold);
    if (count(refined) == 0) return mask;  // blur+threshold erased a tiny mask
    return refined;
}

BinaryMask expand_background_hole(const BinaryMask& mask, const PipelineConfig& config) {
    return dilate(mask, config.dilate_kernel);
}

SceneLayers split_components(const RgbImage& image, const LayerAssignment& assignment,
                             const PipelineConfig& config) {
    const BinaryMask& mask = assignment.foreground_mask;
    if (mask.width != image.width || mask.height != image.height) {
        throw GeometryError("split_components: foreground mask does not match the image");
    }
    if (count(mask) == 0) throw EmptyInputError("split_components: empty foreground mask");

    SceneLayers layers;
    layers.foreground = RgbaLayer(image.width, image.height);
    BinaryMask refined = refine_foreground_mask(mask, config);

    if (config.feather) {
        // soft alpha straight from the smoothed mask
        GrayField smoothed = gaussian_blur(to_field(mask), config.blur_kernel);
        for (int r = 0; r < image.height; ++r) {
            for (int c = 0; c < image.width; ++c) {
                int a = static_cast<int>(std::llround(255.0 * smoothed.at(r, c)));
                if (a <= 0) continue;
                std::uint8_t* dst = layers.foreground.pixel(r, c);
                const std::uint8_t* src = image.pixel(r, c);
                dst[0] = src[0];
                dst[1] = src[1];
                dst[2] = src[2];
                dst[3] = static_cast<std::uint8_t>(std::min(a, 255));
            }
        }
    } else {
        for (int r = 0; r < image.height; ++r) {
            for (int c = 0; c < image.width; ++c) {
                if (!refined.at(r, c)) continue;
                std::uint8_t* dst = layers.foreground.pixel(r, c);
                const std::uint8_t* src = image.pixel(r, c);
                dst[0] = src[0];
                dst[1] = src[1];
                dst[2] = src[2];
                dst[3] = 255;
            }
        }
    }

    // The hole is dilated from the unrefined mask so segmentation slop
    // around the object is removed as well.
    layers.hole = expand_background_hole(mask, config);
    layers.background_with_hole = image;
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            if (layers.hole.at(r, c)) {
                std::uint8_t* px = layers.background_with_hole.pixel(r, c);
                px[0] = px[1] = px[2] = 0;
            }
        }
    }
    return layers;
}

}  // namespace parallax
