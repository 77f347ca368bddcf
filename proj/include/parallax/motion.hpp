#pragma once

#include <utility>
#include <vector>

#include "parallax/image.hpp"
#include "parallax/refine.hpp"

namespace parallax {

enum class Movement { ZoomIn, Left, Right };

// Per-frame offsets follow two arithmetic sequences: value k (0-based) is
// x1 + k*c. Translations read the offset in pixels, zoom in percentage
// points (scale factor 1 + offset/100).
struct MotionSpec {
    Movement movement = Movement::Left;
    int n = 30;
    double fore1 = 0.0;
    double back1 = 0.0;
    double c_fore = 4.0;
    double c_back = 1.0;

    bool operator==(const MotionSpec&) const = default;
};

// Throws ParamError unless n >= 1 and |c_fore| >= |c_back|.
void validate(const MotionSpec& spec);

struct Transform {
    enum class Kind { Translate, Scale };
    Kind kind = Kind::Translate;
    int dx = 0;          // column shift, Translate only
    double scale = 1.0;  // Scale only, about the image center
};

// Crop rectangle shared by every frame of a sequence.
struct Viewport {
    int row0 = 0;
    int col0 = 0;
    int width = 0;
    int height = 0;
};

struct FrameOffsets {
    double fore = 0.0;
    double back = 0.0;

    bool operator==(const FrameOffsets&) const = default;
};

struct FrameSequence {
    std::vector<RgbImage> frames;       // n frames, identical dimensions
    std::vector<FrameOffsets> offsets;  // offsets[k] for frame k
    MotionSpec spec;
    Viewport viewport;
};

// n-term arithmetic sequence starting at x1 with increment c, evaluated
// directly (element k is x1 + k*c, never accumulated).
std::vector<double> offset_sequence(double x1, double c, int n);

// (foreground, background) transforms for frame k. Fractional translation
// offsets round to whole pixels; zoom keeps the real-valued scale.
std::pair<Transform, Transform> frame_transforms(const MotionSpec& spec, int k);

// Largest rectangle covered by the transformed background in every frame.
// Throws GeometryError when the offsets leave no common area.
Viewport common_viewport(const MotionSpec& spec, int width, int height);

// One frame: transform background, transform foreground, composite, crop.
RgbImage render_frame(const RgbaLayer& foreground, const RgbImage& background,
                      const Transform& fore_t, const Transform& back_t,
                      const Viewport& viewport);

FrameSequence generate_sequence(const SceneLayers& layers, const RgbImage& inpainted_bg,
                                const MotionSpec& spec);

}  // namespace parallax
