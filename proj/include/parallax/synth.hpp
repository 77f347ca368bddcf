#pragma once

#include <filesystem>

#include "parallax/image.hpp"
#include "parallax/layering.hpp"

namespace parallax {

// Deterministic 256x256 demo scene: a striped wall, one large near disk,
// one medium mid-depth square and one tiny far-off dot, sized so the
// area filter, the join rule and the ranking all have unambiguous
// outcomes under the default configuration.
struct SynthScene {
    RgbImage image;
    DepthMap depth;         // normalized exactly as the depth loader would
    InstanceSet instances;  // ids 1 (disk), 2 (square), 3 (dot)
};

SynthScene make_synth_scene();

// image.png, depth.png (8-bit grayscale), labels.png into dir.
void write_synth_scene(const std::filesystem::path& dir);

}  // namespace parallax
