#pragma once

#include <filesystem>

#include "parallax/io.hpp"
#include "parallax/layering.hpp"
#include "parallax/motion.hpp"

namespace parallax {

struct RunOptions {
    std::filesystem::path image;
    std::filesystem::path depth;
    std::filesystem::path masks;  // empty: segment from the depth map instead
    std::filesystem::path out_dir = "out";
    bool invert_depth = false;
    PipelineConfig config;
    MotionSpec spec;
};

// Exit statuses shared by the pipeline entry points and the CLI:
// 0 success, 1 unusable input, 2 processing failure, 3 write failure.
// Diagnostics go to stderr tagged with the stage that failed. A failed
// run leaves no partial frame files behind.
int run_generate(const RunOptions& opts);

// Stops after inpainting; writes the debug layer images and a ranking
// table instead of frames.
int run_layers(const RunOptions& opts);

// Writes the synthetic demo scene (image, depth, labels) into out_dir.
int run_synth(const std::filesystem::path& out_dir);

}  // namespace parallax
