#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "parallax/image.hpp"
#include "parallax/layering.hpp"
#include "parallax/motion.hpp"
#include "parallax/refine.hpp"

namespace parallax {

inline constexpr char kToolVersion[] = "parallax 1.0.0";

// Decoders. Every failure throws InputError naming the path.

// PNG, JPEG or binary PPM. Grayscale is promoted to RGB; an alpha channel
// is dropped with a warning on stderr.
RgbImage load_rgb(const std::filesystem::path& path);

// Grayscale PNG (8 or 16 bit), binary PGM, or single-channel PFM.
// Values are min-max normalized to [0, 1] over the file's own range;
// a constant map becomes all 0.5. invert flips v to 1-v afterwards.
DepthMap load_depth(const std::filesystem::path& path, bool invert);

// Either one grayscale PNG/PGM where each nonzero value k labels instance
// k, or a directory of per-instance masks taken in sorted filename order
// (ids 0, 1, 2, ...; overlapping pixels go to the later mask, with a
// warning). A labeling with no object pixels throws EmptyInputError.
InstanceSet load_labelmap(const std::filesystem::path& path);

// Encoders. Failures throw OutputError naming the path.

void write_png_rgb(const RgbImage& image, const std::filesystem::path& path);
void write_png_rgba(const RgbaLayer& layer, const std::filesystem::path& path);
void write_png_mask(const BinaryMask& mask, const std::filesystem::path& path);  // 0 / 255
void write_png_gray(const std::vector<std::uint8_t>& pixels, int width, int height,
                    const std::filesystem::path& path);

// frame_0001.png, frame_0002.png, ... into dir; returns the paths written.
std::vector<std::filesystem::path> write_frames(const FrameSequence& seq,
                                                const std::filesystem::path& dir);

// foreground.png (RGBA), background_hole.png, hole_mask.png, inpainted.png.
void write_layers_debug(const SceneLayers& layers, const RgbImage& inpainted,
                        const std::filesystem::path& dir);

struct RankingRow {
    int id = 0;
    std::uint64_t area = 0;
    double mean_depth = 0.0;
    std::string layer;  // "foreground" or "background"

    bool operator==(const RankingRow&) const = default;
};

// Reproducibility record of one run: every knob actually used, content
// digests of the inputs, the realized offsets, and the ranking decision.
struct RunManifest {
    std::string tool_version = kToolVersion;
    PipelineConfig config;
    MotionSpec spec;
    std::map<std::string, std::string> input_digests;  // role -> fnv1a64 hex
    std::vector<FrameOffsets> offsets;
    std::vector<RankingRow> ranking;
    bool fallback_segmenter = false;

    bool operator==(const RunManifest&) const = default;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest load_manifest(const std::filesystem::path& path);

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string file_digest_hex(const std::filesystem::path& path);

}  // namespace parallax
