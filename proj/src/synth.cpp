#include "parallax/synth.hpp"

#include <algorithm>
#include <cstdlib>

#include "parallax/io.hpp"

namespace parallax {

namespace {

constexpr int kSize = 256;
constexpr int kStripe = 16;

constexpr int kDiskRow = 100, kDiskCol = 168, kDiskRadius = 36;
constexpr int kSquareRow = 200, kSquareCol = 64, kSquareHalf = 14;
constexpr int kDotRow = 40, kDotCol = 210, kDotRadius = 3;

// Raw depth bytes: the scene's own minimum is 0 (top of the wall ramp)
// and maximum 200 (the dot), so min-max normalization lands the disk on
// exactly 180/200 and the square on 120/200.
constexpr int kDiskDepth = 180, kSquareDepth = 120, kDotDepth = 200;

bool in_disk(int r, int c, int cr, int cc, int radius) {
    const int dr = r - cr, dc = c - cc;
    return dr * dr + dc * dc <= radius * radius;
}

bool in_square(int r, int c) {
    return std::abs(r - kSquareRow) <= kSquareHalf && std::abs(c - kSquareCol) <= kSquareHalf;
}

struct RawScene {
    RgbImage image{kSize, kSize};
    std::vector<std::uint8_t> depth = std::vector<std::uint8_t>(kSize * kSize);
    std::vector<std::uint8_t> labels = std::vector<std::uint8_t>(kSize * kSize);
};

RawScene make_raw() {
    RawScene scene;
    for (int r = 0; r < kSize; ++r) {
        for (int c = 0; c < kSize; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * kSize + c;
            std::uint8_t rgb[3];
            std::uint8_t depth;
            std::uint8_t label = 0;
            if (in_disk(r, c, kDiskRow, kDiskCol, kDiskRadius)) {
                rgb[0] = 200, rgb[1] = 40, rgb[2] = 40;
                depth = kDiskDepth;
                label = 1;
            } else if (in_square(r, c)) {
                rgb[0] = 40, rgb[1] = 60, rgb[2] = 200;
                depth = kSquareDepth;
                label = 2;
            } else if (in_disk(r, c, kDotRow, kDotCol, kDotRadius)) {
                rgb[0] = 60, rgb[1] = 180, rgb[2] = 80;
                depth = kDotDepth;
                label = 3;
            } else {
                const std::uint8_t g = (r / kStripe) % 2 ? 160 : 90;
                rgb[0] = rgb[1] = rgb[2] = g;
                depth = static_cast<std::uint8_t>(r * 60 / (kSize - 1));  // wall recedes upward
            }
            std::uint8_t* px = scene.image.pixel(r, c);
            px[0] = rgb[0], px[1] = rgb[1], px[2] = rgb[2];
            scene.depth[i] = depth;
            scene.labels[i] = label;
        }
    }
    return scene;
}

}  // namespace

SynthScene make_synth_scene() {
    const RawScene raw = make_raw();
    SynthScene scene;
    scene.image = raw.image;

    scene.depth = DepthMap(kSize, kSize);
    double lo = raw.depth[0], hi = raw.depth[0];
    for (std::uint8_t v : raw.depth) {
        lo = std::min(lo, static_cast<double>(v));
        hi = std::max(hi, static_cast<double>(v));
    }
    for (std::size_t i = 0; i < raw.depth.size(); ++i) {
        scene.depth.values[i] = hi > lo ? (raw.depth[i] - lo) / (hi - lo) : 0.5;
    }

    for (int label = 1; label <= 3; ++label) {
        Instance inst;
        inst.id = label;
        inst.mask = BinaryMask(kSize, kSize);
        for (std::size_t i = 0; i < raw.labels.size(); ++i) {
            if (raw.labels[i] == label) inst.mask.bits[i] = 1;
        }
        inst.area = count(inst.mask);
        scene.instances.instances.push_back(std::move(inst));
    }
    return scene;
}

void write_synth_scene(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw OutputError("cannot create directory " + dir.string());
    const RawScene raw = make_raw();
    write_png_rgb(raw.image, dir / "image.png");
    write_png_gray(raw.depth, kSize, kSize, dir / "depth.png");
    write_png_gray(raw.labels, kSize, kSize, dir / "labels.png");
}

}  // namespace parallax
