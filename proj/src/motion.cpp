#include "parallax/motion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace parallax {

namespace {

// Offset that centers a span of `inner` cells inside `outer` cells.
// Negative when the inner span is larger.
int centered_offset(int outer, int inner) {
    return outer >= inner ? (outer - inner) / 2 : -((inner - outer) / 2);
}

// [first, last] inclusive column range the transformed background covers.
std::pair<int, int> valid_columns(const Transform& t, int width) {
    if (t.kind == Transform::Kind::Translate) {
        return {std::max(0, t.dx), width - 1 + std::min(0, t.dx)};
    }
    const int scaled_w = static_cast<int>(
        std::max<long long>(1, std::llround(width * t.scale)));
    const int off = centered_offset(width, scaled_w);
    return {std::max(0, off), std::min(width - 1, off + scaled_w - 1)};
}

std::pair<int, int> valid_rows(const Transform& t, int height) {
    if (t.kind == Transform::Kind::Translate) return {0, height - 1};
    const int scaled_h = static_cast<int>(
        std::max<long long>(1, std::llround(height * t.scale)));
    const int off = centered_offset(height, scaled_h);
    return {std::max(0, off), std::min(height - 1, off + scaled_h - 1)};
}

RgbImage apply_background(const RgbImage& background, const Transform& t) {
    if (t.kind == Transform::Kind::Translate) {
        if (t.dx == 0) return background;
        RgbImage out(background.width, background.height);
        for (int r = 0; r < background.height; ++r) {
            for (int c = 0; c < background.width; ++c) {
                const int sc = c - t.dx;
                if (sc < 0 || sc >= background.width) continue;
                const std::uint8_t* src = background.pixel(r, sc);
                std::uint8_t* dst = out.pixel(r, c);
                dst[0] = src[0];
                dst[1] = src[1];
                dst[2] = src[2];
            }
        }
        return out;
    }
    if (t.scale == 1.0) return background;
    RgbImage scaled = resample_bilinear(background, t.scale);
    RgbImage out(background.width, background.height);
    const int or_ = centered_offset(background.height, scaled.height);
    const int oc = centered_offset(background.width, scaled.width);
    for (int r = 0; r < background.height; ++r) {
        const int sr = r - or_;
        if (sr < 0 || sr >= scaled.height) continue;
        for (int c = 0; c < background.width; ++c) {
            const int sc = c - oc;
            if (sc < 0 || sc >= scaled.width) continue;
            const std::uint8_t* src = scaled.pixel(sr, sc);
            std::uint8_t* dst = out.pixel(r, c);
            dst[0] = src[0];
            dst[1] = src[1];
            dst[2] = src[2];
        }
    }
    return out;
}

RgbImage composite_foreground(RgbImage frame, const RgbaLayer& foreground, const Transform& t) {
    if (t.kind == Transform::Kind::Translate) {
        return alpha_composite(frame, foreground, t.dx, 0);
    }
    if (t.scale == 1.0) return alpha_composite(frame, foreground, 0, 0);
    RgbaLayer scaled = resample_bilinear(foreground, t.scale);
    return alpha_composite(frame, scaled, centered_offset(frame.width, scaled.width),
                           centered_offset(frame.height, scaled.height));
}

}  // namespace

void validate(const MotionSpec& spec) {
    if (spec.n < 1) {
        throw ParamError("motion: frame count must be >= 1, got " + std::to_string(spec.n));
    }
    if (std::abs(spec.c_fore) < std::abs(spec.c_back)) {
        throw ParamError("motion: foreground increment magnitude " +
                         std::to_string(std::abs(spec.c_fore)) +
                         " is below the background increment magnitude " +
                         std::to_string(std::abs(spec.c_back)));
    }
}

std::vector<double> offset_sequence(double x1, double c, int n) {
    if (n < 1) throw ParamError("offset_sequence: n must be >= 1, got " + std::to_string(n));
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = x1 + k * c;
    return out;
}

std::pair<Transform, Transform> frame_transforms(const MotionSpec& spec, int k) {
    validate(spec);
    if (k < 0 || k >= spec.n) {
        throw ParamError("frame_transforms: frame index " + std::to_string(k) +
                         " outside [0, " + std::to_string(spec.n) + ")");
    }
    const double fore = spec.fore1 + k * spec.c_fore;
    const double back = spec.back1 + k * spec.c_back;
    auto make = [&](double offset) {
        Transform t;
        switch (spec.movement) {
            case Movement::Left:
                t.kind = Transform::Kind::Translate;
                t.dx = static_cast<int>(-std::llround(offset));
                break;
            case Movement::Right:
                t.kind = Transform::Kind::Translate;
                t.dx = static_cast<int>(std::llround(offset));
                break;
            case Movement::ZoomIn:
                t.kind = Transform::Kind::Scale;
                t.scale = 1.0 + offset / 100.0;
                break;
        }
        return t;
    };
    return {make(fore), make(back)};
}

Viewport common_viewport(const MotionSpec& spec, int width, int height) {
    validate(spec);
    if (width < 1 || height < 1) {
        throw GeometryError("common_viewport: empty image");
    }
    int first_col = 0, last_col = width - 1;
    int first_row = 0, last_row = height - 1;
    for (int k = 0; k < spec.n; ++k) {
        const Transform back = frame_transforms(spec, k).second;
        const auto [c0, c1] = valid_columns(back, width);
        const auto [r0, r1] = valid_rows(back, height);
        first_col = std::max(first_col, c0);
        last_col = std::min(last_col, c1);
        first_row = std::max(first_row, r0);
        last_row = std::min(last_row, r1);
    }
    if (first_col > last_col || first_row > last_row) {
        throw GeometryError(
            "common_viewport: no background area survives every frame (common columns [" +
            std::to_string(first_col) + ", " + std::to_string(last_col) + "], rows [" +
            std::to_string(first_row) + ", " + std::to_string(last_row) + "] in a " +
            std::to_string(width) + "x" + std::to_string(height) + " image)");
    }
    return {first_row, first_col, last_col - first_col + 1, last_row - first_row + 1};
}

RgbImage render_frame(const RgbaLayer& foreground, const RgbImage& background,
                      const Transform& fore_t, const Transform& back_t,
                      const Viewport& viewport) {
    if (viewport.width < 1 || viewport.height < 1 || viewport.row0 < 0 || viewport.col0 < 0 ||
        viewport.row0 + viewport.height > background.height ||
        viewport.col0 + viewport.width > background.width) {
        throw GeometryError("render_frame: viewport outside the frame");
    }
    const auto [c0, c1] = valid_columns(back_t, background.width);
    const auto [r0, r1] = valid_rows(back_t, background.height);
    if (viewport.col0 < c0 || viewport.col0 + viewport.width - 1 > c1 || viewport.row0 < r0 ||
        viewport.row0 + viewport.height - 1 > r1) {
        throw GeometryError(
            "render_frame: viewport reaches past the transformed background (valid columns [" +
            std::to_string(c0) + ", " + std::to_string(c1) + "], rows [" + std::to_string(r0) +
            ", " + std::to_string(r1) + "])");
    }

    RgbImage frame = apply_background(background, back_t);
    frame = composite_foreground(std::move(frame), foreground, fore_t);

    RgbImage out(viewport.width, viewport.height);
    for (int r = 0; r < viewport.height; ++r) {
        const std::uint8_t* src = frame.pixel(viewport.row0 + r, viewport.col0);
        std::copy(src, src + static_cast<std::size_t>(viewport.width) * 3,
                  out.pixel(r, 0));
    }
    return out;
}

FrameSequence generate_sequence(const SceneLayers& layers, const RgbImage& inpainted_bg,
                                const MotionSpec& spec) {
    validate(spec);
    if (layers.foreground.width != inpainted_bg.width ||
        layers.foreground.height != inpainted_bg.height) {
        throw GeometryError("generate_sequence: foreground layer and background differ in size");
    }

    FrameSequence seq;
    seq.spec = spec;
    seq.viewport = common_viewport(spec, inpainted_bg.width, inpainted_bg.height);

    const std::vector<double> fore = offset_sequence(spec.fore1, spec.c_fore, spec.n);
    const std::vector<double> back = offset_sequence(spec.back1, spec.c_back, spec.n);
    seq.frames.reserve(static_cast<std::size_t>(spec.n));
    seq.offsets.reserve(static_cast<std::size_t>(spec.n));
    for (int k = 0; k < spec.n; ++k) {
        const auto [fore_t, back_t] = frame_transforms(spec, k);
        seq.frames.push_back(
            render_frame(layers.foreground, inpainted_bg, fore_t, back_t, seq.viewport));
        seq.offsets.push_back({fore[static_cast<std::size_t>(k)],
                               back[static_cast<std::size_t>(k)]});
    }
    return seq;
}

}  // namespace parallax
