#include "parallax/inpaint.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace parallax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solution of (T-a)^2 + (T-b)^2 = 1 when both axis values are usable,
// otherwise the one-neighbor update min+1.
double solve_update(double a, double b) {
    if (a == kInf && b == kInf) return kInf;
    if (a == kInf) return b + 1.0;
    if (b == kInf) return a + 1.0;
    double diff = a - b;
    if (std::abs(diff) < 1.0) return (a + b + std::sqrt(2.0 - diff * diff)) / 2.0;
    return std::min(a, b) + 1.0;
}

struct Grid {
    int w, h;
    bool in(int r, int c) const { return r >= 0 && r < h && c >= 0 && c < w; }
    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * w + c; }
};

// Tentative value for (r, c) from currently frozen neighbors.
double tentative(const DistanceField& field, const Grid& g, int r, int c) {
    double vert = kInf, horz = kInf;
    for (int dr : {-1, 1}) {
        if (g.in(r + dr, c) && field.state[g.idx(r + dr, c)] == CellState::Known) {
            vert = std::min(vert, field.travel_time[g.idx(r + dr, c)]);
        }
    }
    for (int dc : {-1, 1}) {
        if (g.in(r, c + dc) && field.state[g.idx(r, c + dc)] == CellState::Known) {
            horz = std::min(horz, field.travel_time[g.idx(r, c + dc)]);
        }
    }
    return solve_update(vert, horz);
}

}  // namespace

DistanceField fmm_distance(const BinaryMask& hole) {
    const Grid g{hole.width, hole.height};
    DistanceField field;
    field.width = g.w;
    field.height = g.h;
    field.travel_time.assign(hole.bits.size(), 0.0);
    field.state.assign(hole.bits.size(), CellState::Known);

    std::size_t hole_count = 0;
    for (std::size_t i = 0; i < hole.bits.size(); ++i) {
        if (hole.bits[i]) {
            field.travel_time[i] = kInf;
            field.state[i] = CellState::Unknown;
            ++hole_count;
        }
    }
    if (hole_count == 0) return field;
    if (hole_count == hole.bits.size()) {
        throw GeometryError("fmm_distance: hole covers the entire image, no boundary to march from");
    }

    // min-heap on (T, row, col); ties resolved by position for determinism
    using Entry = std::tuple<double, int, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> band;

    auto relax = [&](int r, int c) {
        std::size_t i = g.idx(r, c);
        double t = tentative(field, g, r, c);
        if (t < field.travel_time[i]) {
            field.travel_time[i] = t;
            field.state[i] = CellState::Band;
            band.emplace(t, r, c);
        }
    };

    // initial band: hole pixels 4-adjacent to a known pixel
    for (int r = 0; r < g.h; ++r) {
        for (int c = 0; c < g.w; ++c) {
            if (field.state[g.idx(r, c)] != CellState::Unknown) continue;
            bool boundary = (g.in(r - 1, c) && !hole.at(r - 1, c)) ||
                            (g.in(r + 1, c) && !hole.at(r + 1, c)) ||
                            (g.in(r, c - 1) && !hole.at(r, c - 1)) ||
                            (g.in(r, c + 1) && !hole.at(r, c + 1));
            if (boundary) relax(r, c);
        }
    }

    while (!band.empty()) {
        auto [t, r, c] = band.top();
        band.pop();
        std::size_t i = g.idx(r, c);
        if (field.state[i] == CellState::Known || t > field.travel_time[i]) continue;  // stale
        field.state[i] = CellState::Known;
        constexpr int dr[] = {-1, 1, 0, 0};
        constexpr int dc[] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
            int nr = r + dr[k], nc = c + dc[k];
            if (g.in(nr, nc) && field.state[g.idx(nr, nc)] != CellState::Known) relax(nr, nc);
        }
    }
    return field;
}

namespace {

// Central difference of T clamped to usable (known or already filled)
// neighbors, one-sided where only one side is usable.
double directional_gradient(const std::vector<double>& T, const std::vector<std::uint8_t>& usable,
                            const Grid& g, int r, int c, int dr, int dc) {
    const int rm = r - dr, cm = c - dc;
    const int rp = r + dr, cp = c + dc;
    const bool ok_m = g.in(rm, cm) && usable[g.idx(rm, cm)];
    const bool ok_p = g.in(rp, cp) && usable[g.idx(rp, cp)];
    const double here = T[g.idx(r, c)];
    if (ok_m && ok_p) return (T[g.idx(rp, cp)] - T[g.idx(rm, cm)]) / 2.0;
    if (ok_p) return T[g.idx(rp, cp)] - here;
    if (ok_m) return here - T[g.idx(rm, cm)];
    return 0.0;
}

}  // namespace

RgbImage telea_inpaint(const RgbImage& image, const BinaryMask& hole, double radius) {
    if (hole.width != image.width || hole.height != image.height) {
        throw GeometryError("telea_inpaint: hole mask does not match the image");
    }
    if (radius < 1.0) {
        throw ParamError("telea_inpaint: radius must be >= 1, got " + std::to_string(radius));
    }

    DistanceField field = fmm_distance(hole);
    const Grid g{image.width, image.height};

    std::vector<std::tuple<double, int, int>> order;
    for (int r = 0; r < g.h; ++r) {
        for (int c = 0; c < g.w; ++c) {
            if (hole.at(r, c)) order.emplace_back(field.travel_time[g.idx(r, c)], r, c);
        }
    }
    std::sort(order.begin(), order.end());
    if (order.empty()) return image;

    RgbImage out = image;
    std::vector<std::uint8_t> filled(hole.bits.size());
    for (std::size_t i = 0; i < hole.bits.size(); ++i) filled[i] = hole.bits[i] ? 0 : 1;

    constexpr double kDirFloor = 1e-6;
    const int reach = static_cast<int>(std::floor(radius));
    const double radius_sq = radius * radius;
    const std::vector<double>& T = field.travel_time;

    double last_t = -kInf;
    for (const auto& [t, r, c] : order) {
        assert(t >= last_t);  // fast-marching order is non-decreasing
        last_t = t;

        const double grad_r = directional_gradient(T, filled, g, r, c, 1, 0);
        const double grad_c = directional_gradient(T, filled, g, r, c, 0, 1);

        double acc[3] = {0.0, 0.0, 0.0};
        double weight_sum = 0.0;
        for (int dr = -reach; dr <= reach; ++dr) {
            const int rr = r + dr;
            if (rr < 0 || rr >= g.h) continue;
            for (int dc = -reach; dc <= reach; ++dc) {
                const int cc = c + dc;
                if (cc < 0 || cc >= g.w) continue;
                if (dr == 0 && dc == 0) continue;
                const double dist_sq = static_cast<double>(dr) * dr + static_cast<double>(dc) * dc;
                if (dist_sq > radius_sq) continue;
                const std::size_t qi = g.idx(rr, cc);
                if (!filled[qi]) continue;
                const double dist = std::sqrt(dist_sq);
                // direction: alignment of q->p with the front normal
                const double dir =
                    std::max(kDirFloor, (grad_r * -dr + grad_c * -dc) / dist);
                const double dst = 1.0 / dist_sq;
                const double lev = 1.0 / (1.0 + std::abs(t - T[qi]));
                const double w = dir * dst * lev;
                const std::uint8_t* q = out.pixel(rr, cc);
                acc[0] += w * q[0];
                acc[1] += w * q[1];
                acc[2] += w * q[2];
                weight_sum += w;
            }
        }
        std::uint8_t* p = out.pixel(r, c);
        for (int ch = 0; ch < 3; ++ch) {
            double v = std::floor(acc[ch] / weight_sum + 0.5);  // round half up
            p[ch] = static_cast<std::uint8_t>(std::min(255.0, std::max(0.0, v)));
        }
        filled[g.idx(r, c)] = 1;
    }
    return out;
}

RgbImage inpaint_background(const SceneLayers& layers, const PipelineConfig& config) {
    return telea_inpaint(layers.background_with_hole, layers.hole, config.inpaint_radius);
}

}  // namespace parallax
