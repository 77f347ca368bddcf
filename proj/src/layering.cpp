#include "parallax/layering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace parallax {

double mean_depth_at(const DepthMap& depth, Point center, int kernel) {
    if (kernel < 1 || kernel % 2 == 0) {
        throw ParamError("mean_depth_at: kernel size must be odd and positive, got " +
                         std::to_string(kernel));
    }
    const int r = static_cast<int>(std::llround(center.row));
    const int c = static_cast<int>(std::llround(center.col));
    if (!depth.in_bounds(r, c)) {
        throw GeometryError("mean_depth_at: rounded center (" + std::to_string(r) + ", " +
                            std::to_string(c) + ") outside the depth map");
    }
    const int half = (kernel - 1) / 2;
    const int r0 = std::max(0, r - half), r1 = std::min(depth.height - 1, r + half);
    const int c0 = std::max(0, c - half), c1 = std::min(depth.width - 1, c + half);
    double sum = 0.0;
    int n = 0;
    for (int rr = r0; rr <= r1; ++rr) {
        for (int cc = c0; cc <= c1; ++cc) {
            sum += depth.at(rr, cc);
            ++n;
        }
    }
    return sum / n;
}

double exact_median(std::vector<double> values) {
    if (values.empty()) throw EmptyInputError("exact_median: no values");
    const std::size_t n = values.size();
    auto mid = values.begin() + n / 2;
    std::nth_element(values.begin(), mid, values.end());
    double upper = *mid;
    if (n % 2 == 1) return upper;
    double lower = *std::max_element(values.begin(), mid);
    return (lower + upper) / 2.0;
}

std::vector<RankedInstance> rank_instances(const InstanceSet& instances, const DepthMap& depth,
                                           const PipelineConfig& config) {
    std::vector<RankedInstance> ranked;
    ranked.reserve(instances.size());
    for (const Instance& inst : instances.instances) {
        if (inst.mask.width != depth.width || inst.mask.height != depth.height) {
            throw GeometryError("rank_instances: mask dimensions of instance " +
                                std::to_string(inst.id) + " do not match the depth map");
        }
        Point center = center_of_mass(inst.mask);
        double md = mean_depth_at(depth, center, config.depth_kernel);
        ranked.push_back({inst, center, md});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedInstance& a, const RankedInstance& b) {
        if (a.mean_depth != b.mean_depth) return a.mean_depth > b.mean_depth;  // nearest first
        if (a.instance.area != b.instance.area) return a.instance.area > b.instance.area;
        return a.instance.id < b.instance.id;
    });
    return ranked;
}

FilterResult filter_small(const InstanceSet& instances, const PipelineConfig& config) {
    if (instances.empty()) throw EmptyInputError("filter_small: empty instance set");
    std::size_t max_area = 0;
    for (const Instance& inst : instances.instances) max_area = std::max(max_area, inst.area);
    FilterResult result;
    for (const Instance& inst : instances.instances) {
        double relative = static_cast<double>(inst.area) / static_cast<double>(max_area);
        if (inst.area != max_area && relative < config.min_relative_area) {
            result.demoted.instances.push_back(inst);
        } else {
            result.kept.instances.push_back(inst);
        }
    }
    return result;
}

std::vector<std::vector<RankedInstance>> join_near(const std::vector<RankedInstance>& ranked,
                                                   const PipelineConfig& config) {
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        if (ranked[i - 1].mean_depth < ranked[i].mean_depth) {
            throw ContractError("join_near: input must be sorted nearest-first");
        }
    }
    std::vector<std::vector<RankedInstance>> groups;
    for (const RankedInstance& ri : ranked) {
        bool joins = false;
        if (!groups.empty()) {
            double prev = groups.back().back().mean_depth;
            if (prev == 0.0) {
                joins = ri.mean_depth == 0.0;
            } else {
                joins = (prev - ri.mean_depth) / prev <= config.join_tolerance;
            }
        }
        if (joins) {
            groups.back().push_back(ri);
        } else {
            groups.push_back({ri});
        }
    }
    return groups;
}

namespace {

BinaryMask union_of_masks(const InstanceSet& instances, const std::set<int>& ids, int w, int h) {
    BinaryMask mask(w, h);
    for (const Instance& inst : instances.instances) {
        if (!ids.count(inst.id)) continue;
        for (std::size_t i = 0; i < mask.bits.size(); ++i) {
            mask.bits[i] |= inst.mask.bits[i];
        }
    }
    return mask;
}

}  // namespace

LayerAssignment two_layer_split(const InstanceSet& instances,
                                const std::vector<RankedInstance>& ranked, const DepthMap& depth) {
    const double median = exact_median(depth.values);
    LayerAssignment out;
    for (const RankedInstance& ri : ranked) {
        if (ri.mean_depth < median) {
            out.background_ids.insert(ri.instance.id);
        } else {
            out.foreground_ids.insert(ri.instance.id);
        }
    }
    if (out.foreground_ids.empty() && !ranked.empty()) {
        // degenerate case: promote the nearest instance
        int nearest = ranked.front().instance.id;
        out.background_ids.erase(nearest);
        out.foreground_ids.insert(nearest);
    }
    out.foreground_mask = union_of_masks(instances, out.foreground_ids, depth.width, depth.height);
    return out;
}

LayerAssignment assign_layers(const InstanceSet& instances, const DepthMap& depth,
                              const PipelineConfig& config) {
    if (instances.empty()) throw EmptyInputError("assign_layers: empty instance set");
    FilterResult filtered = filter_small(instances, config);
    std::vector<RankedInstance> ranked = rank_instances(filtered.kept, depth, config);

    LayerAssignment out;
    if (config.two_layer_mode) {
        out = two_layer_split(filtered.kept, ranked, depth);
    } else {
        auto groups = join_near(ranked, config);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (const RankedInstance& ri : groups[g]) {
                if (g == 0) {
                    out.foreground_ids.insert(ri.instance.id);
                } else {
                    out.background_ids.insert(ri.instance.id);
                }
            }
        }
        out.foreground_mask =
            union_of_masks(filtered.kept, out.foreground_ids, depth.width, depth.height);
    }
    for (const Instance& inst : filtered.demoted.instances) out.background_ids.insert(inst.id);
    return out;
}

InstanceSet instances_from_depth(const DepthMap& depth) {
    const double median = exact_median(depth.values);
    const int w = depth.width, h = depth.height;
    constexpr std::size_t kMinComponent = 64;

    std::vector<std::int8_t> above(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < above.size(); ++i) above[i] = depth.values[i] > median ? 1 : 0;

    InstanceSet set;
    std::vector<std::uint8_t> seen(above.size(), 0);
    int next_id = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            std::size_t start = static_cast<std::size_t>(r) * w + c;
            if (!above[start] || seen[start]) continue;
            // BFS over the 4-connected component
            BinaryMask mask(w, h);
            std::deque<std::pair<int, int>> queue{{r, c}};
            seen[start] = 1;
            std::size_t area = 0;
            while (!queue.empty()) {
                auto [cr, cc] = queue.front();
                queue.pop_front();
                mask.set(cr, cc, true);
                ++area;
                constexpr int dr[] = {-1, 1, 0, 0};
                constexpr int dc[] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    int nr = cr + dr[k], nc = cc + dc[k];
                    if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                    std::size_t ni = static_cast<std::size_t>(nr) * w + nc;
                    if (above[ni] && !seen[ni]) {
                        seen[ni] = 1;
                        queue.emplace_back(nr, nc);
                    }
                }
            }
            if (area >= kMinComponent) {
                set.instances.push_back({next_id++, std::move(mask), area});
            }
        }
    }
    if (set.empty()) {
        throw EmptyInputError("instances_from_depth: no component of at least " +
                              std::to_string(kMinComponent) + " px above the median");
    }
    return set;
}

}  // namespace parallax
