#pragma once

#include <set>
#include <vector>

#include "parallax/image.hpp"

namespace parallax {

// Tunable constants of the whole pipeline, with the published defaults.
struct PipelineConfig {
    int depth_kernel = 5;      // averaging window around an object's center of mass
    int blur_kernel = 7;       // foreground mask smoothing
    int dilate_kernel = 11;    // background hole enlargement
    double min_relative_area = 0.05;   // objects below this fraction of the largest go background
    double join_tolerance = 0.20;      // max relative depth gap for joining consecutive objects
    double binarize_threshold = 0.5;   // threshold after mask smoothing
    double inpaint_radius = 5.0;       // Telea sampling radius, px
    bool two_layer_mode = false;       // split by map median instead of nearest-group
    bool feather = false;              // soft alpha from the smoothed mask instead of binary

    bool operator==(const PipelineConfig&) const = default;
};

// One segmented object.
struct Instance {
    int id = 0;
    BinaryMask mask;
    std::size_t area = 0;  // set-bit count of mask
};

struct InstanceSet {
    std::vector<Instance> instances;

    bool empty() const { return instances.empty(); }
    std::size_t size() const { return instances.size(); }
};

// An instance annotated with its center of mass and the mean nearness
// around it.
struct RankedInstance {
    Instance instance;
    Point center;
    double mean_depth = 0.0;  // nearness, larger = nearer
};

// Which instances form the foreground component vs. the background.
struct LayerAssignment {
    std::set<int> foreground_ids;
    std::set<int> background_ids;
    BinaryMask foreground_mask;  // union of the foreground instance masks
};

// Arithmetic mean of the depth values in the kernel x kernel window
// centered at round(center), clipped at the borders.
double mean_depth_at(const DepthMap& depth, Point center, int kernel);

// Exact median; mean of the two central values for even counts.
double exact_median(std::vector<double> values);

// Sort instances nearest-first by mean depth around their center of
// mass; ties broken by larger area, then smaller id.
std::vector<RankedInstance> rank_instances(const InstanceSet& instances, const DepthMap& depth,
                                           const PipelineConfig& config);

struct FilterResult {
    InstanceSet kept;
    InstanceSet demoted;  // always assigned to the background
};

// Demote instances whose area is smaller than min_relative_area times
// the largest instance's area (strict inequality). The largest instance
// is always kept.
FilterResult filter_small(const InstanceSet& instances, const PipelineConfig& config);

// Group a nearest-first ranking into runs of near objects. Consecutive
// pair (i, i+1) joins when (d_i - d_{i+1}) / d_i <= join_tolerance;
// a zero d_i joins only a zero d_{i+1}. Joining chains transitively.
std::vector<std::vector<RankedInstance>> join_near(const std::vector<RankedInstance>& ranked,
                                                   const PipelineConfig& config);

// Foreground iff mean depth >= the median of the whole depth map; if
// that leaves the foreground empty, the nearest instance is promoted.
LayerAssignment two_layer_split(const InstanceSet& instances,
                                const std::vector<RankedInstance>& ranked, const DepthMap& depth);

// Full decision: small-object filter, ranking, then either the nearest
// joined group (default) or the two-layer median split.
LayerAssignment assign_layers(const InstanceSet& instances, const DepthMap& depth,
                              const PipelineConfig& config);

// Fallback segmenter: threshold the map at its own median (strictly
// above) and take 4-connected components of at least 64 px.
InstanceSet instances_from_depth(const DepthMap& depth);

}  // namespace parallax
