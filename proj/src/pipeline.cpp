#include "parallax/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "parallax/inpaint.hpp"
#include "parallax/refine.hpp"
#include "parallax/synth.hpp"

namespace fs = std::filesystem;

namespace parallax {

namespace {

std::vector<RankingRow> build_ranking(const InstanceSet& instances, const DepthMap& depth,
                                      const PipelineConfig& config,
                                      const LayerAssignment& assignment) {
    const FilterResult filtered = filter_small(instances, config);
    std::vector<RankingRow> rows;
    for (const InstanceSet* group : {&filtered.kept, &filtered.demoted}) {
        for (const RankedInstance& ranked : rank_instances(*group, depth, config)) {
            const bool fore = assignment.foreground_ids.count(ranked.instance.id) > 0;
            rows.push_back({ranked.instance.id, ranked.instance.area, ranked.mean_depth,
                            fore ? "foreground" : "background"});
        }
    }
    return rows;
}

struct Prepared {
    RgbImage image;
    DepthMap depth;
    bool fallback = false;
    LayerAssignment assignment;
    std::vector<RankingRow> ranking;
    SceneLayers layers;
    RgbImage inpainted;
    std::map<std::string, std::string> digests;
};

// Everything up to and including inpainting, shared by generate and layers.
Prepared prepare(const RunOptions& opts, std::string& stage) {
    Prepared p;

    stage = "load";
    p.image = load_rgb(opts.image);
    p.depth = load_depth(opts.depth, opts.invert_depth);
    if (p.depth.width != p.image.width || p.depth.height != p.image.height) {
        throw InputError("depth map " + opts.depth.string() + " is " +
                         std::to_string(p.depth.width) + "x" + std::to_string(p.depth.height) +
                         " but image " + opts.image.string() + " is " +
                         std::to_string(p.image.width) + "x" + std::to_string(p.image.height));
    }
    p.digests["image"] = file_digest_hex(opts.image);
    p.digests["depth"] = file_digest_hex(opts.depth);
    InstanceSet instances;
    if (opts.masks.empty()) {
        p.fallback = true;
        instances = instances_from_depth(p.depth);
    } else {
        instances = load_labelmap(opts.masks);
        p.digests["masks"] = file_digest_hex(opts.masks);
        for (const Instance& inst : instances.instances) {
            if (inst.mask.width != p.image.width || inst.mask.height != p.image.height) {
                throw InputError("masks " + opts.masks.string() +
                                 " do not match the image dimensions");
            }
        }
    }

    stage = "layering";
    p.assignment = assign_layers(instances, p.depth, opts.config);
    p.ranking = build_ranking(instances, p.depth, opts.config, p.assignment);

    stage = "split";
    p.layers = split_components(p.image, p.assignment, opts.config);

    stage = "inpaint";
    p.inpainted = inpaint_background(p.layers, opts.config);
    return p;
}

void remove_frame_files(const fs::path& dir, int n) {
    for (int k = 1; k <= n; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04d.png", k);
        std::error_code ec;
        fs::remove(dir / name, ec);
    }
}

int report(const std::string& stage, const Error& e, int code) {
    std::cerr << "error [" << stage << "]: " << e.what() << "\n";
    return code;
}

template <typename F>
int guarded(F&& body) {
    std::string stage = "setup";
    try {
        body(stage);
        return 0;
    } catch (const InputError& e) {
        return report(stage, e, 1);
    } catch (const EmptyInputError& e) {
        return report(stage, e, 1);
    } catch (const OutputError& e) {
        return report(stage, e, 3);
    } catch (const Error& e) {
        return report(stage, e, 2);
    } catch (const std::exception& e) {
        std::cerr << "error [" << stage << "]: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int run_generate(const RunOptions& opts) {
    return guarded([&](std::string& stage) {
        Prepared p = prepare(opts, stage);

        stage = "motion";
        const FrameSequence seq = generate_sequence(p.layers, p.inpainted, opts.spec);

        RunManifest manifest;
        manifest.config = opts.config;
        manifest.spec = opts.spec;
        manifest.input_digests = std::move(p.digests);
        manifest.offsets = seq.offsets;
        manifest.ranking = std::move(p.ranking);
        manifest.fallback_segmenter = p.fallback;

        stage = "write";
        try {
            write_frames(seq, opts.out_dir);
            write_manifest(manifest, opts.out_dir / "manifest.json");
        } catch (...) {
            remove_frame_files(opts.out_dir, opts.spec.n);  // all frames or none
            throw;
        }
    });
}

int run_layers(const RunOptions& opts) {
    return guarded([&](std::string& stage) {
        const Prepared p = prepare(opts, stage);

        stage = "write";
        write_layers_debug(p.layers, p.inpainted, opts.out_dir);
        const fs::path table_path = opts.out_dir / "ranking.txt";
        std::ofstream table(table_path);
        if (!table) throw OutputError("cannot open for writing: " + table_path.string());
        table << "id\tarea\tmean_depth\tlayer\n";
        for (const RankingRow& row : p.ranking) {
            table << row.id << '\t' << row.area << '\t' << row.mean_depth << '\t' << row.layer
                  << '\n';
        }
        table.flush();
        if (!table) throw OutputError("write failed: " + table_path.string());
    });
}

int run_synth(const fs::path& out_dir) {
    return guarded([&](std::string& stage) {
        stage = "write";
        write_synth_scene(out_dir);
    });
}

}  // namespace parallax
