#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "parallax/pipeline.hpp"

namespace {

parallax::Movement parse_movement(const std::string& name) {
    if (name == "zoomin") return parallax::Movement::ZoomIn;
    if (name == "left") return parallax::Movement::Left;
    return parallax::Movement::Right;
}

void add_common_options(CLI::App& cmd, parallax::RunOptions& opts, std::string& movement) {
    cmd.add_option("image", opts.image, "input photograph (PNG, JPEG or PPM)")->required();
    cmd.add_option("depth", opts.depth, "depth / disparity map (PNG, PGM or PFM)")->required();
    cmd.add_option("--masks", opts.masks,
                   "instance label map, or a directory of per-instance masks "
                   "(omitted: objects are segmented from the depth map)");
    cmd.add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    cmd.add_flag("--invert-depth", opts.invert_depth, "input stores distance, not nearness");
    cmd.add_flag("--two-layer", opts.config.two_layer_mode,
                 "split objects against the depth median instead of taking the nearest group");
    cmd.add_flag("--feather", opts.config.feather, "soft foreground edges");
    cmd.add_option("--join-tolerance", opts.config.join_tolerance,
                   "max relative depth gap that still joins neighboring objects")
        ->capture_default_str();
    cmd.add_option("--min-area", opts.config.min_relative_area,
                   "objects smaller than this fraction of the largest stay in the background")
        ->capture_default_str();
    cmd.add_option("--inpaint-radius", opts.config.inpaint_radius,
                   "sampling radius for hole filling, px")
        ->capture_default_str();
    cmd.add_option("--movement", movement, "camera movement")
        ->check(CLI::IsMember({"zoomin", "left", "right"}))
        ->capture_default_str();
    cmd.add_option("--frames", opts.spec.n, "frame count")->capture_default_str();
    cmd.add_option("--fore1", opts.spec.fore1, "initial foreground offset")
        ->capture_default_str();
    cmd.add_option("--back1", opts.spec.back1, "initial background offset")
        ->capture_default_str();
    cmd.add_option("--c-fore", opts.spec.c_fore, "per-frame foreground increment")
        ->capture_default_str();
    cmd.add_option("--c-back", opts.spec.c_back, "per-frame background increment")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"turns one photograph with a depth map into a short parallax motion clip"};
    app.require_subcommand(1);

    parallax::RunOptions gen_opts;
    std::string gen_movement = "left";
    CLI::App* generate = app.add_subcommand("generate", "render the full frame sequence");
    add_common_options(*generate, gen_opts, gen_movement);

    parallax::RunOptions layer_opts;
    std::string layer_movement = "left";
    CLI::App* layers =
        app.add_subcommand("layers", "stop after inpainting and dump the intermediate layers");
    add_common_options(*layers, layer_opts, layer_movement);

    std::string synth_out = "out";
    CLI::App* synth = app.add_subcommand("synth", "write the built-in demo scene");
    synth->add_option("--out", synth_out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (generate->parsed()) {
        gen_opts.spec.movement = parse_movement(gen_movement);
        return parallax::run_generate(gen_opts);
    }
    if (layers->parsed()) {
        layer_opts.spec.movement = parse_movement(layer_movement);
        return parallax::run_layers(layer_opts);
    }
    return parallax::run_synth(synth_out);
}
