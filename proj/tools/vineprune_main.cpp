#include <CLI11.hpp>

#include "vineprune/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Grapevine plant modeling and pruning-point generation"};
    app.require_subcommand(1);

    vineprune::RunOptions run_options;
    int image_id = -1;
    CLI::App* run = app.add_subcommand("run", "Process one scene end to end");
    run->add_option("--annotations", run_options.annotations_path,
                    "COCO instance-segmentation JSON")
        ->required();
    run->add_option("--depth", run_options.depth_path, "16-bit grayscale depth PNG")->required();
    run->add_option("--config", run_options.config_path, "pipeline config file (key = value)");
    run->add_option("--out", run_options.out_dir, "output directory")->required();
    run->add_option("--image-id", image_id, "image to select in multi-image COCO files");
    run->add_flag("!--no-overlay", run_options.overlay, "skip writing overlay.png");

    vineprune::BenchOptions bench_options;
    CLI::App* bench = app.add_subcommand("bench", "Run the synthetic benchmark grid");
    bench->add_option("--grid", bench_options.grid_path, "bench grid JSON")->required();
    bench->add_option("--out", bench_options.out_dir, "output directory")->required();
    bench->add_option("--jobs", bench_options.jobs, "parallel workers")->default_val(1);

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        if (run->count("--image-id") > 0) run_options.image_id = image_id;
        return vineprune::cmd_run(run_options);
    }
    return vineprune::cmd_bench(bench_options);
}
