// vfclassify: synthetic perimetry pipeline driver.
//
// Subcommands: gen, train, eval, pipeline, verify-tables, init-config.
// Exit codes: 0 success, 1 validation failure, 2 I/O failure,
// 3 verification failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "vfclassify/errors.hpp"
#include "vfclassify/eval.hpp"
#include "vfclassify/pipeline.hpp"

namespace {

vfc::PipelineConfig load_config(const std::string& config_path,
                                const std::optional<std::string>& out_override,
                                const std::optional<std::uint64_t>& seed_override) {
    vfc::PipelineConfig config = vfc::PipelineConfig::from_file(config_path);
    if (out_override) config.out_dir = *out_override;
    if (seed_override) config.gen_seed = *seed_override;
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Visual-field glaucoma classification toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_override;
    std::optional<std::uint64_t> seed_override;
    std::size_t pgm_count = 0;
    bool comma_decimal = false;
    std::string init_path = "vfclassify.conf";

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "pipeline config file");
        if (needs_config) opt->required();
        cmd->add_option("--out", out_override, "override [output] dir");
        cmd->add_option("--seed", seed_override, "override [gen] seed");
    };

    auto* gen = app.add_subcommand("gen", "generate the synthetic dataset");
    add_common(gen, true);
    gen->add_option("--render-pgm", pgm_count,
                    "also render the first N records as PGM images");

    auto* train = app.add_subcommand("train", "train models on an existing dataset");
    add_common(train, true);

    auto* eval = app.add_subcommand("eval", "evaluate trained models on the test split");
    add_common(eval, true);

    auto* pipeline = app.add_subcommand("pipeline", "run the full pipeline");
    add_common(pipeline, true);

    auto* verify = app.add_subcommand(
        "verify-tables", "reconstruct and check the published result tables");
    verify->add_flag("--comma-decimal", comma_decimal,
                     "print metrics with a comma decimal separator");

    auto* init = app.add_subcommand("init-config", "write a default config file");
    init->add_option("path", init_path, "destination path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const auto config = load_config(config_path, out_override, seed_override);
            for (const auto& path : vfc::run_gen(config, pgm_count))
                std::cout << "wrote " << path.string() << '\n';
        } else if (train->parsed()) {
            const auto config = load_config(config_path, out_override, seed_override);
            for (const auto& path : vfc::run_train(config))
                std::cout << "wrote " << path.string() << '\n';
        } else if (eval->parsed()) {
            const auto config = load_config(config_path, out_override, seed_override);
            const auto result = vfc::run_eval(config);
            for (const auto& path : result.artifacts)
                std::cout << "wrote " << path.string() << '\n';
        } else if (pipeline->parsed()) {
            const auto config = load_config(config_path, out_override, seed_override);
            const auto result = vfc::run_pipeline(config);
            for (const auto& path : result.artifacts)
                std::cout << "wrote " << path.string() << '\n';
        } else if (verify->parsed()) {
            const auto report = vfc::verify_paper_tables();
            std::cout << vfc::render_verification(report, comma_decimal);
            return report.all_passed ? 0 : 3;
        } else if (init->parsed()) {
            std::ofstream out(init_path, std::ios::binary);
            if (!out) throw vfc::IoError("cannot write " + init_path);
            out << vfc::default_config_text();
            std::cout << "wrote " << init_path << '\n';
        }
    } catch (const vfc::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const vfc::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
