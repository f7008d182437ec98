#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vfclassify/classifiers.hpp"
#include "vfclassify/eval.hpp"
#include "vfclassify/synthgen.hpp"

namespace vfc {

/// Flat `key = value` config with `[section]` headers and '#' comments.
/// Keys are stored as "section.key".
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::filesystem::path& path);

/// Everything one run needs. Seeds carry no entropy defaults: the config
/// file must state them.
struct PipelineConfig {
    std::filesystem::path dataset_path;
    bool generate = true;
    GenConfig gen;
    std::uint64_t gen_seed = 0;

    double test_fraction = 0.2;
    std::uint64_t split_seed = 0;

    bool preprocess = true;           // route features through render/extract
    FeatureMode feature_mode = FeatureMode::Raw;
    std::size_t raster_px = 256;

    std::map<Algorithm, Hyperparams> hyper; // enabled algorithms only
    std::filesystem::path out_dir;

    /// Parses and validates; missing seeds, overlapping paths or bad
    /// values raise ValidationError.
    static PipelineConfig from_map(const ConfigMap& map);
    static PipelineConfig from_file(const std::filesystem::path& path);

    void validate() const;
};

/// The sample config written by `vfclassify init-config` and used by the
/// synthetic benchmark: 80/65 records, seed 42, all four algorithms.
std::string default_config_text();

struct PipelineResult {
    std::vector<std::pair<Algorithm, ClassReport>> results;
    std::vector<std::filesystem::path> artifacts;
};

/// generate (optional) -> split -> featurize -> standardize (train only)
/// -> fit -> evaluate -> reports + summary + manifest. Artifacts are
/// deterministic bytes given the config; on failure every partially
/// written artifact is removed before the error propagates (stage name
/// prefixed).
PipelineResult run_pipeline(const PipelineConfig& config);

/// `gen` subcommand: writes the dataset CSV (+ grid sidecar); optionally
/// renders the first pgm_count records to PGM files in out_dir.
std::vector<std::filesystem::path> run_gen(const PipelineConfig& config,
                                           std::size_t pgm_count = 0);

/// `train` subcommand: loads the dataset (never generates), splits,
/// standardizes on train, fits the enabled algorithms, saves models, the
/// standardizer and the split record ids under out_dir.
std::vector<std::filesystem::path> run_train(const PipelineConfig& config);

/// `eval` subcommand: reloads models + standardizer written by `train`,
/// rebuilds the same split, evaluates on the test half and writes reports
/// plus the summary.
PipelineResult run_eval(const PipelineConfig& config);

} // namespace vfc
