#include "vfclassify/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "vfclassify/errors.hpp"
#include "vfclassify/preprocess.hpp"
#include "vfclassify/vfdata.hpp"
#include "text_util.hpp"

namespace vfc {

namespace {

const std::vector<std::pair<Algorithm, std::string>> kAlgorithmSections = {
    {Algorithm::LogReg, "logreg"},
    {Algorithm::NaiveBayes, "naive_bayes"},
    {Algorithm::RandomForest, "random_forest"},
    {Algorithm::SgdSvm, "sgd_svm"},
};

std::string file_stem(Algorithm algorithm) {
    for (const auto& [alg, name] : kAlgorithmSections)
        if (alg == algorithm) return name;
    throw ValidationError("unknown algorithm");
}

bool parse_on_off(const std::string& value, const std::string& key) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ValidationError(key + " must be on or off, got '" + value + "'");
}

// Known keys per section; anything else in the config is a typo.
const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "data.dataset", "data.generate",
        "gen.seed", "gen.n_glaucoma", "gen.n_other", "gen.noise_sd_db",
        "gen.glaucoma_depth_min_db", "gen.glaucoma_depth_max_db",
        "gen.weight_diffuse", "gen.weight_central", "gen.weight_hemifield",
        "gen.base_peak_db", "gen.base_slope_db_per_deg",
        "gen.eccentricities_deg", "gen.meridians_deg",
        "split.test_fraction", "split.seed",
        "features.preprocess", "features.mode", "features.raster_px",
        "logreg.enabled", "logreg.learning_rate", "logreg.l2_lambda",
        "logreg.max_epochs", "logreg.tol",
        "naive_bayes.enabled", "naive_bayes.var_smoothing",
        "random_forest.enabled", "random_forest.n_trees",
        "random_forest.max_depth", "random_forest.min_samples_split",
        "random_forest.seed",
        "sgd_svm.enabled", "sgd_svm.l2_lambda", "sgd_svm.max_epochs",
        "sgd_svm.seed",
        "output.dir",
    };
    return keys;
}

class ConfigReader {
public:
    explicit ConfigReader(const ConfigMap& map) : map_(map) {}

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    std::string require(const std::string& key) const {
        auto it = map_.find(key);
        if (it == map_.end())
            throw ValidationError("config is missing required key '" + key + "'");
        return it->second;
    }

    std::string get(const std::string& key, const std::string& fallback) const {
        auto it = map_.find(key);
        return it == map_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = map_.find(key);
        return it == map_.end() ? fallback : detail::parse_double(it->second, key);
    }

    std::uint64_t require_seed(const std::string& key) const {
        return detail::parse_uint64(require(key), key);
    }

    std::size_t get_count(const std::string& key, std::size_t fallback) const {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        const auto v = detail::parse_int(it->second, key);
        if (v < 0) throw ValidationError(key + " must be >= 0");
        return static_cast<std::size_t>(v);
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto it = map_.find(key);
        return it == map_.end() ? fallback : parse_on_off(it->second, key);
    }

private:
    const ConfigMap& map_;
};

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& key) {
    std::vector<double> out;
    for (const auto& tok : detail::split(text, ','))
        out.push_back(detail::parse_double(tok, key));
    return out;
}

// Deterministic featurization shared by pipeline/train/eval. preprocess=on
// routes every record through the image domain: render the printout
// stand-in, denoise it, read the grid back.
std::vector<FeatureVector> featurize(const Dataset& dataset,
                                     const PipelineConfig& config) {
    std::vector<FeatureVector> features;
    features.reserve(dataset.records.size());
    for (const auto& rec : dataset.records) {
        VisualFieldRecord working = rec;
        if (config.preprocess) {
            const Raster raster = render_raster(rec, dataset.grid,
                                                config.raster_px, config.raster_px);
            working.sensitivities =
                extract_grid(median_filter(raster), dataset.grid, rec.eye);
        }
        features.push_back(features_from_record(working, dataset.grid,
                                                config.feature_mode,
                                                config.gen.base_peak_db,
                                                config.gen.base_slope_db_per_deg));
    }
    return features;
}

std::vector<Label> labels_of(const Dataset& dataset) {
    std::vector<Label> labels;
    labels.reserve(dataset.records.size());
    for (const auto& rec : dataset.records) labels.push_back(rec.label);
    return labels;
}

void write_text_file(const std::filesystem::path& path, const std::string& text,
                     std::vector<std::filesystem::path>& artifacts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
    artifacts.push_back(path);
}

std::string standardizer_to_string(const Standardizer& std_) {
    std::ostringstream out;
    out << "vfclassify-standardizer v1\n";
    out << "dim " << std_.means.size() << '\n';
    out << "means";
    for (double m : std_.means) out << ' ' << detail::format_double(m);
    out << "\nsds";
    for (double s : std_.sds) out << ' ' << detail::format_double(s);
    out << '\n';
    return out.str();
}

Standardizer standardizer_from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open standardizer " + path.string());
    std::string header;
    std::getline(in, header);
    if (detail::trim(header) != "vfclassify-standardizer v1")
        throw ValidationError("not a vfclassify standardizer file: " +
                              path.string());
    std::string dim_line, means_line, sds_line;
    if (!std::getline(in, dim_line) || !std::getline(in, means_line) ||
        !std::getline(in, sds_line))
        throw ValidationError("standardizer file truncated: " + path.string());
    const auto dim_toks = detail::split(detail::trim(dim_line), ' ');
    if (dim_toks.size() != 2 || dim_toks[0] != "dim")
        throw ValidationError("standardizer file: expected 'dim <d>'");
    const auto dim =
        static_cast<std::size_t>(detail::parse_int(dim_toks[1], "dim"));

    auto parse_line = [&](const std::string& line, const std::string& tag) {
        std::istringstream iss(line);
        std::string head;
        iss >> head;
        if (head != tag)
            throw ValidationError("standardizer file: expected '" + tag + "'");
        std::vector<double> values;
        std::string tok;
        while (iss >> tok) values.push_back(detail::parse_double(tok, tag));
        if (values.size() != dim)
            throw ValidationError("standardizer file: '" + tag + "' needs " +
                                  std::to_string(dim) + " values");
        return values;
    };
    Standardizer std_;
    std_.means = parse_line(means_line, "means");
    std_.sds = parse_line(sds_line, "sds");
    return std_;
}

struct PreparedData {
    SplitResult split;
    std::vector<FeatureVector> train_features; // standardized
    std::vector<FeatureVector> test_features;  // standardized with train stats
    std::vector<Label> train_labels;
    std::vector<Label> test_labels;
    Standardizer standardizer; // train statistics only: no test leakage
};

PreparedData prepare(const Dataset& dataset, const PipelineConfig& config) {
    PreparedData data;
    data.split = stratified_split(dataset, config.test_fraction, config.split_seed);
    auto train_raw = featurize(data.split.train, config);
    auto test_raw = featurize(data.split.test, config);
    data.standardizer = fit_standardizer(train_raw);
    for (const auto& f : train_raw)
        data.train_features.push_back(apply_standardizer(data.standardizer, f));
    for (const auto& f : test_raw)
        data.test_features.push_back(apply_standardizer(data.standardizer, f));
    data.train_labels = labels_of(data.split.train);
    data.test_labels = labels_of(data.split.test);
    return data;
}

TrainedModel fit_algorithm(Algorithm algorithm, const Hyperparams& hyper,
                           const std::vector<FeatureVector>& X,
                           const std::vector<Label>& y) {
    switch (algorithm) {
        case Algorithm::LogReg: return logreg_fit(X, y, hyper);
        case Algorithm::NaiveBayes: return nb_fit(X, y, hyper);
        case Algorithm::RandomForest: return forest_fit(X, y, hyper);
        case Algorithm::SgdSvm: return svm_sgd_fit(X, y, hyper);
    }
    throw ValidationError("unknown algorithm");
}

std::string manifest_text(const PipelineConfig& config, const PreparedData& data) {
    std::ostringstream out;
    out << "vfclassify-run v1\n";
    out << "dataset = " << config.dataset_path.generic_string() << '\n';
    out << "generate = " << (config.generate ? "on" : "off") << '\n';
    if (config.generate) out << "gen_seed = " << config.gen_seed << '\n';
    out << "split_seed = " << config.split_seed << '\n';
    out << "test_fraction = " << detail::format_double(config.test_fraction)
        << '\n';
    out << "preprocess = " << (config.preprocess ? "on" : "off") << '\n';
    out << "feature_mode = "
        << (config.feature_mode == FeatureMode::Raw ? "raw" : "summary") << '\n';
    out << "raster_px = " << config.raster_px << '\n';

    std::array<std::size_t, 2> train_counts{}, test_counts{};
    for (const auto& rec : data.split.train.records)
        ++train_counts[to_int(rec.label)];
    for (const auto& rec : data.split.test.records)
        ++test_counts[to_int(rec.label)];
    out << "train_support = " << train_counts[0] << ',' << train_counts[1] << '\n';
    out << "test_support = " << test_counts[0] << ',' << test_counts[1] << '\n';
    out << "test_ids =";
    for (const auto& rec : data.split.test.records) out << ' ' << rec.record_id;
    out << '\n';
    out << "standardizer_means";
    for (double m : data.standardizer.means)
        out << ' ' << detail::format_double(m);
    out << "\nstandardizer_sds";
    for (double s : data.standardizer.sds) out << ' ' << detail::format_double(s);
    out << '\n';
    return out.str();
}

// Removes everything this run managed to write, then rethrows with the
// stage name attached so callers can tell which phase failed.
template <typename Fn>
void run_stage(const std::string& stage,
               std::vector<std::filesystem::path>& artifacts, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception&) {
        std::error_code ec;
        for (const auto& path : artifacts) std::filesystem::remove(path, ec);
        try {
            throw;
        } catch (const ValidationError& e) {
            throw ValidationError(stage + ": " + e.what());
        } catch (const IoError& e) {
            throw IoError(stage + ": " + e.what());
        } catch (const std::exception& e) {
            throw ValidationError(stage + ": " + e.what());
        }
    }
}

} // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line, section;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        if (trimmed.front() == '[') {
            if (trimmed.back() != ']')
                throw ValidationError("config row " + std::to_string(row) +
                                      ": unterminated section header");
            section = detail::trim(trimmed.substr(1, trimmed.size() - 2));
            if (section.empty())
                throw ValidationError("config row " + std::to_string(row) +
                                      ": empty section name");
            continue;
        }
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config row " + std::to_string(row) +
                                  ": expected 'key = value'");
        if (section.empty())
            throw ValidationError("config row " + std::to_string(row) +
                                  ": key outside any [section]");
        const std::string key = detail::trim(trimmed.substr(0, eq));
        const std::string value = detail::trim(trimmed.substr(eq + 1));
        if (key.empty())
            throw ValidationError("config row " + std::to_string(row) +
                                  ": empty key");
        const std::string full = section + "." + key;
        if (!map.emplace(full, value).second)
            throw ValidationError("config row " + std::to_string(row) +
                                  ": duplicate key '" + full + "'");
    }
    return map;
}

ConfigMap parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

PipelineConfig PipelineConfig::from_map(const ConfigMap& map) {
    for (const auto& [key, value] : map)
        if (!known_keys().count(key))
            throw ValidationError("unknown config key '" + key + "'");

    ConfigReader reader(map);
    PipelineConfig config;
    config.dataset_path = reader.require("data.dataset");
    config.generate = reader.get_bool("data.generate", true);

    if (config.generate) {
        config.gen_seed = reader.require_seed("gen.seed");
        config.gen.n_glaucoma = reader.get_count("gen.n_glaucoma", 80);
        config.gen.n_other = reader.get_count("gen.n_other", 65);
        config.gen.noise_sd_db = reader.get_double("gen.noise_sd_db", 1.5);
        config.gen.glaucoma_depth_min_db =
            reader.get_double("gen.glaucoma_depth_min_db", 10.0);
        config.gen.glaucoma_depth_max_db =
            reader.get_double("gen.glaucoma_depth_max_db", 25.0);
        config.gen.other_pattern_weights = {
            reader.get_double("gen.weight_diffuse", 1.0 / 3),
            reader.get_double("gen.weight_central", 1.0 / 3),
            reader.get_double("gen.weight_hemifield", 1.0 / 3)};
    }
    config.gen.base_peak_db = reader.get_double("gen.base_peak_db", 33.0);
    config.gen.base_slope_db_per_deg =
        reader.get_double("gen.base_slope_db_per_deg", 0.25);
    if (reader.has("gen.eccentricities_deg"))
        config.gen.grid.eccentricities_deg = parse_double_list(
            reader.require("gen.eccentricities_deg"), "gen.eccentricities_deg");
    if (reader.has("gen.meridians_deg"))
        config.gen.grid.meridians_deg = parse_double_list(
            reader.require("gen.meridians_deg"), "gen.meridians_deg");

    config.test_fraction = reader.get_double("split.test_fraction", 0.2);
    config.split_seed = reader.require_seed("split.seed");

    config.preprocess = reader.get_bool("features.preprocess", true);
    const std::string mode = reader.get("features.mode", "raw");
    if (mode == "raw")
        config.feature_mode = FeatureMode::Raw;
    else if (mode == "summary")
        config.feature_mode = FeatureMode::Summary;
    else
        throw ValidationError("features.mode must be raw or summary, got '" +
                              mode + "'");
    config.raster_px = reader.get_count("features.raster_px", 256);

    for (const auto& [algorithm, section] : kAlgorithmSections) {
        if (!reader.get_bool(section + ".enabled", true)) continue;
        Hyperparams h = Hyperparams::defaults_for(algorithm);
        switch (algorithm) {
            case Algorithm::LogReg:
                h.learning_rate =
                    reader.get_double("logreg.learning_rate", h.learning_rate);
                h.l2_lambda = reader.get_double("logreg.l2_lambda", h.l2_lambda);
                h.max_epochs = reader.get_count("logreg.max_epochs", h.max_epochs);
                h.tol = reader.get_double("logreg.tol", h.tol);
                break;
            case Algorithm::NaiveBayes:
                h.var_smoothing = reader.get_double("naive_bayes.var_smoothing",
                                                    h.var_smoothing);
                break;
            case Algorithm::RandomForest: {
                h.n_trees = reader.get_count("random_forest.n_trees", h.n_trees);
                const std::string depth =
                    reader.get("random_forest.max_depth", "unlimited");
                h.max_depth = depth == "unlimited"
                                  ? kUnlimitedDepth
                                  : static_cast<int>(detail::parse_int(
                                        depth, "random_forest.max_depth"));
                h.min_samples_split = reader.get_count(
                    "random_forest.min_samples_split", h.min_samples_split);
                h.rng_seed = reader.require_seed("random_forest.seed");
                break;
            }
            case Algorithm::SgdSvm:
                h.l2_lambda = reader.get_double("sgd_svm.l2_lambda", h.l2_lambda);
                h.max_epochs = reader.get_count("sgd_svm.max_epochs", h.max_epochs);
                h.rng_seed = reader.require_seed("sgd_svm.seed");
                break;
        }
        config.hyper.emplace(algorithm, h);
    }

    config.out_dir = reader.get("output.dir", "out");
    config.validate();
    return config;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    return from_map(parse_config_file(path));
}

void PipelineConfig::validate() const {
    if (dataset_path.empty()) throw ValidationError("data.dataset must be set");
    if (out_dir.empty()) throw ValidationError("output.dir must be set");
    if (std::filesystem::path(dataset_path) == out_dir ||
        grid_sidecar_path(dataset_path) == dataset_path)
        throw ValidationError("dataset path and output dir must be distinct");
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
        throw ValidationError("split.test_fraction must lie in (0, 1)");
    if (hyper.empty())
        throw ValidationError("no algorithm enabled");
    if (preprocess && raster_px < 64)
        throw ValidationError("features.raster_px must be >= 64");
    if (generate) gen.validate();
}

std::string default_config_text() {
    return
        "# vfclassify pipeline configuration\n"
        "[data]\n"
        "dataset = out/dataset.csv\n"
        "generate = on\n"
        "\n"
        "[gen]\n"
        "seed = 42\n"
        "n_glaucoma = 80\n"
        "n_other = 65\n"
        "noise_sd_db = 1.5\n"
        "glaucoma_depth_min_db = 10\n"
        "glaucoma_depth_max_db = 25\n"
        "base_peak_db = 33\n"
        "base_slope_db_per_deg = 0.25\n"
        "\n"
        "[split]\n"
        "test_fraction = 0.2\n"
        "seed = 42\n"
        "\n"
        "[features]\n"
        "preprocess = on\n"
        "mode = raw\n"
        "raster_px = 256\n"
        "\n"
        "[logreg]\n"
        "enabled = on\n"
        "learning_rate = 0.1\n"
        "l2_lambda = 0\n"
        "max_epochs = 2000\n"
        "tol = 1e-7\n"
        "\n"
        "[naive_bayes]\n"
        "enabled = on\n"
        "var_smoothing = 1e-9\n"
        "\n"
        "[random_forest]\n"
        "enabled = on\n"
        "n_trees = 101\n"
        "max_depth = unlimited\n"
        "min_samples_split = 2\n"
        "seed = 42\n"
        "\n"
        "[sgd_svm]\n"
        "enabled = on\n"
        "l2_lambda = 0.01\n"
        "max_epochs = 200\n"
        "seed = 42\n"
        "\n"
        "[output]\n"
        "dir = out\n";
}

std::vector<std::filesystem::path> run_gen(const PipelineConfig& config,
                                           std::size_t pgm_count) {
    std::vector<std::filesystem::path> artifacts;
    run_stage("generate", artifacts, [&] {
        if (!config.generate)
            throw ValidationError("data.generate is off; nothing to do");
        const Dataset dataset = generate_dataset(config.gen, config.gen_seed);
        if (config.dataset_path.has_parent_path())
            std::filesystem::create_directories(config.dataset_path.parent_path());
        save_dataset(dataset, config.dataset_path);
        artifacts.push_back(config.dataset_path);
        artifacts.push_back(grid_sidecar_path(config.dataset_path));
        if (pgm_count > 0) {
            std::filesystem::create_directories(config.out_dir);
            const std::size_t n = std::min(pgm_count, dataset.records.size());
            for (std::size_t i = 0; i < n; ++i) {
                const auto& rec = dataset.records[i];
                const Raster raster = render_raster(rec, dataset.grid,
                                                    config.raster_px,
                                                    config.raster_px);
                const auto path = config.out_dir / (rec.record_id + ".pgm");
                write_pgm(raster, path);
                artifacts.push_back(path);
            }
        }
    });
    return artifacts;
}

std::vector<std::filesystem::path> run_train(const PipelineConfig& config) {
    std::vector<std::filesystem::path> artifacts;
    Dataset dataset;
    run_stage("load", artifacts,
              [&] { dataset = load_dataset(config.dataset_path); });
    PreparedData data;
    run_stage("prepare", artifacts, [&] { data = prepare(dataset, config); });
    run_stage("train", artifacts, [&] {
        std::filesystem::create_directories(config.out_dir);
        write_text_file(config.out_dir / "standardizer.txt",
                        standardizer_to_string(data.standardizer), artifacts);
        write_text_file(config.out_dir / "run_manifest.txt",
                        manifest_text(config, data), artifacts);
        for (const auto& [algorithm, hyper] : config.hyper) {
            const TrainedModel model = fit_algorithm(
                algorithm, hyper, data.train_features, data.train_labels);
            const auto path =
                config.out_dir / ("model_" + file_stem(algorithm) + ".txt");
            save_model(model, path);
            artifacts.push_back(path);
        }
    });
    return artifacts;
}

PipelineResult run_eval(const PipelineConfig& config) {
    PipelineResult result;
    Dataset dataset;
    run_stage("load", result.artifacts,
              [&] { dataset = load_dataset(config.dataset_path); });

    run_stage("evaluate", result.artifacts, [&] {
        const SplitResult split =
            stratified_split(dataset, config.test_fraction, config.split_seed);
        const Standardizer standardizer =
            standardizer_from_file(config.out_dir / "standardizer.txt");
        const auto test_raw = featurize(split.test, config);
        std::vector<FeatureVector> test_features;
        for (const auto& f : test_raw)
            test_features.push_back(apply_standardizer(standardizer, f));
        const auto test_labels = labels_of(split.test);

        for (const auto& [algorithm, hyper] : config.hyper) {
            const auto model_path =
                config.out_dir / ("model_" + file_stem(algorithm) + ".txt");
            const TrainedModel model = load_model(model_path);
            std::vector<Label> predictions;
            predictions.reserve(test_features.size());
            for (const auto& f : test_features)
                predictions.push_back(predict(model, f));
            const ClassReport report =
                classification_report(confusion_matrix(test_labels, predictions));
            result.results.emplace_back(algorithm, report);
            write_text_file(
                config.out_dir / ("report_" + file_stem(algorithm) + ".txt"),
                render_report(algorithm, report, hyper, config.preprocess,
                              config.feature_mode),
                result.artifacts);
            write_text_file(
                config.out_dir / ("report_" + file_stem(algorithm) + ".csv"),
                render_report_csv(algorithm, report), result.artifacts);
        }
        write_text_file(config.out_dir / "summary.txt",
                        render_summary(result.results), result.artifacts);
    });
    return result;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    PipelineResult result;
    auto& artifacts = result.artifacts;

    Dataset dataset;
    if (config.generate) {
        run_stage("generate", artifacts, [&] {
            dataset = generate_dataset(config.gen, config.gen_seed);
            if (config.dataset_path.has_parent_path())
                std::filesystem::create_directories(
                    config.dataset_path.parent_path());
            save_dataset(dataset, config.dataset_path);
            artifacts.push_back(config.dataset_path);
            artifacts.push_back(grid_sidecar_path(config.dataset_path));
        });
    } else {
        run_stage("load", artifacts,
                  [&] { dataset = load_dataset(config.dataset_path); });
    }

    PreparedData data;
    run_stage("prepare", artifacts, [&] { data = prepare(dataset, config); });

    run_stage("train", artifacts, [&] {
        std::filesystem::create_directories(config.out_dir);
        write_text_file(config.out_dir / "standardizer.txt",
                        standardizer_to_string(data.standardizer), artifacts);
        write_text_file(config.out_dir / "run_manifest.txt",
                        manifest_text(config, data), artifacts);
        for (const auto& [algorithm, hyper] : config.hyper) {
            const TrainedModel model = fit_algorithm(
                algorithm, hyper, data.train_features, data.train_labels);
            save_model(model,
                       config.out_dir / ("model_" + file_stem(algorithm) + ".txt"));
            artifacts.push_back(config.out_dir /
                                ("model_" + file_stem(algorithm) + ".txt"));

            std::vector<Label> predictions;
            predictions.reserve(data.test_features.size());
            for (const auto& f : data.test_features)
                predictions.push_back(predict(model, f));
            const ClassReport report = classification_report(
                confusion_matrix(data.test_labels, predictions));
            result.results.emplace_back(algorithm, report);
        }
    });

    run_stage("evaluate", artifacts, [&] {
        for (const auto& [algorithm, report] : result.results) {
            write_text_file(
                config.out_dir / ("report_" + file_stem(algorithm) + ".txt"),
                render_report(algorithm, report, config.hyper.at(algorithm),
                              config.preprocess, config.feature_mode),
                artifacts);
            write_text_file(
                config.out_dir / ("report_" + file_stem(algorithm) + ".csv"),
                render_report_csv(algorithm, report), artifacts);
        }
        write_text_file(config.out_dir / "summary.txt",
                        render_summary(result.results), artifacts);
    });
    return result;
}

} // namespace vfc
