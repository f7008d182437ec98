#include "vfclassify/vfdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "vfclassify/errors.hpp"
#include "vfclassify/prng.hpp"
#include "text_util.hpp"

namespace vfc {

namespace {

constexpr double kMinDb = 0.0;
constexpr double kMaxDb = 40.0;

std::string row_msg(const std::filesystem::path& path, std::size_t row,
                    const std::string& what) {
    std::ostringstream oss;
    oss << path.string() << ", row " << row << ": " << what;
    return oss.str();
}

// round(x * f) / f with round-half-away-from-zero, the split rounding rule.
std::int64_t round_half_away(double x) {
    return static_cast<std::int64_t>(std::llround(x));
}

} // namespace

int to_int(Label label) { return label == Label::Glaucoma ? 1 : 0; }

Label label_from_int(int value) {
    if (value == 0) return Label::Other;
    if (value == 1) return Label::Glaucoma;
    throw ValidationError("label must be 0 or 1, got " + std::to_string(value));
}

std::string to_string(Label label) { return label == Label::Glaucoma ? "1" : "0"; }

std::string to_string(Eye eye) { return eye == Eye::OD ? "OD" : "OS"; }

Label label_from_string(const std::string& text) {
    if (text == "0") return Label::Other;
    if (text == "1") return Label::Glaucoma;
    throw ValidationError("label must be 0 or 1, got '" + text + "'");
}

Eye eye_from_string(const std::string& text) {
    if (text == "OD") return Eye::OD;
    if (text == "OS") return Eye::OS;
    throw ValidationError("eye must be OD or OS, got '" + text + "'");
}

void GridSpec::validate() const {
    if (point_count() < 4)
        throw ValidationError("grid must have at least 4 points, has " +
                              std::to_string(point_count()));
    for (std::size_t i = 0; i < eccentricities_deg.size(); ++i) {
        const double e = eccentricities_deg[i];
        if (!(e > 0.0) || !std::isfinite(e))
            throw ValidationError("grid eccentricities must be positive");
        if (i > 0 && !(e > eccentricities_deg[i - 1]))
            throw ValidationError("grid eccentricities must be ascending");
    }
    for (std::size_t i = 0; i < meridians_deg.size(); ++i) {
        const double m = meridians_deg[i];
        if (!std::isfinite(m) || m < 0.0 || m >= 360.0)
            throw ValidationError("grid meridians must lie in [0, 360)");
        if (i > 0 && !(m > meridians_deg[i - 1]))
            throw ValidationError("grid meridians must be ascending and distinct");
    }
}

GridSpec default_grid() {
    GridSpec grid;
    grid.eccentricities_deg = {3, 9, 15, 21, 27, 30};
    for (int a = 0; a < 360; a += 30) grid.meridians_deg.push_back(a);
    return grid;
}

void Dataset::validate() const {
    grid.validate();
    std::unordered_set<std::string> ids;
    for (const auto& rec : records) {
        if (rec.record_id.empty())
            throw ValidationError("record_id must be nonempty");
        if (!ids.insert(rec.record_id).second)
            throw ValidationError("duplicate record_id '" + rec.record_id + "'");
        if (rec.sensitivities.size() != grid.point_count())
            throw ValidationError("record '" + rec.record_id + "' has " +
                                  std::to_string(rec.sensitivities.size()) +
                                  " sensitivities, grid has " +
                                  std::to_string(grid.point_count()) + " points");
        for (double s : rec.sensitivities)
            if (!std::isfinite(s) || s < kMinDb || s > kMaxDb)
                throw ValidationError("record '" + rec.record_id +
                                      "' has sensitivity outside [0, 40]");
    }
}

std::filesystem::path grid_sidecar_path(const std::filesystem::path& path) {
    std::filesystem::path sidecar = path;
    sidecar.replace_extension(".grid");
    return sidecar;
}

namespace {

GridSpec load_grid_sidecar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open grid sidecar " + path.string());
    std::string ecc_line, mer_line;
    if (!std::getline(in, ecc_line) || !std::getline(in, mer_line))
        throw ValidationError("grid sidecar " + path.string() +
                              " must hold two lines: eccentricities, meridians");
    GridSpec grid;
    for (const auto& tok : detail::split(ecc_line, ','))
        grid.eccentricities_deg.push_back(
            detail::parse_double(tok, path.string() + " eccentricities"));
    for (const auto& tok : detail::split(mer_line, ','))
        grid.meridians_deg.push_back(
            detail::parse_double(tok, path.string() + " meridians"));
    grid.validate();
    return grid;
}

} // namespace

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset " + path.string());

    Dataset dataset;
    dataset.grid = load_grid_sidecar(grid_sidecar_path(path));
    const std::size_t points = dataset.grid.point_count();

    std::string expected_header = "record_id,eye,label";
    for (std::size_t i = 0; i < points; ++i)
        expected_header += ",s" + std::to_string(i);

    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line))
        throw ValidationError(row_msg(path, 1, "missing header"));
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw ValidationError(row_msg(path, row, "malformed header, expected '" +
                                                     expected_header + "'"));

    std::unordered_set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = detail::split(line, ',');
        if (cells.size() != 3 + points)
            throw ValidationError(row_msg(
                path, row,
                "expected " + std::to_string(3 + points) + " columns, got " +
                    std::to_string(cells.size())));
        VisualFieldRecord rec;
        rec.record_id = cells[0];
        if (rec.record_id.empty())
            throw ValidationError(row_msg(path, row, "empty record_id"));
        if (!seen_ids.insert(rec.record_id).second)
            throw ValidationError(
                row_msg(path, row, "duplicate record_id '" + rec.record_id + "'"));
        try {
            rec.eye = eye_from_string(cells[1]);
            rec.label = label_from_string(cells[2]);
        } catch (const ValidationError& e) {
            throw ValidationError(row_msg(path, row, e.what()));
        }
        rec.sensitivities.reserve(points);
        for (std::size_t i = 0; i < points; ++i) {
            double s;
            try {
                s = detail::parse_double(cells[3 + i], "s" + std::to_string(i));
            } catch (const ValidationError& e) {
                throw ValidationError(row_msg(path, row, e.what()));
            }
            if (!std::isfinite(s) || s < kMinDb || s > kMaxDb)
                throw ValidationError(row_msg(
                    path, row,
                    "sensitivity s" + std::to_string(i) + " = " + cells[3 + i] +
                        " outside [0, 40]"));
            rec.sensitivities.push_back(s);
        }
        dataset.records.push_back(std::move(rec));
    }
    dataset.validate();
    return dataset;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    dataset.validate();
    for (const auto& rec : dataset.records)
        if (rec.record_id.find_first_of(",\n\r") != std::string::npos)
            throw ValidationError("record_id '" + rec.record_id +
                                  "' contains CSV delimiter characters");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset " + path.string());

    out << "record_id,eye,label";
    for (std::size_t i = 0; i < dataset.grid.point_count(); ++i) out << ",s" << i;
    out << '\n';
    for (const auto& rec : dataset.records) {
        out << rec.record_id << ',' << to_string(rec.eye) << ','
            << to_string(rec.label);
        for (double s : rec.sensitivities) out << ',' << detail::format_fixed3(s);
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());

    std::ofstream grid_out(grid_sidecar_path(path), std::ios::binary);
    if (!grid_out)
        throw IoError("cannot write grid sidecar " +
                      grid_sidecar_path(path).string());
    for (std::size_t i = 0; i < dataset.grid.eccentricities_deg.size(); ++i)
        grid_out << (i ? "," : "")
                 << detail::format_double(dataset.grid.eccentricities_deg[i]);
    grid_out << '\n';
    for (std::size_t i = 0; i < dataset.grid.meridians_deg.size(); ++i)
        grid_out << (i ? "," : "")
                 << detail::format_double(dataset.grid.meridians_deg[i]);
    grid_out << '\n';
    if (!grid_out)
        throw IoError("write failed for " + grid_sidecar_path(path).string());
}

SplitResult stratified_split(const Dataset& dataset, double test_fraction,
                             std::uint64_t seed) {
    dataset.validate();
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
        throw ValidationError("test_fraction must lie in (0, 1)");

    std::array<std::vector<std::size_t>, 2> by_label;
    for (std::size_t i = 0; i < dataset.records.size(); ++i)
        by_label[to_int(dataset.records[i].label)].push_back(i);
    for (int c = 0; c < 2; ++c)
        if (by_label[c].empty())
            throw ValidationError("label " + std::to_string(c) +
                                  " is absent from the dataset");

    // One stream drives both labels; label 0 is shuffled first so the
    // selection is a fixed function of (seed, record order).
    SplitMix64 rng(seed);
    std::vector<bool> in_test(dataset.records.size(), false);
    for (int c = 0; c < 2; ++c) {
        auto idx = by_label[c];
        const auto n = static_cast<std::int64_t>(idx.size());
        std::int64_t take = round_half_away(test_fraction * static_cast<double>(n));
        take = std::max<std::int64_t>(take, 1);
        if (take >= n)
            throw ValidationError(
                "test_fraction " + std::to_string(test_fraction) +
                " leaves no training records for label " + std::to_string(c));
        for (std::size_t i = idx.size() - 1; i > 0; --i) {
            const auto j = rng.next_below(i + 1);
            std::swap(idx[i], idx[j]);
        }
        for (std::int64_t k = 0; k < take; ++k) in_test[idx[k]] = true;
    }

    SplitResult result;
    result.train.grid = dataset.grid;
    result.test.grid = dataset.grid;
    for (std::size_t i = 0; i < dataset.records.size(); ++i)
        (in_test[i] ? result.test : result.train)
            .records.push_back(dataset.records[i]);
    return result;
}

} // namespace vfc
