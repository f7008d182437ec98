#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vfc {

/// Diagnosis label. Integer codes are fixed: other diseases = 0,
/// glaucoma = 1 (glaucoma is the positive class).
enum class Label : std::uint8_t { Other = 0, Glaucoma = 1 };

/// Laterality: OD = right eye, OS = left eye.
enum class Eye : std::uint8_t { OD, OS };

int to_int(Label label);
Label label_from_int(int value);
std::string to_string(Label label);
std::string to_string(Eye eye);
Label label_from_string(const std::string& text);
Eye eye_from_string(const std::string& text);

/// Polar sampling layout of a perimetry grid: every (eccentricity,
/// meridian) pair is one test point. Point index = ring * n_meridians +
/// meridian, rings ordered from the innermost eccentricity outward.
struct GridSpec {
    std::vector<double> eccentricities_deg; // ascending ring radii, > 0
    std::vector<double> meridians_deg;      // ascending angles in [0, 360)

    std::size_t point_count() const {
        return eccentricities_deg.size() * meridians_deg.size();
    }
    std::size_t point_index(std::size_t ring, std::size_t meridian) const {
        return ring * meridians_deg.size() + meridian;
    }

    /// Throws ValidationError unless point_count >= 4, all radii positive
    /// and ascending, all angles distinct, ascending and inside [0, 360).
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

/// Standard 6-ring x 12-meridian layout (72 points): eccentricities
/// {3, 9, 15, 21, 27, 30} degrees, meridians every 30 degrees.
GridSpec default_grid();

/// One eye's measured field: a sensitivity in dB per grid point.
/// Sensitivities live in [0, 40] dB; higher means better vision.
struct VisualFieldRecord {
    std::string record_id;
    Eye eye = Eye::OD;
    Label label = Label::Other;
    std::vector<double> sensitivities;

    bool operator==(const VisualFieldRecord&) const = default;
};

/// A labeled collection of records sharing one grid.
struct Dataset {
    GridSpec grid;
    std::vector<VisualFieldRecord> records;

    /// Throws ValidationError unless the grid is valid, every record has
    /// point_count sensitivities inside [0, 40], and record_ids are unique.
    void validate() const;

    bool operator==(const Dataset&) const = default;
};

/// Reads a dataset from CSV plus its grid sidecar (see save_dataset).
/// Malformed content raises ValidationError naming the offending row;
/// missing files raise IoError.
Dataset load_dataset(const std::filesystem::path& path);

/// Writes `record_id,eye,label,s0,...` CSV (UTF-8, LF, '.' decimal
/// separator, sensitivities with at most 3 fractional digits) plus a
/// sidecar `<stem>.grid` holding the eccentricity and meridian lists.
/// load_dataset(save_dataset(d)) == d whenever every sensitivity carries
/// at most 3 fractional digits, which holds for all generated data.
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Sidecar path for a dataset path: extension replaced by ".grid".
std::filesystem::path grid_sidecar_path(const std::filesystem::path& path);

/// Deterministic stratified partition. Per label c the test side receives
/// round-half-away-from-zero(test_fraction * n_c) records, never fewer
/// than 1 and never all of them; both halves keep the dataset's original
/// relative order. Selection depends only on (seed, record order).
struct SplitResult {
    Dataset train;
    Dataset test;
};
SplitResult stratified_split(const Dataset& dataset, double test_fraction,
                             std::uint64_t seed);

} // namespace vfc
