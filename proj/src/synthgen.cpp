#include "vfclassify/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "vfclassify/errors.hpp"
#include "vfclassify/prng.hpp"

namespace vfc {

namespace {

constexpr double kMaxDb = 40.0;

// Depth ranges (dB) of the "other diseases" patterns. These are free
// knobs of the synthetic cohort, not measured values; they are pinned
// here so datasets are stable across versions.
constexpr double kDiffuseDepthMin = 3.0, kDiffuseDepthMax = 10.0;
constexpr double kCentralDepthMin = 8.0, kCentralDepthMax = 20.0;
constexpr double kCentralMaxEcc = 9.0;
constexpr double kHemiDepthMin = 5.0, kHemiDepthMax = 12.0;

// Arcuate geometry: the band lives at these eccentricities, the nasal
// step sits around the 180-degree (nasal) axis further out at half depth.
constexpr double kArcuateEccMin = 9.0, kArcuateEccMax = 21.0;
constexpr double kNasalAxisDeg = 180.0, kNasalHalfWidthDeg = 30.0;
constexpr double kNasalStepMinEcc = 15.0, kNasalStepDepthFactor = 0.5;

double clamp_db(double s) { return std::clamp(s, 0.0, kMaxDb); }

// 3-decimal quantization keeps the CSV round-trip lossless.
double quantize_db(double s) { return std::round(s * 1000.0) / 1000.0; }

bool is_superior(double angle_deg) { return angle_deg > 0.0 && angle_deg < 180.0; }
bool is_inferior(double angle_deg) { return angle_deg > 180.0 && angle_deg < 360.0; }

std::vector<std::size_t> hemifield_meridians(const GridSpec& grid, bool superior) {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < grid.meridians_deg.size(); ++m) {
        const double a = grid.meridians_deg[m];
        if (superior ? is_superior(a) : is_inferior(a)) out.push_back(m);
    }
    return out;
}

std::string padded_id(char prefix, std::size_t index) {
    std::ostringstream oss;
    oss << prefix;
    std::string digits = std::to_string(index);
    for (std::size_t i = digits.size(); i < 4; ++i) oss << '0';
    oss << digits;
    return oss.str();
}

// Per-point depression of one glaucoma record. Interior band meridians
// take the full arcuate depth; the two edge meridians take the
// raised-cosine midpoint 0.5 (bands of width < 3 skip the taper so the
// full configured depth always lands somewhere).
struct GlaucomaDefect {
    double depth = 0.0;
    bool superior = true;
    std::vector<std::size_t> band; // meridian indices, ascending angle

    double depression_at(const GridSpec& grid, std::size_t ring,
                         std::size_t meridian) const {
        const double ecc = grid.eccentricities_deg[ring];
        const double angle = grid.meridians_deg[meridian];
        double total = 0.0;
        if (ecc >= kArcuateEccMin && ecc <= kArcuateEccMax) {
            auto it = std::find(band.begin(), band.end(), meridian);
            if (it != band.end()) {
                const auto j = static_cast<std::size_t>(it - band.begin());
                const bool edge =
                    band.size() >= 3 && (j == 0 || j + 1 == band.size());
                total += depth * (edge ? 0.5 : 1.0);
            }
        }
        const double lo = superior ? kNasalAxisDeg - kNasalHalfWidthDeg : kNasalAxisDeg;
        const double hi = superior ? kNasalAxisDeg : kNasalAxisDeg + kNasalHalfWidthDeg;
        if (ecc >= kNasalStepMinEcc && angle >= lo && angle <= hi)
            total += depth * kNasalStepDepthFactor;
        return total;
    }
};

GlaucomaDefect draw_glaucoma_defect(const GenConfig& config, const GridSpec& grid,
                                    SplitMix64& rng) {
    GlaucomaDefect defect;
    defect.depth =
        rng.next_in(config.glaucoma_depth_min_db, config.glaucoma_depth_max_db);
    defect.superior = rng.next_unit() < 0.5;
    auto candidates = hemifield_meridians(grid, defect.superior);
    if (candidates.empty())
        for (std::size_t m = 0; m < grid.meridians_deg.size(); ++m)
            candidates.push_back(m);
    std::size_t width = 3 + static_cast<std::size_t>(rng.next_below(3)); // 3..5
    width = std::min(width, candidates.size());
    const std::size_t start =
        width < candidates.size()
            ? static_cast<std::size_t>(rng.next_below(candidates.size() - width + 1))
            : 0;
    defect.band.assign(candidates.begin() + start,
                       candidates.begin() + start + width);
    return defect;
}

enum class OtherPattern { Diffuse, Central, Hemifield };

struct OtherDefect {
    OtherPattern pattern = OtherPattern::Diffuse;
    double depth = 0.0;
    bool superior = false; // hemifield only

    double depression_at(const GridSpec& grid, std::size_t ring,
                         std::size_t meridian) const {
        const double ecc = grid.eccentricities_deg[ring];
        const double angle = grid.meridians_deg[meridian];
        switch (pattern) {
            case OtherPattern::Diffuse:
                return depth;
            case OtherPattern::Central:
                return ecc <= kCentralMaxEcc ? depth : 0.0;
            case OtherPattern::Hemifield:
                return (superior ? is_superior(angle) : is_inferior(angle)) ? depth
                                                                            : 0.0;
        }
        return 0.0;
    }
};

OtherDefect draw_other_defect(const GenConfig& config, SplitMix64& rng) {
    OtherDefect defect;
    const double u = rng.next_unit();
    const auto& w = config.other_pattern_weights;
    if (u < w[0])
        defect.pattern = OtherPattern::Diffuse;
    else if (u < w[0] + w[1])
        defect.pattern = OtherPattern::Central;
    else
        defect.pattern = OtherPattern::Hemifield;
    switch (defect.pattern) {
        case OtherPattern::Diffuse:
            defect.depth = rng.next_in(kDiffuseDepthMin, kDiffuseDepthMax);
            break;
        case OtherPattern::Central:
            defect.depth = rng.next_in(kCentralDepthMin, kCentralDepthMax);
            break;
        case OtherPattern::Hemifield:
            defect.depth = rng.next_in(kHemiDepthMin, kHemiDepthMax);
            defect.superior = rng.next_unit() < 0.5;
            break;
    }
    return defect;
}

} // namespace

void GenConfig::validate() const {
    grid.validate();
    if (!(noise_sd_db >= 0.0) || !std::isfinite(noise_sd_db))
        throw ValidationError("noise_sd_db must be >= 0");
    if (!(glaucoma_depth_min_db >= 0.0) || !(glaucoma_depth_max_db <= kMaxDb) ||
        !(glaucoma_depth_min_db <= glaucoma_depth_max_db))
        throw ValidationError("glaucoma depth range must lie inside [0, 40]");
    double sum = 0.0;
    for (double w : other_pattern_weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ValidationError("other_pattern_weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("other_pattern_weights must sum to 1");
    if (!std::isfinite(base_peak_db) || !std::isfinite(base_slope_db_per_deg))
        throw ValidationError("base field parameters must be finite");
}

Dataset generate_dataset(const GenConfig& config, std::uint64_t seed) {
    config.validate();

    Dataset dataset;
    dataset.grid = config.grid;
    const std::size_t total = config.n_glaucoma + config.n_other;
    dataset.records.reserve(total);

    const auto& grid = config.grid;
    for (std::size_t i = 0; i < total; ++i) {
        // Per-record stream: parallel generation would derive the very
        // same sequence, so serial output is the canonical one.
        SplitMix64 rng(seed ^ static_cast<std::uint64_t>(i));
        const bool glaucoma = i < config.n_glaucoma;

        VisualFieldRecord rec;
        rec.record_id = glaucoma ? padded_id('g', i)
                                 : padded_id('o', i - config.n_glaucoma);
        rec.eye = (i % 2 == 0) ? Eye::OD : Eye::OS;
        rec.label = glaucoma ? Label::Glaucoma : Label::Other;
        rec.sensitivities.resize(grid.point_count());

        GlaucomaDefect gdef;
        OtherDefect odef;
        if (glaucoma)
            gdef = draw_glaucoma_defect(config, grid, rng);
        else
            odef = draw_other_defect(config, rng);

        for (std::size_t ring = 0; ring < grid.eccentricities_deg.size(); ++ring) {
            const double base =
                config.base_peak_db -
                config.base_slope_db_per_deg * grid.eccentricities_deg[ring];
            for (std::size_t m = 0; m < grid.meridians_deg.size(); ++m) {
                const double depression = glaucoma
                                              ? gdef.depression_at(grid, ring, m)
                                              : odef.depression_at(grid, ring, m);
                const double noise = config.noise_sd_db * rng.next_gaussian();
                rec.sensitivities[grid.point_index(ring, m)] =
                    quantize_db(clamp_db(base - depression + noise));
            }
        }
        dataset.records.push_back(std::move(rec));
    }
    dataset.validate();
    return dataset;
}

PixelPoint grid_point_pixel(const GridSpec& grid, std::size_t ring,
                            std::size_t meridian, std::size_t width,
                            std::size_t height, Eye eye) {
    const double max_ecc = grid.eccentricities_deg.back();
    const double px_per_deg =
        static_cast<double>(std::min(width, height)) / (2.0 * (max_ecc + 3.0));
    const double cx = static_cast<double>(width) / 2.0;
    const double cy = static_cast<double>(height) / 2.0;
    const double ecc = grid.eccentricities_deg[ring];
    const double rad = grid.meridians_deg[meridian] * std::numbers::pi / 180.0;
    double dx = ecc * std::cos(rad) * px_per_deg;
    const double dy = -ecc * std::sin(rad) * px_per_deg; // screen y points down
    if (eye == Eye::OS) dx = -dx; // nasal/temporal flip
    return {cx + dx, cy + dy};
}

Raster render_raster(const VisualFieldRecord& record, const GridSpec& grid,
                     std::size_t width, std::size_t height) {
    grid.validate();
    if (width < 64 || height < 64)
        throw ValidationError("raster must be at least 64x64");
    if (record.sensitivities.size() != grid.point_count())
        throw ValidationError("record/grid point count mismatch");

    const double disk_r = static_cast<double>(std::max<std::size_t>(2, width / 64));

    std::vector<PixelPoint> centers(grid.point_count());
    for (std::size_t ring = 0; ring < grid.eccentricities_deg.size(); ++ring)
        for (std::size_t m = 0; m < grid.meridians_deg.size(); ++m)
            centers[grid.point_index(ring, m)] =
                grid_point_pixel(grid, ring, m, width, height, record.eye);

    for (std::size_t p = 0; p < centers.size(); ++p) {
        const auto& c = centers[p];
        if (c.x - disk_r < 0.0 || c.x + disk_r > static_cast<double>(width - 1) ||
            c.y - disk_r < 0.0 || c.y + disk_r > static_cast<double>(height - 1))
            throw ValidationError("grid point " + std::to_string(p) +
                                  " maps outside the raster");
    }
    // A disk may not cover another point's center pixel, or extraction
    // would read the wrong value. +1 covers center-pixel rounding.
    for (std::size_t a = 0; a < centers.size(); ++a)
        for (std::size_t b = a + 1; b < centers.size(); ++b) {
            const double dx = centers[a].x - centers[b].x;
            const double dy = centers[a].y - centers[b].y;
            if (std::sqrt(dx * dx + dy * dy) <= disk_r + 1.0)
                throw ValidationError(
                    "raster too small: disks of grid points " + std::to_string(a) +
                    " and " + std::to_string(b) + " overlap");
        }

    Raster raster;
    raster.width = width;
    raster.height = height;
    raster.pixels.assign(width * height, 1.0);
    for (std::size_t p = 0; p < centers.size(); ++p) {
        const double intensity = 1.0 - record.sensitivities[p] / kMaxDb;
        const auto& c = centers[p];
        const auto x0 = static_cast<std::size_t>(std::max(0.0, std::floor(c.x - disk_r)));
        const auto x1 = static_cast<std::size_t>(std::ceil(c.x + disk_r));
        const auto y0 = static_cast<std::size_t>(std::max(0.0, std::floor(c.y - disk_r)));
        const auto y1 = static_cast<std::size_t>(std::ceil(c.y + disk_r));
        for (std::size_t y = y0; y <= y1 && y < height; ++y)
            for (std::size_t x = x0; x <= x1 && x < width; ++x) {
                const double ddx = static_cast<double>(x) - c.x;
                const double ddy = static_cast<double>(y) - c.y;
                if (ddx * ddx + ddy * ddy <= disk_r * disk_r)
                    raster.at(x, y) = intensity;
            }
    }
    return raster;
}

void write_pgm(const Raster& raster, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write PGM " + path.string());
    out << "P5\n" << raster.width << ' ' << raster.height << "\n255\n";
    for (double p : raster.pixels) {
        const double v = std::clamp(p, 0.0, 1.0) * 255.0;
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v))));
    }
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace vfc
