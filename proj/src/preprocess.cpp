#include "vfclassify/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "vfclassify/errors.hpp"

namespace vfc {

namespace {

constexpr double kMaxDb = 40.0;

void check_raster(const Raster& raster) {
    if (raster.width == 0 || raster.height == 0 ||
        raster.pixels.size() != raster.width * raster.height)
        throw ValidationError("raster dimensions do not match pixel count");
}

} // namespace

Raster normalize_raster(const Raster& raster) {
    check_raster(raster);
    const auto [min_it, max_it] =
        std::minmax_element(raster.pixels.begin(), raster.pixels.end());
    const double lo = *min_it, hi = *max_it;
    Raster out = raster;
    if (hi > lo) {
        for (double& p : out.pixels) p = (p - lo) / (hi - lo);
    } else {
        std::fill(out.pixels.begin(), out.pixels.end(), 0.5);
    }
    return out;
}

Raster median_filter(const Raster& raster) {
    check_raster(raster);
    if (raster.width < 3 || raster.height < 3)
        throw ValidationError("median filter needs a raster of at least 3x3");

    const auto w = static_cast<std::ptrdiff_t>(raster.width);
    const auto h = static_cast<std::ptrdiff_t>(raster.height);
    Raster out = raster;
    std::array<double, 9> window;
    for (std::ptrdiff_t y = 0; y < h; ++y)
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            std::size_t k = 0;
            for (std::ptrdiff_t dy = -1; dy <= 1; ++dy)
                for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
                    // edge replication
                    const auto sx = std::clamp<std::ptrdiff_t>(x + dx, 0, w - 1);
                    const auto sy = std::clamp<std::ptrdiff_t>(y + dy, 0, h - 1);
                    window[k++] = raster.pixels[static_cast<std::size_t>(sy * w + sx)];
                }
            std::nth_element(window.begin(), window.begin() + 4, window.end());
            out.pixels[static_cast<std::size_t>(y * w + x)] = window[4];
        }
    return out;
}

std::vector<double> extract_grid(const Raster& raster, const GridSpec& grid,
                                 Eye eye) {
    check_raster(raster);
    grid.validate();
    std::vector<double> sensitivities(grid.point_count());
    for (std::size_t ring = 0; ring < grid.eccentricities_deg.size(); ++ring)
        for (std::size_t m = 0; m < grid.meridians_deg.size(); ++m) {
            const auto c =
                grid_point_pixel(grid, ring, m, raster.width, raster.height, eye);
            const auto x = static_cast<std::ptrdiff_t>(std::lround(c.x));
            const auto y = static_cast<std::ptrdiff_t>(std::lround(c.y));
            if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(raster.width) ||
                y >= static_cast<std::ptrdiff_t>(raster.height))
                throw ValidationError(
                    "grid point " + std::to_string(grid.point_index(ring, m)) +
                    " maps outside the raster");
            const double intensity = raster.at(static_cast<std::size_t>(x),
                                               static_cast<std::size_t>(y));
            sensitivities[grid.point_index(ring, m)] =
                std::clamp(kMaxDb * (1.0 - intensity), 0.0, kMaxDb);
        }
    return sensitivities;
}

Standardizer fit_standardizer(const std::vector<FeatureVector>& features) {
    if (features.size() < 2)
        throw ValidationError("standardizer needs at least 2 feature vectors");
    const std::size_t d = features.front().size();
    for (const auto& f : features)
        if (f.size() != d)
            throw ValidationError("feature vectors differ in dimension");

    Standardizer std_;
    std_.means.assign(d, 0.0);
    std_.sds.assign(d, 0.0);
    const double n = static_cast<double>(features.size());
    for (const auto& f : features)
        for (std::size_t j = 0; j < d; ++j) std_.means[j] += f[j];
    for (double& m : std_.means) m /= n;
    for (const auto& f : features)
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = f[j] - std_.means[j];
            std_.sds[j] += diff * diff;
        }
    for (double& s : std_.sds)
        s = std::max(std::sqrt(s / n), Standardizer::kSdFloor);
    return std_;
}

FeatureVector apply_standardizer(const Standardizer& std_, const FeatureVector& f) {
    if (f.size() != std_.means.size() || std_.means.size() != std_.sds.size())
        throw ValidationError("standardizer/feature dimension mismatch");
    FeatureVector out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j)
        out[j] = (f[j] - std_.means[j]) / std_.sds[j];
    return out;
}

FeatureVector features_from_record(const VisualFieldRecord& record,
                                   const GridSpec& grid, FeatureMode mode,
                                   double base_peak_db,
                                   double base_slope_db_per_deg) {
    if (record.sensitivities.size() != grid.point_count())
        throw ValidationError("record/grid point count mismatch");
    if (mode == FeatureMode::Raw) return record.sensitivities;

    const auto& s = record.sensitivities;
    const double n = static_cast<double>(s.size());
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    var /= n;
    const double min_v = *std::min_element(s.begin(), s.end());

    std::size_t depressed = 0;
    for (std::size_t ring = 0; ring < grid.eccentricities_deg.size(); ++ring) {
        const double base =
            base_peak_db - base_slope_db_per_deg * grid.eccentricities_deg[ring];
        for (std::size_t m = 0; m < grid.meridians_deg.size(); ++m)
            if (s[grid.point_index(ring, m)] < base - 5.0) ++depressed;
    }
    return {mean, std::sqrt(var), min_v, static_cast<double>(depressed) / n};
}

} // namespace vfc
