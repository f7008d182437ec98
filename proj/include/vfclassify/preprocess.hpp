#pragma once

#include <vector>

#include "vfclassify/synthgen.hpp"
#include "vfclassify/vfdata.hpp"

namespace vfc {

using FeatureVector = std::vector<double>;

/// Min-max contrast stretch to [0,1]. A constant raster maps to all-0.5.
/// Idempotent on non-constant rasters.
Raster normalize_raster(const Raster& raster);

/// 3x3 median filter with edge replication. Requires width, height >= 3.
Raster median_filter(const Raster& raster);

/// Samples each grid point's center pixel and inverts the render map:
/// s = 40 * (1 - intensity), clamped to [0, 40]. `eye` selects the
/// mirrored mapping for OS records. Throws ValidationError when a point
/// maps outside the raster.
std::vector<double> extract_grid(const Raster& raster, const GridSpec& grid,
                                 Eye eye = Eye::OD);

/// Per-dimension location/scale fitted on training features only.
struct Standardizer {
    std::vector<double> means;
    std::vector<double> sds; // population sd, floored at kSdFloor

    static constexpr double kSdFloor = 1e-6;

    bool operator==(const Standardizer&) const = default;
};

/// Fits per-dimension mean and population standard deviation (divide by
/// n), flooring each sd at Standardizer::kSdFloor. Requires >= 2 vectors
/// of equal dimension.
Standardizer fit_standardizer(const std::vector<FeatureVector>& features);

/// out_j = (f_j - mean_j) / sd_j.
FeatureVector apply_standardizer(const Standardizer& std, const FeatureVector& f);

enum class FeatureMode { Raw, Summary };

/// Featurizes one record. Raw mode returns the sensitivity grid as-is
/// (d = point count). Summary mode returns 4 statistics: mean, population
/// sd, minimum, and the fraction of points more than 5 dB below the
/// expected base(r) = base_peak - base_slope * r.
FeatureVector features_from_record(const VisualFieldRecord& record,
                                   const GridSpec& grid, FeatureMode mode,
                                   double base_peak_db,
                                   double base_slope_db_per_deg);

} // namespace vfc
