#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "vfclassify/vfdata.hpp"

namespace vfc {

/// Parameters of the synthetic cohort. The clean field of every record is
/// base(r) = base_peak_db - base_slope_db_per_deg * r at eccentricity r,
/// modified by a per-record defect pattern and Gaussian noise.
struct GenConfig {
    std::size_t n_glaucoma = 0;
    std::size_t n_other = 0;
    GridSpec grid = default_grid();
    double noise_sd_db = 1.5;
    double glaucoma_depth_min_db = 10.0;
    double glaucoma_depth_max_db = 25.0;
    // Pattern mix for the "other diseases" class: {diffuse, central, hemifield}.
    std::array<double, 3> other_pattern_weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    double base_peak_db = 33.0;
    double base_slope_db_per_deg = 0.25;

    /// Throws ValidationError on out-of-range values or weights that do
    /// not sum to 1 within 1e-9.
    void validate() const;
};

/// Grayscale image, row-major, intensities in [0,1].
struct Raster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;

    double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
    double& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }

    bool operator==(const Raster&) const = default;
};

/// Builds the synthetic dataset: n_glaucoma records labeled 1 followed by
/// n_other labeled 0, eyes alternating OD/OS in output order. Record i
/// draws from its own stream splitmix64(seed XOR i), so serial and
/// parallel generation agree. Glaucoma records carry an arcuate band
/// (3-5 contiguous meridians of one hemifield, eccentricities 9-21
/// degrees, raised-cosine edge taper) plus a nasal step; other records
/// carry one of diffuse / central / hemifield depression, picked by the
/// configured weights. Sensitivities are clamped to [0, 40] and quantized
/// to 3 decimals so the CSV round-trip is exact.
Dataset generate_dataset(const GenConfig& config, std::uint64_t seed);

/// Renders a record the way a photographed printout stands in for one:
/// white background, one filled disk per grid point with intensity
/// 1 - s/40 (40 dB = black, 0 dB = blends into the background). Disk
/// radius is max(2, width/64) px; 1 degree maps to
/// min(width,height) / (2 * (max eccentricity + 3)) px around the image
/// center; OS records mirror the x axis. Throws ValidationError when a
/// disk leaves the raster or two grid points land close enough that one
/// covers the other's center pixel (the raster is too small).
Raster render_raster(const VisualFieldRecord& record, const GridSpec& grid,
                     std::size_t width, std::size_t height);

/// Pixel center of a grid point under the render_raster mapping.
struct PixelPoint {
    double x = 0;
    double y = 0;
};
PixelPoint grid_point_pixel(const GridSpec& grid, std::size_t ring,
                            std::size_t meridian, std::size_t width,
                            std::size_t height, Eye eye);

/// Binary PGM (P5, maxval 255) dump for visual inspection.
void write_pgm(const Raster& raster, const std::filesystem::path& path);

} // namespace vfc
