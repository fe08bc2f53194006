#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "contour.hpp"
#include "field.hpp"
#include "kernels.hpp"

namespace litho {

namespace fs = std::filesystem;

std::string sha1_hex(std::string_view data);
// Same digest git assigns to a blob with this content.
std::string git_blob_hash(std::string_view content);

// IoError on failure.
std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view content);

// 16-bit binary PGM, values mapped linearly from [min, max]; the sidecar
// <path>.json records min, max, grid and `extra` (e.g. the config hash).
void write_pgm16(const fs::path& path, const ScalarField& f, const nlohmann::json& extra = {});
// Inverse of write_pgm16; needs the sidecar.
ScalarField read_pgm16(const fs::path& path);

// PGM with maxval 1.
void write_pgm_bitmap(const fs::path& path, const BinaryPattern& p, const nlohmann::json& extra = {});

// Loops in model coordinates plus the grid.
nlohmann::json contour_json(const BinaryPattern& p);

// Header line `nx,ny,spacing,origin_x,origin_y`, its values, then ny rows of nx samples.
std::string field_csv(const ScalarField& f);

// Mask in [0, 1] on `grid` from PGM (P2/P5), PNG (grey or colour, luminance)
// or polygon JSON {"polygons": [[[x, y], ...], ...]} rasterized at cell
// centres with the even-odd rule. Image sizes must equal the grid.
ScalarField read_mask(const fs::path& path, const GridSpec& grid);

// Kernel cache: <dir>/kernel.json (parameters, achieved deviation, key) and
// <dir>/kernel_profile.csv (r, T(r) in natural units).
std::string kernel_cache_key(double delta_tilde, const PsfSearchBudget& budget);
void write_kernel_cache(const fs::path& dir, const SmoothedPsf& psf, const PsfSearchBudget& budget);
// Empty optional when the cache is absent or was built for other parameters.
std::optional<SmoothedPsf> read_kernel_cache(const fs::path& dir, double delta_tilde, const PsfSearchBudget& budget);

}  // namespace litho
