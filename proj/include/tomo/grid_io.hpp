#pragma once

#include "tomo/radon.hpp"
#include "tomo/states.hpp"

#include <json.hpp>

#include <string>

namespace tomo {

/// 17 significant digits: round-trip exact for doubles.
std::string format_double(double v);

/// Write-temp-then-rename; the body never carries timestamps.
void atomic_write(const std::string& path, const std::string& content);

/// Sidecar metadata (<path>.meta.json) carrying the timestamp and anything
/// else excluded from the deterministic body.
void write_sidecar_meta(const std::string& path, const nlohmann::json& extra);

// ---------------------------------------------------------------------------
// TomogramGrid file: one-line JSON header, then CSV rows. Single-mode files
// use columns X,mu,nu,W; multimode files prepend a mode column and the
// header carries a `modes` block.

void write_tomogram_grid(const std::string& path, const TomogramGrid& grid,
                         const nlohmann::json& config);
TomogramGrid read_tomogram_grid(const std::string& path);

// ---------------------------------------------------------------------------
// GridDensity file: one-line JSON header {extents, counts, units}, then CSV
// rows xi,eta,rho. Loading rejects raw mass more than 1% away from 1.

void write_grid_density(const std::string& path, const GridDensity& density,
                        const nlohmann::json& config);
GridDensity read_grid_density(const std::string& path);

/// Parsed header of either file kind (for provenance inspection).
nlohmann::json read_header(const std::string& path);

}  // namespace tomo
