#pragma once

#include <string>
#include <vector>

#include "biphoton/errors.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

// A preset bundles a source model with a grid and splitter that resolve it.
struct Preset {
    std::string name;
    PhaseMatchModel model;
    double grid_lo_nm = 1500.0;
    double grid_hi_nm = 1615.0;
    int grid_points = 513;
    DichroicSplitter dbs;

    SpectralGrid make_grid(int points_override = 0) const {
        return SpectralGrid::from_wavelength_range(
            grid_lo_nm, grid_hi_nm, points_override > 0 ? points_override : grid_points);
    }
};

namespace presets {

// Frequency non-degenerate type-II source around 1537/1575 nm, pumped near
// 778 nm, split at 1560 nm. Channels are mirror images, so the overlap is
// perfect by construction.
inline Preset telecom() {
    Preset p;
    p.name = "telecom";
    p.model.hv_signal_nm = 1537.0;
    p.model.hv_idler_nm = 1575.0;
    p.model.vh_signal_nm = 1537.0;
    p.model.vh_idler_nm = 1575.0;
    p.model.hv_width_nm = 5.0;
    p.model.vh_width_nm = 5.0;
    p.model.pump_center_nm = 777.9;
    p.model.pump_linewidth_nm = 0.25;
    p.dbs.cut_nm = 1560.0;
    p.dbs.guard_nm = 5.0;
    p.dbs.leakage_threshold = 0.05;
    return p;
}

// Same band, but with sheared and slightly offset channels: the overlap is
// imperfect and peaks at a pump wavelength away from the band centre.
inline Preset sheared() {
    Preset p = telecom();
    p.name = "sheared";
    p.model.vh_signal_nm = 1536.2;
    p.model.vh_idler_nm = 1575.8;
    p.model.hv_shear = 0.35;
    p.model.vh_shear = -0.35;
    return p;
}

// Both channels centred exactly on the splitter cut. The splitter cannot
// separate the pair; this preset exists to exercise the leakage audit.
inline Preset degenerate() {
    Preset p;
    p.name = "degenerate";
    p.model.hv_signal_nm = 1560.0;
    p.model.hv_idler_nm = 1560.0;
    p.model.vh_signal_nm = 1560.0;
    p.model.vh_idler_nm = 1560.0;
    p.model.hv_width_nm = 5.0;
    p.model.vh_width_nm = 5.0;
    p.model.pump_center_nm = 780.0;
    p.model.pump_linewidth_nm = 0.1;
    p.grid_lo_nm = 1515.0;
    p.grid_hi_nm = 1605.0;
    p.grid_points = 1025;
    p.dbs.cut_nm = 1560.0;
    p.dbs.guard_nm = 0.0;
    p.dbs.leakage_threshold = 0.05;
    return p;
}

inline std::vector<std::string> names() {
    return {"telecom", "symmetric", "sheared", "degenerate"};
}

inline Preset get(const std::string& name) {
    if (name == "telecom") return telecom();
    if (name == "symmetric") return telecom(); // the telecom channels are mirror images
    if (name == "sheared") return sheared();
    if (name == "degenerate") return degenerate();
    throw config_error("unknown preset '" + name + "'; available: telecom, symmetric, "
                       "sheared, degenerate");
}

} // namespace presets
} // namespace biphoton
