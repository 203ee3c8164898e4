#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ktuple/errors.hpp"

namespace ktuple {

// Rectangular grid of scalars; cells are row-major with one row per y value.
struct HeatmapGrid {
    std::vector<double> x, y;
    std::vector<double> cells;
    double vmin = 0.0, vmax = 0.0;

    [[nodiscard]] double at(std::size_t iy, std::size_t ix) const { return cells[iy * x.size() + ix]; }

    void validate() const {
        if (cells.size() != x.size() * y.size()) throw ContractViolation("HeatmapGrid: not rectangular");
        for (double v : cells)
            if (!std::isfinite(v)) throw ContractViolation("HeatmapGrid: non-finite cell");
        if (vmin > vmax) throw ContractViolation("HeatmapGrid: empty value range");
    }

    // Value range taken from the data.
    void auto_range() {
        if (cells.empty()) return;
        const auto [lo, hi] = std::minmax_element(cells.begin(), cells.end());
        vmin = *lo;
        vmax = *hi;
    }
};

}  // namespace ktuple
