#include "cylflow/grid.hpp"

#include <cmath>
#include <numbers>

namespace cylflow {

double Grid::volume() const { return 2.0 * std::numbers::pi * a * R * R; }

Grid make_grid(double R, double a, int nr, int nz) {
    if (!(R > 0.0)) throw ConfigError("make_grid: R must be positive");
    if (!(a > 0.0)) throw ConfigError("make_grid: a must be positive");
    if (nr < 4) throw ConfigError("make_grid: Nr must be at least 4");
    if (nz < 4) throw ConfigError("make_grid: Nz must be at least 4");

    Grid g;
    g.R = R;
    g.a = a;
    g.nr = nr;
    g.nz = nz;
    g.dr = R / nr;
    g.dz = 2.0 * a / nz;
    g.r.resize(nr);
    g.z.resize(nz);
    g.wr.resize(nr);
    for (int i = 0; i < nr; ++i) {
        g.r[i] = (i + 0.5) * g.dr;
        g.wr[i] = 2.0 * std::numbers::pi * g.r[i] * g.dr;
    }
    for (int j = 0; j < nz; ++j) g.z[j] = -a + (j + 0.5) * g.dz;
    return g;
}

double integrate(const std::vector<double>& field, const Grid& g) {
    if (static_cast<int>(field.size()) != g.cells())
        throw DimensionError("integrate: field size does not match grid");
    double total = 0.0;
    for (int j = 0; j < g.nz; ++j) {
        double row = 0.0;
        for (int i = 0; i < g.nr; ++i) row += field[g.idx(i, j)] * g.wr[i];
        total += row * g.dz;
    }
    return total;
}

double integrate_wall(const std::vector<double>& trace, const Grid& g) {
    if (static_cast<int>(trace.size()) != g.nz)
        throw DimensionError("integrate_wall: trace size does not match Nz");
    double s = 0.0;
    for (double v : trace) s += v;
    return 2.0 * std::numbers::pi * g.R * s * g.dz;
}

double integrate_lids(const std::vector<double>& lo,
                      const std::vector<double>& hi, const Grid& g) {
    if (static_cast<int>(lo.size()) != g.nr || static_cast<int>(hi.size()) != g.nr)
        throw DimensionError("integrate_lids: trace size does not match Nr");
    double s = 0.0;
    for (int i = 0; i < g.nr; ++i) s += (lo[i] + hi[i]) * g.wr[i];
    return s;
}

}  // namespace cylflow
