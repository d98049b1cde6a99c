#pragma once

#include <vector>

#include "cylflow/errors.hpp"

namespace cylflow {

/// Cell-centered discretization of the half-section Q = (0,R) x (-a,a) of a
/// finite cylinder. Samples live at r_i = (i+1/2)dr, z_j = -a+(j+1/2)dz, so
/// the coordinate singularity r = 0 never carries a sample. Volume quadrature
/// realizes the measure 2*pi*r dr dz.
struct Grid {
    double R = 1.0;   // cylinder radius
    double a = 1.0;   // half-height
    int nr = 0;
    int nz = 0;
    double dr = 0.0;
    double dz = 0.0;
    std::vector<double> r;   // cell-center radii, size nr
    std::vector<double> z;   // cell-center heights, size nz
    std::vector<double> wr;  // 2*pi*r_i*dr (radial factor of the volume weight)

    int cells() const { return nr * nz; }
    int idx(int i, int j) const { return j * nr + i; }
    double weight(int i, int /*j*/) const { return wr[i] * dz; }
    double volume() const;  // 2*pi*a*R^2 up to round-off
};

Grid make_grid(double R, double a, int nr, int nz);

/// Volume integral 2*pi * sum f_ij r_i dr dz of cell-center samples.
double integrate(const std::vector<double>& field, const Grid& g);

/// Lateral-wall integral over S1 (r = R): 2*pi*R * sum trace_j dz.
/// `trace` holds the nz wall values.
double integrate_wall(const std::vector<double>& trace, const Grid& g);

/// Lid integral over S2 (z = -a and z = +a): 2*pi * sum (lo_i + hi_i) r_i dr.
double integrate_lids(const std::vector<double>& lo,
                      const std::vector<double>& hi, const Grid& g);

}  // namespace cylflow
