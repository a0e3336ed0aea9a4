#pragma once

#include <array>
#include <vector>

#include "sect/simplicial_complex.hpp"

namespace sect {

/// Complex with one filtration value per simplex, aligned with
/// base.simplices[k]. Monotone: a simplex's value is >= every face's value,
/// so each sublevel set is itself a complex.
struct FilteredComplex {
    SimplicialComplex base;
    std::array<std::vector<double>, 4> values;
};

/// Half-open lifetime of one homology class; death is +infinity for classes
/// present in the final complex.
struct BarcodeInterval {
    int degree = 0;
    double birth = 0.0;
    double death = 0.0;
};

struct Barcode {
    std::vector<BarcodeInterval> intervals;

    /// Bars of the given degree with birth <= t < death.
    int bars_alive(int degree, double t) const;
    int count(int degree) const;
};

/// Assigns each simplex the maximum height of its vertices.
FilteredComplex lower_star_filtration(const SimplicialComplex& K,
                                      const std::vector<double>& heights);

/// Standard boundary-matrix reduction over Z2 with simplices ordered by
/// (value, dimension, canonical key). Zero-length bars are retained.
Barcode compute_barcode(const FilteredComplex& F);

}  // namespace sect
