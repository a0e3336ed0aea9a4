#pragma once

#include <array>
#include <utility>
#include <vector>

#include "sect/simplicial_complex.hpp"

namespace sect {

/// Unit vector on S^(dim-1), dim = 2 or 3. Third component is 0 when dim = 2.
struct Direction {
    int dim = 2;
    std::array<double, 3> v{1.0, 0.0, 0.0};
};

/// Normalizes the given vector; throws if its norm is below 1e-12 or dim is
/// not 2 or 3.
Direction make_direction(const std::array<double, 3>& v, int dim);

/// Integer-valued Euler characteristic curve of one directional sweep,
/// sampled at T uniform thresholds on [a, b] inclusive. The final sample is
/// always taken exactly at b and equals the EC of the whole complex.
struct ECCurve {
    Direction direction;
    double a = 0.0;
    double b = 0.0;
    std::vector<int> samples;

    int levels() const { return static_cast<int>(samples.size()); }
    double step() const;
    double threshold(int j) const;
};

/// d=2: m directions at angles 2*pi*j/m, j = 0..m-1.
/// d=3: deterministic Fibonacci lattice of m points on the sphere.
std::vector<Direction> direction_set(int m, int d);

/// Height of a point in a direction: the dot product.
double height(const std::array<double, 3>& x, const Direction& nu);

/// Min and max vertex height. Throws on an empty complex.
std::pair<double, double> extremal_heights(const SimplicialComplex& K, const Direction& nu);

/// Largest subcomplex whose vertices all have height <= r. Retained vertices
/// are reindexed consecutively in their original order.
SimplicialComplex sublevel_complex(const SimplicialComplex& K, const Direction& nu, double r);

/// Sweeps the sorted simplex entry heights once; sample j is the EC of the
/// sublevel complex at threshold j. A simplex enters at the maximum height of
/// its vertices. Requires T >= 2 and a nonempty complex. When b = a the
/// curve is constant at the EC of K.
ECCurve ec_curve(const SimplicialComplex& K, const Direction& nu, int T);

}  // namespace sect
