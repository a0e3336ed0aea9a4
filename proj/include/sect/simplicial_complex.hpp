#pragma once

#include <array>
#include <vector>

#include "sect/z2_matrix.hpp"

namespace sect {

/// Canonical simplex key: vertex indices sorted ascending in slots 0..k,
/// remaining slots -1. Supports dimensions 0 through 3.
using SimplexKey = std::array<int, 4>;

/// Builds a key from 1 to 4 distinct vertex indices. Throws on duplicates
/// or an empty/oversized list.
SimplexKey make_key(const std::vector<int>& vertex_indices);

/// Number of vertices in the key minus one.
int key_dim(const SimplexKey& key);

/// Finite simplicial complex embedded in R^2 or R^3. Closed under faces:
/// every face of every stored simplex is stored. Simplex lists are sorted
/// and duplicate-free; every coordinate point is a 0-simplex.
struct SimplicialComplex {
    int dim = 2;
    std::vector<std::array<double, 3>> vertices;
    std::array<std::vector<SimplexKey>, 4> simplices;

    int count(int k) const { return static_cast<int>(simplices[k].size()); }
    /// Largest k with a k-simplex present; -1 for the empty complex.
    int top_dim() const;
    /// Position of key in simplices[k], or -1 if absent.
    int simplex_index(int k, const SimplexKey& key) const;
};

/// Assembles the closure of the given maximal simplices over the vertex set.
/// All listed points become vertices of the complex even when isolated.
SimplicialComplex build_complex(const std::vector<std::array<double, 3>>& vertices,
                                const std::vector<std::vector<int>>& maximal_simplices,
                                int dim = 2);

/// Alternating sum of simplex counts, V - E + F - T.
int euler_characteristic(const SimplicialComplex& K);

/// Matrix of the boundary map from k-chains to (k-1)-chains over Z2.
/// Column j holds the (k-1)-faces of the j-th k-simplex. Requires 1 <= k <= 3.
Z2Matrix boundary_matrix(const SimplicialComplex& K, int k);

/// Betti numbers (beta_0, beta_1, beta_2), extended with beta_3 when
/// tetrahedra are present.
std::vector<int> betti_numbers(const SimplicialComplex& K);

}  // namespace sect
