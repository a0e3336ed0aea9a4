#include "sect/simplicial_complex.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace sect {

SimplexKey make_key(const std::vector<int>& vertex_indices) {
    if (vertex_indices.empty() || vertex_indices.size() > 4) {
        throw std::invalid_argument("simplex must have 1 to 4 vertices, got " +
                                    std::to_string(vertex_indices.size()));
    }
    for (int v : vertex_indices) {
        // -1 is the unused-slot sentinel inside SimplexKey, so negative
        // indices must be rejected before they can masquerade as padding.
        if (v < 0) throw std::invalid_argument("negative vertex index " + std::to_string(v));
    }
    SimplexKey key{-1, -1, -1, -1};
    std::copy(vertex_indices.begin(), vertex_indices.end(), key.begin());
    std::sort(key.begin(), key.begin() + vertex_indices.size());
    for (std::size_t i = 1; i < vertex_indices.size(); ++i) {
        if (key[i] == key[i - 1]) {
            throw std::invalid_argument("duplicate vertex " + std::to_string(key[i]) +
                                        " in simplex");
        }
    }
    return key;
}

int key_dim(const SimplexKey& key) {
    int d = -1;
    for (int v : key) {
        if (v >= 0) ++d;
    }
    return d;
}

int SimplicialComplex::top_dim() const {
    for (int k = 3; k >= 0; --k) {
        if (!simplices[k].empty()) return k;
    }
    return -1;
}

int SimplicialComplex::simplex_index(int k, const SimplexKey& key) const {
    const auto& list = simplices[k];
    auto it = std::lower_bound(list.begin(), list.end(), key);
    if (it == list.end() || *it != key) return -1;
    return static_cast<int>(it - list.begin());
}

SimplicialComplex build_complex(const std::vector<std::array<double, 3>>& vertices,
                                const std::vector<std::vector<int>>& maximal_simplices,
                                int dim) {
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("embedding dimension must be 2 or 3, got " +
                                    std::to_string(dim));
    }
    const int n = static_cast<int>(vertices.size());
    for (const auto& v : vertices) {
        for (double c : v) {
            if (!std::isfinite(c)) throw std::invalid_argument("non-finite vertex coordinate");
        }
    }

    std::array<std::set<SimplexKey>, 4> found;
    for (int i = 0; i < n; ++i) {
        found[0].insert(SimplexKey{i, -1, -1, -1});
    }
    for (const auto& simplex : maximal_simplices) {
        SimplexKey key = make_key(simplex);
        const int d = key_dim(key);
        for (int j = 0; j <= d; ++j) {
            if (key[j] < 0 || key[j] >= n) {
                throw std::invalid_argument("vertex index " + std::to_string(key[j]) +
                                            " out of range [0, " + std::to_string(n) + ")");
            }
        }
        // Closure: every nonempty subset of the vertex set is a face.
        for (int mask = 1; mask < (1 << (d + 1)); ++mask) {
            SimplexKey face{-1, -1, -1, -1};
            int m = 0;
            for (int j = 0; j <= d; ++j) {
                if (mask & (1 << j)) face[m++] = key[j];
            }
            found[m - 1].insert(face);
        }
    }

    SimplicialComplex K;
    K.dim = dim;
    K.vertices = vertices;
    for (int k = 0; k < 4; ++k) {
        K.simplices[k].assign(found[k].begin(), found[k].end());
    }
    return K;
}

int euler_characteristic(const SimplicialComplex& K) {
    int chi = 0;
    for (int k = 0; k < 4; ++k) {
        chi += (k % 2 == 0) ? K.count(k) : -K.count(k);
    }
    return chi;
}

Z2Matrix boundary_matrix(const SimplicialComplex& K, int k) {
    if (k < 1 || k > 3) {
        throw std::invalid_argument("boundary degree must be in [1, 3], got " +
                                    std::to_string(k));
    }
    Z2Matrix d(K.count(k - 1), K.count(k));
    for (int j = 0; j < K.count(k); ++j) {
        const SimplexKey& s = K.simplices[k][j];
        for (int drop = 0; drop <= k; ++drop) {
            SimplexKey face{-1, -1, -1, -1};
            int m = 0;
            for (int i = 0; i <= k; ++i) {
                if (i != drop) face[m++] = s[i];
            }
            const int row = K.simplex_index(k - 1, face);
            if (row < 0) throw std::logic_error("face missing from complex, closure violated");
            d.set(row, j);
        }
    }
    return d;
}

std::vector<int> betti_numbers(const SimplicialComplex& K) {
    std::array<int, 5> rank{};  // rank[k] = rank of boundary_matrix(K, k); rank[0] = rank[4] = 0
    for (int k = 1; k <= 3; ++k) {
        rank[k] = (K.count(k) > 0) ? boundary_matrix(K, k).rank() : 0;
    }
    const int out_dim = K.count(3) > 0 ? 3 : 2;
    std::vector<int> betti(out_dim + 1);
    for (int k = 0; k <= out_dim; ++k) {
        betti[k] = K.count(k) - rank[k] - rank[k + 1];
    }
    return betti;
}

}  // namespace sect
