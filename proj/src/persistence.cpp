#include "sect/persistence.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace sect {

int Barcode::bars_alive(int degree, double t) const {
    int n = 0;
    for (const auto& bar : intervals) {
        if (bar.degree == degree && bar.birth <= t && t < bar.death) ++n;
    }
    return n;
}

int Barcode::count(int degree) const {
    int n = 0;
    for (const auto& bar : intervals) {
        if (bar.degree == degree) ++n;
    }
    return n;
}

FilteredComplex lower_star_filtration(const SimplicialComplex& K,
                                      const std::vector<double>& heights) {
    if (heights.size() != K.vertices.size()) {
        throw std::invalid_argument("expected " + std::to_string(K.vertices.size()) +
                                    " vertex heights, got " + std::to_string(heights.size()));
    }
    FilteredComplex F;
    F.base = K;
    for (int k = 0; k < 4; ++k) {
        F.values[k].resize(K.count(k));
        for (int i = 0; i < K.count(k); ++i) {
            const SimplexKey& s = K.simplices[k][i];
            double v = heights[s[0]];
            for (int j = 1; j <= k; ++j) v = std::max(v, heights[s[j]]);
            F.values[k][i] = v;
        }
    }
    return F;
}

namespace {

// XOR of two sparse Z2 columns held as sorted row-index lists.
std::vector<int> column_xor(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

}  // namespace

Barcode compute_barcode(const FilteredComplex& F) {
    const SimplicialComplex& K = F.base;
    for (int k = 0; k < 4; ++k) {
        if (static_cast<int>(F.values[k].size()) != K.count(k)) {
            throw std::invalid_argument("filtration values misaligned with simplices");
        }
    }

    struct Entry {
        double value;
        int k;
        int idx;
    };
    std::vector<Entry> order;
    int total = 0;
    for (int k = 0; k < 4; ++k) total += K.count(k);
    order.reserve(total);
    for (int k = 0; k < 4; ++k) {
        for (int i = 0; i < K.count(k); ++i) order.push_back({F.values[k][i], k, i});
    }
    std::sort(order.begin(), order.end(), [&K](const Entry& x, const Entry& y) {
        return std::tie(x.value, x.k, K.simplices[x.k][x.idx]) <
               std::tie(y.value, y.k, K.simplices[y.k][y.idx]);
    });

    std::array<std::vector<int>, 4> pos;
    for (int k = 0; k < 4; ++k) pos[k].assign(K.count(k), -1);
    for (int i = 0; i < total; ++i) pos[order[i].k][order[i].idx] = i;

    std::vector<std::vector<int>> cols(total);
    for (int i = 0; i < total; ++i) {
        const auto [value, k, idx] = order[i];
        if (k == 0) continue;
        const SimplexKey& s = K.simplices[k][idx];
        auto& col = cols[i];
        for (int drop = 0; drop <= k; ++drop) {
            SimplexKey face{-1, -1, -1, -1};
            int m = 0;
            for (int j = 0; j <= k; ++j) {
                if (j != drop) face[m++] = s[j];
            }
            const int fidx = K.simplex_index(k - 1, face);
            if (fidx < 0) throw std::logic_error("face missing from complex, closure violated");
            if (F.values[k - 1][fidx] > value) {
                throw std::invalid_argument("non-monotone filtration: face value exceeds simplex value");
            }
            col.push_back(pos[k - 1][fidx]);
        }
        std::sort(col.begin(), col.end());
    }

    std::vector<int> low_to_col(total, -1);
    std::vector<int> paired_with(total, -1);
    for (int i = 0; i < total; ++i) {
        auto& col = cols[i];
        while (!col.empty()) {
            const int j = low_to_col[col.back()];
            if (j < 0) break;
            col = column_xor(col, cols[j]);
        }
        if (!col.empty()) {
            low_to_col[col.back()] = i;
            paired_with[col.back()] = i;
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    Barcode barcode;
    for (int i = 0; i < total; ++i) {
        if (!cols[i].empty()) continue;  // destroyer column, not a creator
        const int death = paired_with[i];
        barcode.intervals.push_back({order[i].k, order[i].value,
                                     death < 0 ? inf : order[death].value});
    }
    return barcode;
}

}  // namespace sect
