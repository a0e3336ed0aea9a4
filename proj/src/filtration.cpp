#include "sect/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sect {

Direction make_direction(const std::array<double, 3>& v, int dim) {
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("direction dimension must be 2 or 3, got " +
                                    std::to_string(dim));
    }
    std::array<double, 3> w = v;
    if (dim == 2) w[2] = 0.0;
    const double norm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (!(norm > 1e-12)) throw std::invalid_argument("direction vector has near-zero norm");
    for (double& c : w) c /= norm;
    return Direction{dim, w};
}

double ECCurve::step() const {
    const int T = levels();
    return T > 1 ? (b - a) / (T - 1) : 0.0;
}

double ECCurve::threshold(int j) const {
    if (j == levels() - 1) return b;
    return a + j * step();
}

std::vector<Direction> direction_set(int m, int d) {
    if (m < 1) throw std::invalid_argument("direction count must be >= 1, got " + std::to_string(m));
    if (d != 2 && d != 3) {
        throw std::invalid_argument("direction dimension must be 2 or 3, got " + std::to_string(d));
    }
    std::vector<Direction> out;
    out.reserve(m);
    if (d == 2) {
        for (int j = 0; j < m; ++j) {
            const double angle = 2.0 * std::numbers::pi * j / m;
            out.push_back(Direction{2, {std::cos(angle), std::sin(angle), 0.0}});
        }
    } else {
        // Fibonacci lattice: uniform latitude steps, golden-angle longitudes.
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        for (int j = 0; j < m; ++j) {
            const double z = 1.0 - 2.0 * (j + 0.5) / m;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = 2.0 * std::numbers::pi * j / golden;
            out.push_back(Direction{3, {r * std::cos(phi), r * std::sin(phi), z}});
        }
    }
    return out;
}

double height(const std::array<double, 3>& x, const Direction& nu) {
    return x[0] * nu.v[0] + x[1] * nu.v[1] + x[2] * nu.v[2];
}

std::pair<double, double> extremal_heights(const SimplicialComplex& K, const Direction& nu) {
    if (K.vertices.empty()) throw std::invalid_argument("extremal heights of an empty complex");
    double lo = height(K.vertices[0], nu);
    double hi = lo;
    for (std::size_t i = 1; i < K.vertices.size(); ++i) {
        const double h = height(K.vertices[i], nu);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    return {lo, hi};
}

SimplicialComplex sublevel_complex(const SimplicialComplex& K, const Direction& nu, double r) {
    if (K.dim != nu.dim) throw std::invalid_argument("direction dimension does not match complex");
    const int n = static_cast<int>(K.vertices.size());
    std::vector<int> remap(n, -1);
    SimplicialComplex sub;
    sub.dim = K.dim;
    for (int i = 0; i < n; ++i) {
        if (height(K.vertices[i], nu) <= r) {
            remap[i] = static_cast<int>(sub.vertices.size());
            sub.vertices.push_back(K.vertices[i]);
        }
    }
    for (int k = 0; k < 4; ++k) {
        for (const SimplexKey& s : K.simplices[k]) {
            SimplexKey mapped{-1, -1, -1, -1};
            bool keep = true;
            for (int j = 0; j <= k; ++j) {
                if (remap[s[j]] < 0) {
                    keep = false;
                    break;
                }
                mapped[j] = remap[s[j]];
            }
            if (keep) sub.simplices[k].push_back(mapped);
        }
    }
    // Remapping preserves index order, so each list stays sorted.
    return sub;
}

ECCurve ec_curve(const SimplicialComplex& K, const Direction& nu, int T) {
    if (T < 2) throw std::invalid_argument("EC curve needs at least 2 levels, got " + std::to_string(T));
    if (K.dim != nu.dim) throw std::invalid_argument("direction dimension does not match complex");
    if (K.vertices.empty()) throw std::invalid_argument("EC curve of an empty complex");

    std::vector<double> vertex_height(K.vertices.size());
    for (std::size_t i = 0; i < K.vertices.size(); ++i) {
        vertex_height[i] = height(K.vertices[i], nu);
    }

    // Entry height of each simplex paired with its EC contribution (-1)^k.
    struct Event {
        double value;
        int weight;
    };
    std::vector<Event> events;
    int total = 0;
    for (int k = 0; k < 4; ++k) total += K.count(k);
    events.reserve(total);
    for (int k = 0; k < 4; ++k) {
        const int w = (k % 2 == 0) ? 1 : -1;
        for (const SimplexKey& s : K.simplices[k]) {
            double v = vertex_height[s[0]];
            for (int j = 1; j <= k; ++j) v = std::max(v, vertex_height[s[j]]);
            events.push_back({v, w});
        }
    }
    std::sort(events.begin(), events.end(),
              [](const Event& x, const Event& y) { return x.value < y.value; });

    ECCurve curve;
    curve.direction = nu;
    std::tie(curve.a, curve.b) = extremal_heights(K, nu);
    curve.samples.resize(T);
    int chi = 0;
    std::size_t next = 0;
    for (int j = 0; j < T; ++j) {
        const double t = curve.threshold(j);
        while (next < events.size() && events[next].value <= t) {
            chi += events[next].weight;
            ++next;
        }
        curve.samples[j] = chi;
    }
    return curve;
}

}  // namespace sect
