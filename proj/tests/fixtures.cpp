#include "fixtures.hpp"

#include <array>
#include <cmath>
#include <queue>

namespace fixtures {

sect::SimplicialComplex fig1_complex() {
    const std::vector<std::array<double, 3>> vertices = {
        {0.0, 0.0, 0.0},  {-1.0, 0.5, 0.0}, {1.0, 0.75, 0.0},
        {0.5, 1.5, 0.0},  {-2.0, 1.25, 0.0}, {-0.5, 2.0, 0.0},
    };
    return sect::build_complex(vertices, {{0, 2, 3}, {1, 5}, {3, 5}, {4}}, 2);
}

std::vector<double> fig1_heights() { return {0.0, 0.5, 0.75, 1.25, 1.5, 2.0}; }

sect::SimplicialComplex hand_contour() {
    const std::vector<std::array<double, 3>> vertices = {
        {-0.100, 0.000, 0.0}, {0.010, 0.012, 0.0}, {-0.055, 0.030, 0.0}, {0.010, 0.048, 0.0},
        {-0.040, 0.066, 0.0}, {0.010, 0.084, 0.0}, {-0.030, 0.102, 0.0}, {0.010, 0.120, 0.0},
        {-0.020, 0.138, 0.0}, {0.080, 0.150, 0.0}, {0.100, 0.020, 0.0},  {0.070, -0.030, 0.0},
    };
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < 12; ++i) edges.push_back({i, (i + 1) % 12});
    return sect::build_complex(vertices, edges, 2);
}

namespace {

sect::BinaryImage from_rows(const std::vector<std::vector<int>>& rows) {
    sect::BinaryImage img;
    img.height = static_cast<int>(rows.size());
    img.width = static_cast<int>(rows[0].size());
    for (const auto& r : rows) {
        for (int v : r) img.mask.push_back(static_cast<std::uint8_t>(v));
    }
    return img;
}

}  // namespace

sect::BinaryImage c_mask() { return from_rows({{1, 1}, {1, 0}, {1, 1}}); }

sect::BinaryImage mirrored_c_mask() { return from_rows({{1, 1}, {0, 1}, {1, 1}}); }

sect::BinaryImage disk_mask() {
    sect::BinaryImage img;
    img.width = img.height = 31;
    img.mask.assign(31 * 31, 0);
    for (int r = 0; r < 31; ++r) {
        for (int c = 0; c < 31; ++c) {
            if (std::hypot(c - 15.0, r - 15.0) <= 12.0) img.mask[r * 31 + c] = 1;
        }
    }
    return img;
}

sect::BinaryImage annulus_mask() {
    sect::BinaryImage img;
    img.width = img.height = 31;
    img.mask.assign(31 * 31, 0);
    for (int r = 0; r < 31; ++r) {
        for (int c = 0; c < 31; ++c) {
            const double d = std::hypot(c - 15.0, r - 15.0);
            if (d <= 12.0 && d > 5.0) img.mask[r * 31 + c] = 1;
        }
    }
    return img;
}

sect::SimplicialComplex random_complex(sect::Rng& rng, int max_vertices, int dim) {
    const int n = 1 + rng.next_int(max_vertices);
    std::vector<std::array<double, 3>> vertices(n);
    for (auto& v : vertices) {
        v = {rng.next_double() * 2.0 - 1.0, rng.next_double() * 2.0 - 1.0,
             dim == 3 ? rng.next_double() * 2.0 - 1.0 : 0.0};
    }
    const int n_maximal = rng.next_int(10);
    std::vector<std::vector<int>> maximal;
    for (int i = 0; i < n_maximal; ++i) {
        const int arity = 1 + rng.next_int(std::min(4, n));
        std::vector<int> pool(n);
        for (int j = 0; j < n; ++j) pool[j] = j;
        rng.shuffle(pool);
        maximal.push_back(std::vector<int>(pool.begin(), pool.begin() + arity));
    }
    return sect::build_complex(vertices, maximal, dim);
}

sect::BinaryImage random_mask(sect::Rng& rng, int width, int height, double density,
                              bool pin_corners) {
    sect::BinaryImage img;
    img.width = width;
    img.height = height;
    img.mask.assign(static_cast<std::size_t>(width) * height, 0);
    for (auto& p : img.mask) p = rng.next_double() < density ? 1 : 0;
    if (pin_corners) {
        img.mask[0] = img.mask[width - 1] = 1;
        img.mask[static_cast<std::size_t>(height - 1) * width] = 1;
        img.mask[static_cast<std::size_t>(height - 1) * width + width - 1] = 1;
    }
    if (img.foreground_count() == 0) img.mask[0] = 1;
    return img;
}

int flood_fill_components(const sect::BinaryImage& img) {
    std::vector<char> seen(img.mask.size(), 0);
    int components = 0;
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            if (!img.at(r, c) || seen[static_cast<std::size_t>(r) * img.width + c]) continue;
            ++components;
            std::queue<std::pair<int, int>> todo;
            todo.push({r, c});
            seen[static_cast<std::size_t>(r) * img.width + c] = 1;
            while (!todo.empty()) {
                const auto [cr, cc] = todo.front();
                todo.pop();
                const int dr[] = {1, -1, 0, 0};
                const int dc[] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nr = cr + dr[k], nc = cc + dc[k];
                    if (nr < 0 || nr >= img.height || nc < 0 || nc >= img.width) continue;
                    if (!img.at(nr, nc) || seen[static_cast<std::size_t>(nr) * img.width + nc]) continue;
                    seen[static_cast<std::size_t>(nr) * img.width + nc] = 1;
                    todo.push({nr, nc});
                }
            }
        }
    }
    return components;
}

}  // namespace fixtures
