#include "sect/synthetic.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sect/ingest.hpp"
#include "sect/stats.hpp"

namespace sect {

namespace fs = std::filesystem;

namespace {

constexpr int kCanvasW = 96;
constexpr int kCanvasH = 48;
constexpr int kNoiseFeatures = 10;

struct SubjectGeometry {
    int holes = 0;
    int components = 1;
    double radius = 0.0;
    double cx = 0.0, cy = 0.0;
    double cx2 = 0.0, cy2 = 0.0, radius2 = 0.0;
    std::vector<std::array<double, 2>> hole_centers;
    double hole_radius = 0.0;
};

BinaryImage rasterize(const SubjectGeometry& g) {
    BinaryImage img;
    img.width = kCanvasW;
    img.height = kCanvasH;
    img.mask.assign(static_cast<std::size_t>(kCanvasW) * kCanvasH, 0);
    for (int r = 0; r < kCanvasH; ++r) {
        for (int c = 0; c < kCanvasW; ++c) {
            const double x = c, y = r;
            bool fg = false;
            const double d1 = std::hypot(x - g.cx, y - g.cy);
            if (d1 <= g.radius) {
                fg = true;
                for (const auto& h : g.hole_centers) {
                    if (std::hypot(x - h[0], y - h[1]) <= g.hole_radius) {
                        fg = false;
                        break;
                    }
                }
            }
            if (!fg && g.components == 2 && std::hypot(x - g.cx2, y - g.cy2) <= g.radius2) {
                fg = true;
            }
            if (fg) img.mask[static_cast<std::size_t>(r) * kCanvasW + c] = 1;
        }
    }
    return img;
}

void write_mask_csv(const std::string& path, const BinaryImage& img) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            if (c) out << ",";
            out << (img.at(r, c) ? 1 : 0);
        }
        out << "\n";
    }
}

}  // namespace

std::string generate_synthetic_cohort(int n, std::uint64_t seed, const std::string& out_dir) {
    if (n < 10) throw std::invalid_argument("cohort needs at least 10 subjects");
    fs::create_directories(fs::path(out_dir) / "masks");
    Rng rng(mix_seed(seed, 0xC0407));

    nlohmann::ordered_json manifest;
    auto& subjects = manifest["subjects"] = nlohmann::ordered_json::array();
    nlohmann::ordered_json params_log = nlohmann::ordered_json::array();

    std::ofstream noise_csv((fs::path(out_dir) / "noise.csv").string());
    if (!noise_csv) throw std::runtime_error("cannot write noise.csv in " + out_dir);
    noise_csv << "id";
    for (int f = 0; f < kNoiseFeatures; ++f) noise_csv << ",n" << f;
    noise_csv << "\n";
    noise_csv.precision(17);

    for (int i = 0; i < n; ++i) {
        SubjectGeometry g;
        g.holes = i % 4;
        g.components = 1 + (i / 4) % 2;
        g.radius = 14.0 + 4.0 * rng.next_double();
        g.cx = 24.0 + 4.0 * (rng.next_double() - 0.5);
        g.cy = 24.0 + 4.0 * (rng.next_double() - 0.5);
        if (g.components == 2) {
            g.radius2 = 7.0 + 2.0 * rng.next_double();
            g.cx2 = 72.0 + 4.0 * (rng.next_double() - 0.5);
            g.cy2 = 24.0 + 4.0 * (rng.next_double() - 0.5);
        }
        g.hole_radius = 0.18 * g.radius;
        for (int h = 0; h < g.holes; ++h) {
            const double angle = (90.0 + 120.0 * h + 20.0 * (rng.next_double() - 0.5)) *
                                 std::numbers::pi / 180.0;
            const double off = 0.55 * g.radius;
            g.hole_centers.push_back({g.cx + off * std::cos(angle), g.cy + off * std::sin(angle)});
        }

        const BinaryImage img = rasterize(g);
        const std::vector<int> betti = betti_numbers(mask_to_complex(img));
        if (betti[0] != g.components || betti[1] != g.holes) {
            throw std::logic_error("generated mask has Betti numbers (" +
                                   std::to_string(betti[0]) + "," + std::to_string(betti[1]) +
                                   "), wanted (" + std::to_string(g.components) + "," +
                                   std::to_string(g.holes) + ")");
        }

        char id[16];
        std::snprintf(id, sizeof id, "s%03d", i);
        const std::string mask_rel = std::string("masks/") + id + ".csv";
        write_mask_csv((fs::path(out_dir) / mask_rel).string(), img);

        const double y = 1.2 * g.holes + 1.8 * (g.components - 1) + 0.3 * rng.next_gaussian();
        subjects.push_back({{"id", id}, {"masks", {mask_rel}}, {"response", y}});

        noise_csv << id;
        for (int f = 0; f < kNoiseFeatures; ++f) noise_csv << "," << rng.next_gaussian();
        noise_csv << "\n";

        params_log.push_back({{"id", id},
                              {"holes", g.holes},
                              {"components", g.components},
                              {"radius", g.radius},
                              {"center", {g.cx, g.cy}},
                              {"hole_radius", g.hole_radius},
                              {"response", y}});
    }

    manifest["covariates"] = {{"noise", "noise.csv"}};
    const std::string manifest_path = (fs::path(out_dir) / "manifest.json").string();
    {
        std::ofstream out(manifest_path);
        if (!out) throw std::runtime_error("cannot write " + manifest_path);
        out << manifest.dump(2) << "\n";
    }
    {
        nlohmann::ordered_json params;
        params["n"] = n;
        params["seed"] = seed;
        params["canvas"] = {kCanvasW, kCanvasH};
        params["response_model"] = "1.2*holes + 1.8*(components-1) + 0.3*N(0,1)";
        params["subjects"] = std::move(params_log);
        std::ofstream out((fs::path(out_dir) / "params.json").string());
        if (!out) throw std::runtime_error("cannot write params.json in " + out_dir);
        out << params.dump(2) << "\n";
    }
    return manifest_path;
}

}  // namespace sect
