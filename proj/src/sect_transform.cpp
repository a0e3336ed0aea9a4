#include "sect/sect_transform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace sect {

double SECCurve::step() const {
    const int T = levels();
    return T > 1 ? (b - a) / (T - 1) : 0.0;
}

double SECCurve::threshold(int j) const {
    if (j == levels() - 1) return b;
    return a + j * step();
}

double SECCurve::value_at(double t) const {
    if (samples.empty()) return 0.0;
    if (t >= b) return samples.back();
    if (t <= a) return samples.front();
    const double h = step();
    const double u = (t - a) / h;
    int i = static_cast<int>(u);
    i = std::min(i, levels() - 2);
    const double frac = u - i;
    return (1.0 - frac) * samples[i] + frac * samples[i + 1];
}

std::vector<double> SECTProfile::flattened() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(levels) * curves.size());
    for (const auto& c : curves) out.insert(out.end(), c.samples.begin(), c.samples.end());
    return out;
}

std::vector<double> center_curve(const ECCurve& c) {
    const int T = c.levels();
    if (T < 2) throw std::invalid_argument("centering needs at least 2 samples");
    double mean = 0.0;
    for (int j = 0; j < T - 1; ++j) mean += c.samples[j];
    mean /= (T - 1);
    std::vector<double> Z(T);
    for (int j = 0; j < T; ++j) Z[j] = c.samples[j] - mean;
    return Z;
}

SECCurve smooth_curve(const std::vector<double>& Z, const Direction& direction,
                      double a, double b) {
    const int T = static_cast<int>(Z.size());
    if (T < 2) throw std::invalid_argument("integration needs at least 2 samples");
    SECCurve F;
    F.direction = direction;
    F.a = a;
    F.b = b;
    F.samples.resize(T);
    const double h = (b - a) / (T - 1);
    double acc = 0.0;
    F.samples[0] = 0.0;
    for (int j = 1; j < T; ++j) {
        acc += Z[j - 1];
        F.samples[j] = h * acc;
    }
    return F;
}

SECCurve sec_curve(const SimplicialComplex& K, const Direction& nu, int T) {
    const ECCurve ec = ec_curve(K, nu, T);
    return smooth_curve(center_curve(ec), nu, ec.a, ec.b);
}

namespace {

SECTProfile profile_impl(const SimplicialComplex& K, const std::vector<Direction>& directions,
                         int T, bool parallel) {
    if (directions.empty()) throw std::invalid_argument("empty direction set");
    for (const auto& nu : directions) {
        if (nu.dim != K.dim) throw std::invalid_argument("direction dimension does not match complex");
    }
    if (T < 2) throw std::invalid_argument("profile needs at least 2 levels");
    if (K.vertices.empty()) throw std::invalid_argument("profile of an empty complex");

    SECTProfile P;
    P.levels = T;
    P.directions = directions;
    P.curves.resize(directions.size());
    const int m = static_cast<int>(directions.size());
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < m; ++i) {
            P.curves[i] = sec_curve(K, directions[i], T);
        }
    } else {
        for (int i = 0; i < m; ++i) {
            P.curves[i] = sec_curve(K, directions[i], T);
        }
    }
    return P;
}

}  // namespace

SECTProfile sect_profile(const SimplicialComplex& K, const std::vector<Direction>& directions,
                         int T) {
    return profile_impl(K, directions, T, true);
}

SECTProfile sect_profile_serial(const SimplicialComplex& K,
                                const std::vector<Direction>& directions, int T) {
    return profile_impl(K, directions, T, false);
}

namespace {

bool same_direction_set(const SECTProfile& P, const SECTProfile& Q) {
    if (P.directions.size() != Q.directions.size()) return false;
    for (std::size_t i = 0; i < P.directions.size(); ++i) {
        if (P.directions[i].dim != Q.directions[i].dim) return false;
        if (P.directions[i].v != Q.directions[i].v) return false;
    }
    return true;
}

}  // namespace

SECTProfile aggregate_slices(const std::vector<SECTProfile>& profiles) {
    if (profiles.empty()) throw std::invalid_argument("nothing to aggregate");
    const SECTProfile& first = profiles[0];
    for (const auto& P : profiles) {
        if (P.levels != first.levels || !same_direction_set(P, first)) {
            throw std::invalid_argument("profiles disagree on direction set or level count");
        }
    }

    SECTProfile out;
    out.source_id = first.source_id;
    out.levels = first.levels;
    out.directions = first.directions;
    out.curves.resize(first.curves.size());
    const double inv = 1.0 / profiles.size();
    for (std::size_t i = 0; i < out.curves.size(); ++i) {
        SECCurve& c = out.curves[i];
        c.direction = first.directions[i];
        c.a = 0.0;
        c.b = 0.0;
        c.samples.assign(first.levels, 0.0);
        for (const auto& P : profiles) {
            c.a += P.curves[i].a;
            c.b += P.curves[i].b;
            for (int j = 0; j < first.levels; ++j) c.samples[j] += P.curves[i].samples[j];
        }
        c.a *= inv;
        c.b *= inv;
        for (double& s : c.samples) s *= inv;
    }
    for (const auto& P : profiles) {
        out.slices.push_back(P.slice_index >= 0
                                 ? P.source_id + "[" + std::to_string(P.slice_index) + "]"
                                 : P.source_id);
    }
    return out;
}

double sect_distance(const SECTProfile& P, const SECTProfile& Q) {
    if (P.levels != Q.levels || !same_direction_set(P, Q)) {
        throw std::invalid_argument("profiles disagree on direction set or level count");
    }
    const int m = static_cast<int>(P.directions.size());
    const int T = P.levels;
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        const SECCurve& f = P.curves[i];
        const SECCurve& g = Q.curves[i];
        const double a = std::min(f.a, g.a);
        const double b = std::max(f.b, g.b);
        const double h = (b - a) / (T - 1);
        double acc = 0.0;
        for (int j = 0; j < T; ++j) {
            const double t = (j == T - 1) ? b : a + j * h;
            const double d = f.value_at(t) - g.value_at(t);
            acc += d * d;
        }
        total += h * acc;
    }
    return std::sqrt(total / m);
}

void save_profile(const std::string& path, const SECTProfile& P) {
    nlohmann::ordered_json j;
    j["format"] = "sect-profile";
    j["version"] = 1;
    j["source_id"] = P.source_id;
    j["slice_index"] = P.slice_index;
    j["slices"] = P.slices;
    j["dim"] = P.directions.empty() ? 2 : P.directions[0].dim;
    j["levels"] = P.levels;
    auto& dirs = j["directions"] = nlohmann::ordered_json::array();
    for (const auto& nu : P.directions) dirs.push_back({nu.v[0], nu.v[1], nu.v[2]});
    auto& curves = j["curves"] = nlohmann::ordered_json::array();
    for (const auto& c : P.curves) {
        curves.push_back({{"a", c.a}, {"b", c.b}, {"F", c.samples}});
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

SECTProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    if (j.value("format", "") != "sect-profile") {
        throw std::runtime_error(path + ": not a SECT profile file");
    }
    SECTProfile P;
    P.source_id = j.value("source_id", "");
    P.slice_index = j.value("slice_index", -1);
    if (j.contains("slices")) P.slices = j["slices"].get<std::vector<std::string>>();
    const int dim = j.at("dim").get<int>();
    P.levels = j.at("levels").get<int>();
    for (const auto& d : j.at("directions")) {
        P.directions.push_back(
            Direction{dim, {d.at(0).get<double>(), d.at(1).get<double>(), d.at(2).get<double>()}});
    }
    for (std::size_t i = 0; i < j.at("curves").size(); ++i) {
        const auto& jc = j["curves"][i];
        SECCurve c;
        c.direction = P.directions.at(i);
        c.a = jc.at("a").get<double>();
        c.b = jc.at("b").get<double>();
        c.samples = jc.at("F").get<std::vector<double>>();
        if (static_cast<int>(c.samples.size()) != P.levels) {
            throw std::runtime_error(path + ": curve sample count disagrees with levels");
        }
        P.curves.push_back(std::move(c));
    }
    if (P.curves.size() != P.directions.size()) {
        throw std::runtime_error(path + ": curve count disagrees with direction count");
    }
    return P;
}

}  // namespace sect
