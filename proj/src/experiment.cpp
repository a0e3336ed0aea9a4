#include "sect/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "sect/ingest.hpp"
#include "sect/sect_transform.hpp"
#include "sect/stats.hpp"

namespace sect {

namespace fs = std::filesystem;

const char* const kVersion = "0.1.0";

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    const fs::path base = fs::path(path).parent_path();

    ExperimentConfig cfg;
    cfg.manifest_path = (base / j.at("manifest").get<std::string>()).string();
    cfg.data_types = j.at("data_types").get<std::vector<std::string>>();
    for (const auto& k : j.at("kernels")) {
        cfg.kernels.push_back(kernel_family_from_string(k.get<std::string>()));
    }
    cfg.folds = j.value("folds", 10);
    if (j.contains("bandwidth_grid")) {
        cfg.bandwidth_grid = j["bandwidth_grid"].get<std::vector<double>>();
    }
    cfg.splits = j.value("splits", 1000);
    cfg.train_fraction = j.value("train_fraction", 0.8);
    if (j.value("tau2_policy", "fixed") == "marginal") {
        cfg.tau2.mode = Tau2Policy::Mode::marginal;
        if (j.contains("tau2_grid")) cfg.tau2.grid = j["tau2_grid"].get<std::vector<double>>();
    } else {
        cfg.tau2.mode = Tau2Policy::Mode::fixed;
        cfg.tau2.fixed = j.value("tau2", 0.1);
    }
    cfg.seed = j.value("seed", 0ULL);
    cfg.out_dir = j.contains("out_dir") ? (base / j["out_dir"].get<std::string>()).string() : "";
    cfg.directions = j.value("directions", 72);
    cfg.levels = j.value("levels", 100);
    cfg.standardize_features = j.value("standardize_features", true);

    if (cfg.data_types.empty()) throw std::runtime_error(path + ": no data types");
    if (cfg.kernels.empty()) throw std::runtime_error(path + ": no kernels");
    if (cfg.splits < 1) throw std::runtime_error(path + ": split count must be >= 1");
    if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
        throw std::runtime_error(path + ": train fraction must lie in (0, 1)");
    }
    return cfg;
}

const CellSummary& ExperimentReport::cell(const std::string& data_type,
                                          KernelFamily kernel) const {
    for (const auto& c : cells) {
        if (c.data_type == data_type && c.kernel == kernel) return c;
    }
    throw std::out_of_range("no cell for " + data_type + "/" + to_string(kernel));
}

namespace {

Eigen::MatrixXd sect_features(const Dataset& ds, int directions, int levels) {
    bool any_mesh = false, any_mask = false;
    for (const auto& s : ds.subjects) {
        (s.mesh_path.empty() ? any_mask : any_mesh) = true;
    }
    if (any_mesh && any_mask) {
        throw std::runtime_error("cohort mixes masks and meshes; SECT features need one modality");
    }
    const std::vector<Direction> dirs = direction_set(directions, any_mesh ? 3 : 2);
    const int n = static_cast<int>(ds.subjects.size());
    Eigen::MatrixXd F(n, static_cast<Eigen::Index>(directions) * levels);
    std::string error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            const SubjectEntry& subj = ds.subjects[i];
            SECTProfile profile;
            if (!subj.mesh_path.empty()) {
                profile = sect_profile(load_off(subj.mesh_path), dirs, levels);
                profile.source_id = subj.id;
            } else {
                std::vector<SECTProfile> slices;
                for (std::size_t k = 0; k < subj.mask_paths.size(); ++k) {
                    SECTProfile p =
                        sect_profile(mask_to_complex(load_mask(subj.mask_paths[k])), dirs, levels);
                    p.source_id = subj.id;
                    p.slice_index = static_cast<int>(k);
                    slices.push_back(std::move(p));
                }
                profile = aggregate_slices(slices);
            }
            const std::vector<double> flat = profile.flattened();
            for (std::size_t c = 0; c < flat.size(); ++c) {
                F(i, static_cast<Eigen::Index>(c)) = flat[c];
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = std::string("subject ") + ds.subjects[i].id + ": " + e.what();
        }
    }
    if (!error.empty()) throw std::runtime_error(error);
    return F;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    const Dataset ds = load_dataset(config.manifest_path, true);
    const int n = static_cast<int>(ds.subjects.size());
    if (n < 10) {
        throw std::runtime_error("protocol needs at least 10 subjects, got " + std::to_string(n));
    }
    for (const auto& s : ds.subjects) {
        if (!s.has_response) throw std::runtime_error("subject " + s.id + " has no response");
    }
    Eigen::VectorXd y_raw(n);
    for (int i = 0; i < n; ++i) y_raw[i] = ds.subjects[i].response;

    std::map<std::string, Eigen::MatrixXd> features;
    for (const auto& type : config.data_types) {
        if (type == "sect") {
            features.emplace(type, sect_features(ds, config.directions, config.levels));
        } else {
            auto it = ds.covariates.find(type);
            if (it == ds.covariates.end()) {
                throw std::runtime_error("manifest has no covariate named '" + type + "'");
            }
            features.emplace(type, it->second);
        }
    }

    const int n_train =
        std::clamp(static_cast<int>(std::lround(config.train_fraction * n)), 1, n - 1);
    const int n_test = n - n_train;
    if (n_test < 2) throw std::runtime_error("test part too small to score, need >= 2 subjects");
    if (n_train < config.folds) {
        throw std::runtime_error("training part smaller than the fold count");
    }
    const std::vector<double> grid =
        config.bandwidth_grid.empty() ? default_bandwidth_grid() : config.bandwidth_grid;

    const int S = config.splits;
    const int n_types = static_cast<int>(config.data_types.size());
    const int n_kernels = static_cast<int>(config.kernels.size());
    std::vector<std::vector<SplitRecord>> per_split(S);
    std::string error;

#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < S; ++s) {
        try {
            const std::uint64_t seed_s = mix_seed(config.seed, static_cast<std::uint64_t>(s));
            Rng rng(seed_s);
            std::vector<int> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            rng.shuffle(perm);
            std::vector<int> train(perm.begin(), perm.begin() + n_train);
            std::vector<int> test(perm.begin() + n_train, perm.end());
            std::sort(train.begin(), train.end());
            std::sort(test.begin(), test.end());

            std::vector<double> ytr_raw(n_train);
            for (int i = 0; i < n_train; ++i) ytr_raw[i] = y_raw[train[i]];
            const double y_mean = mean(ytr_raw);
            const double y_sd = sample_sd(ytr_raw);
            if (y_sd == 0.0) {
                throw std::runtime_error("constant training response in split " + std::to_string(s));
            }
            Eigen::VectorXd ytr(n_train);
            for (int i = 0; i < n_train; ++i) ytr[i] = (ytr_raw[i] - y_mean) / y_sd;
            std::vector<double> yte(n_test);
            for (int i = 0; i < n_test; ++i) yte[i] = (y_raw[test[i]] - y_mean) / y_sd;

            auto& records = per_split[s];
            for (int ti = 0; ti < n_types; ++ti) {
                const Eigen::MatrixXd& F = features.at(config.data_types[ti]);
                Eigen::MatrixXd Xtr(n_train, F.cols()), Xte(n_test, F.cols());
                for (int i = 0; i < n_train; ++i) Xtr.row(i) = F.row(train[i]);
                for (int i = 0; i < n_test; ++i) Xte.row(i) = F.row(test[i]);
                if (config.standardize_features) {
                    const Standardizer std_cols = Standardizer::fit(Xtr);
                    if (std_cols.kept.empty()) {
                        throw std::runtime_error("all columns of '" + config.data_types[ti] +
                                                 "' are constant on the training part");
                    }
                    Xtr = std_cols.apply(Xtr);
                    Xte = std_cols.apply(Xte);
                }
                for (int ki = 0; ki < n_kernels; ++ki) {
                    const KernelFamily family = config.kernels[ki];
                    KernelSpec spec{family, 1.0};
                    double theta = std::numeric_limits<double>::quiet_NaN();
                    const double cv_tau2 = config.tau2.mode == Tau2Policy::Mode::fixed
                                               ? config.tau2.fixed
                                               : 0.1;
                    if (family != KernelFamily::linear) {
                        theta = cv_bandwidth(family, Xtr, ytr, config.folds, grid, cv_tau2,
                                             mix_seed(seed_s, 1000 + 16 * ti + ki));
                        spec.bandwidth = theta;
                    }
                    double tau2 = config.tau2.fixed;
                    if (config.tau2.mode == Tau2Policy::Mode::marginal) {
                        double best_lml = -std::numeric_limits<double>::infinity();
                        std::vector<double> tgrid = config.tau2.grid;
                        std::sort(tgrid.begin(), tgrid.end());
                        for (double t : tgrid) {
                            const double lml = log_marginal_likelihood(fit_gp(spec, t, Xtr, ytr));
                            if (lml > best_lml) {
                                best_lml = lml;
                                tau2 = t;
                            }
                        }
                    }
                    const GPModel model = fit_gp(spec, tau2, Xtr, ytr);
                    const Posterior post = posterior_predict(model, Xte);
                    const std::vector<double> pred = to_std(post.mean);
                    records.push_back({s, config.data_types[ti], family, r_squared(yte, pred),
                                       rmsep(yte, pred), theta, tau2});
                }
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw std::runtime_error(error);

    ExperimentReport report;
    report.n_subjects = n;
    report.data_types = config.data_types;
    report.kernels = config.kernels;
    for (const auto& recs : per_split) {
        report.records.insert(report.records.end(), recs.begin(), recs.end());
    }

    // Per-cell aggregates in config order.
    for (const auto& type : config.data_types) {
        for (KernelFamily kernel : config.kernels) {
            std::vector<double> r2s, rms;
            for (const auto& r : report.records) {
                if (r.data_type == type && r.kernel == kernel) {
                    r2s.push_back(r.r2);
                    rms.push_back(r.rmsep);
                }
            }
            CellSummary cell;
            cell.data_type = type;
            cell.kernel = kernel;
            cell.mean_r2 = mean(r2s);
            cell.se_r2 = S > 1 ? sample_sd(r2s) / std::sqrt(static_cast<double>(S)) : 0.0;
            cell.mean_rmsep = mean(rms);
            report.cells.push_back(cell);
        }
    }

    // Optimal%: fraction of splits where a data type attains the split's
    // minimum RMSEP for that kernel; exact ties share the credit.
    for (KernelFamily kernel : config.kernels) {
        std::vector<double> credit(n_types, 0.0);
        for (int s = 0; s < S; ++s) {
            std::vector<double> rms(n_types);
            for (int ti = 0; ti < n_types; ++ti) {
                for (const auto& r : per_split[s]) {
                    if (r.data_type == config.data_types[ti] && r.kernel == kernel) {
                        rms[ti] = r.rmsep;
                    }
                }
            }
            const double lo = *std::min_element(rms.begin(), rms.end());
            int ties = 0;
            for (double v : rms) ties += (v == lo);
            for (int ti = 0; ti < n_types; ++ti) {
                if (rms[ti] == lo) credit[ti] += 1.0 / ties;
            }
        }
        for (int ti = 0; ti < n_types; ++ti) {
            for (auto& cell : report.cells) {
                if (cell.data_type == config.data_types[ti] && cell.kernel == kernel) {
                    cell.optimal_pct = 100.0 * credit[ti] / S;
                }
            }
        }
    }

    if (S > 1) {
        for (KernelFamily kernel : config.kernels) {
            for (int a = 0; a < n_types; ++a) {
                for (int b = 0; b < n_types; ++b) {
                    if (a == b) continue;
                    std::vector<double> diff(S);
                    for (int s = 0; s < S; ++s) {
                        double ra = 0.0, rb = 0.0;
                        for (const auto& r : per_split[s]) {
                            if (r.kernel != kernel) continue;
                            if (r.data_type == config.data_types[a]) ra = r.r2;
                            if (r.data_type == config.data_types[b]) rb = r.r2;
                        }
                        diff[s] = ra - rb;
                    }
                    PairedTest test;
                    test.kernel = kernel;
                    test.type_a = config.data_types[a];
                    test.type_b = config.data_types[b];
                    const double m = mean(diff);
                    const double sd = sample_sd(diff);
                    if (sd == 0.0) {
                        test.t = 0.0;
                        test.p = m > 0.0 ? 0.0 : (m < 0.0 ? 1.0 : 0.5);
                    } else {
                        test.t = m / (sd / std::sqrt(static_cast<double>(S)));
                        test.p = student_t_upper_p(test.t, S - 1);
                    }
                    report.tests.push_back(test);
                }
            }
        }
    }
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_report_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "data_type,kernel,mean_r2,se_r2,mean_rmsep,optimal_pct\n";
    for (const auto& c : report.cells) {
        out << c.data_type << "," << to_string(c.kernel) << "," << fmt(c.mean_r2) << ","
            << fmt(c.se_r2) << "," << fmt(c.mean_rmsep) << "," << fmt(c.optimal_pct) << "\n";
    }
}

void write_report_json(const ExperimentReport& report, const ExperimentConfig& config,
                       const std::string& path) {
    nlohmann::ordered_json j;
    j["version"] = std::string("sect ") + kVersion;
    auto& jc = j["config"];
    jc["manifest"] = config.manifest_path;
    jc["data_types"] = config.data_types;
    auto& jk = jc["kernels"] = nlohmann::ordered_json::array();
    for (KernelFamily k : config.kernels) jk.push_back(to_string(k));
    jc["folds"] = config.folds;
    jc["bandwidth_grid"] =
        config.bandwidth_grid.empty() ? default_bandwidth_grid() : config.bandwidth_grid;
    jc["splits"] = config.splits;
    jc["train_fraction"] = config.train_fraction;
    if (config.tau2.mode == Tau2Policy::Mode::fixed) {
        jc["tau2"] = {{"policy", "fixed"}, {"value", config.tau2.fixed}};
    } else {
        jc["tau2"] = {{"policy", "marginal"}, {"grid", config.tau2.grid}};
    }
    jc["seed"] = config.seed;
    jc["directions"] = config.directions;
    jc["levels"] = config.levels;
    jc["standardize_features"] = config.standardize_features;

    j["n_subjects"] = report.n_subjects;
    auto& cells = j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : report.cells) {
        cells.push_back({{"data_type", c.data_type},
                         {"kernel", to_string(c.kernel)},
                         {"mean_r2", c.mean_r2},
                         {"se_r2", c.se_r2},
                         {"mean_rmsep", c.mean_rmsep},
                         {"optimal_pct", c.optimal_pct}});
    }
    auto& tests = j["paired_tests"] = nlohmann::ordered_json::array();
    for (const auto& t : report.tests) {
        tests.push_back({{"kernel", to_string(t.kernel)},
                         {"better", t.type_a},
                         {"than", t.type_b},
                         {"t", t.t},
                         {"p_one_sided", t.p}});
    }
    auto& recs = j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : report.records) {
        nlohmann::ordered_json jr{{"split", r.split},
                                  {"data_type", r.data_type},
                                  {"kernel", to_string(r.kernel)},
                                  {"r2", r.r2},
                                  {"rmsep", r.rmsep},
                                  {"tau2", r.tau2}};
        if (std::isfinite(r.theta)) jr["theta"] = r.theta;
        recs.push_back(std::move(jr));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace sect
