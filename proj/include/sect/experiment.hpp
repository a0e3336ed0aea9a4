#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sect/gp.hpp"

namespace sect {

/// Noise-variance policy: a fixed value, or per-split selection by training
/// marginal likelihood over a grid.
struct Tau2Policy {
    enum class Mode { fixed, marginal };
    Mode mode = Mode::fixed;
    double fixed = 0.1;
    std::vector<double> grid = {1e-3, 1e-2, 1e-1, 1.0};
};

struct ExperimentConfig {
    std::string manifest_path;
    /// Covariate names from the manifest; "sect" means features computed from
    /// the subjects' shapes.
    std::vector<std::string> data_types;
    std::vector<KernelFamily> kernels;
    int folds = 10;
    std::vector<double> bandwidth_grid;  // empty = default 0.1..10 step 0.1
    int splits = 1000;
    double train_fraction = 0.8;
    Tau2Policy tau2;
    std::uint64_t seed = 0;
    std::string out_dir;
    int directions = 72;
    int levels = 100;
    bool standardize_features = true;
};

ExperimentConfig load_experiment_config(const std::string& path);

struct SplitRecord {
    int split = 0;
    std::string data_type;
    KernelFamily kernel = KernelFamily::gaussian;
    double r2 = 0.0;
    double rmsep = 0.0;
    double theta = 0.0;  // NaN for the linear kernel
    double tau2 = 0.0;
};

struct CellSummary {
    std::string data_type;
    KernelFamily kernel = KernelFamily::gaussian;
    double mean_r2 = 0.0;
    double se_r2 = 0.0;
    double mean_rmsep = 0.0;
    double optimal_pct = 0.0;
};

/// Paired one-sided test on per-split R^2 differences, type_a minus type_b.
struct PairedTest {
    KernelFamily kernel = KernelFamily::gaussian;
    std::string type_a;
    std::string type_b;
    double t = 0.0;
    double p = 0.0;
};

struct ExperimentReport {
    int n_subjects = 0;
    std::vector<std::string> data_types;
    std::vector<KernelFamily> kernels;
    std::vector<CellSummary> cells;
    std::vector<SplitRecord> records;
    std::vector<PairedTest> tests;

    const CellSummary& cell(const std::string& data_type, KernelFamily kernel) const;
};

/// Repeated-split protocol: for each seeded split, standardize the response
/// and features on the training part, cross-validate the bandwidth, fit,
/// predict, and score. Deterministic for a fixed config and seed regardless
/// of worker count.
ExperimentReport run_experiment(const ExperimentConfig& config);

void write_report_csv(const ExperimentReport& report, const std::string& path);
void write_report_json(const ExperimentReport& report, const ExperimentConfig& config,
                       const std::string& path);

extern const char* const kVersion;

}  // namespace sect
