#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sect/experiment.hpp"
#include "sect/gp.hpp"
#include "sect/ingest.hpp"
#include "sect/persistence.hpp"
#include "sect/sect_transform.hpp"
#include "sect/stats.hpp"
#include "sect/synthetic.hpp"

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Either "x,y" / "x,y,z" components or a plain number in degrees (2D only).
sect::Direction parse_direction(const std::string& text, int dim) {
    if (text.find(',') == std::string::npos) {
        if (dim != 2) {
            throw std::runtime_error("an angle only names a 2D direction; use x,y,z for 3D");
        }
        const double deg = std::stod(text);
        const double rad = deg * std::numbers::pi / 180.0;
        return sect::make_direction({std::cos(rad), std::sin(rad), 0.0}, 2);
    }
    std::array<double, 3> v{0.0, 0.0, 0.0};
    std::stringstream ss(text);
    std::string cell;
    int i = 0;
    while (std::getline(ss, cell, ',')) {
        if (i >= dim) throw std::runtime_error("too many direction components for dimension " +
                                               std::to_string(dim));
        v[i++] = std::stod(cell);
    }
    if (i != dim) throw std::runtime_error("direction needs " + std::to_string(dim) + " components");
    return sect::make_direction(v, dim);
}

struct GpTable {
    std::vector<std::string> ids;
    std::vector<double> y;
    bool has_y = false;
    Eigen::MatrixXd X;
};

// CSV with a header; an optional leading "id" column, an optional "y" column,
// remaining columns are features.
GpTable load_gp_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            out.push_back(cell);
        }
        return out;
    };
    const std::vector<std::string> header = split(line);
    int id_col = -1, y_col = -1;
    std::vector<int> feature_cols;
    for (int c = 0; c < static_cast<int>(header.size()); ++c) {
        if (header[c] == "id" && id_col < 0) {
            id_col = c;
        } else if (header[c] == "y" && y_col < 0) {
            y_col = c;
        } else {
            feature_cols.push_back(c);
        }
    }
    if (feature_cols.empty()) throw std::runtime_error(path + ": no feature columns");

    GpTable t;
    t.has_y = y_col >= 0;
    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " cells");
        }
        t.ids.push_back(id_col >= 0 ? cells[id_col] : "row" + std::to_string(line_no - 1));
        if (y_col >= 0) t.y.push_back(std::stod(cells[y_col]));
        std::vector<double> row;
        for (int c : feature_cols) row.push_back(std::stod(cells[c]));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");
    t.X.resize(static_cast<int>(rows.size()), static_cast<int>(feature_cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            t.X(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
        }
    }
    return t;
}

int run_compute(const std::string& input, int directions, int levels, const std::string& out,
                const std::string& id) {
    const sect::SimplicialComplex K = sect::load_shape(input);
    const std::vector<sect::Direction> dirs = sect::direction_set(directions, K.dim);
    sect::SECTProfile P = sect::sect_profile(K, dirs, levels);
    P.source_id = id.empty() ? fs::path(input).stem().string() : id;
    sect::save_profile(out, P);
    std::cout << "wrote " << out << " (" << directions << " directions x " << levels
              << " levels)\n";
    return 0;
}

int run_curve(const std::string& input, const std::string& direction, int levels,
              const std::string& out) {
    const sect::SimplicialComplex K = sect::load_shape(input);
    const sect::Direction nu = parse_direction(direction, K.dim);
    const sect::ECCurve ec = sect::ec_curve(K, nu, levels);
    const std::vector<double> Z = sect::center_curve(ec);
    const sect::SECCurve F = sect::smooth_curve(Z, nu, ec.a, ec.b);
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    os << "threshold,ec,z,f\n";
    for (int j = 0; j < levels; ++j) {
        os << fmt(ec.threshold(j)) << "," << ec.samples[j] << "," << fmt(Z[j]) << ","
           << fmt(F.samples[j]) << "\n";
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

int run_distance(const std::string& a, const std::string& b) {
    const sect::SECTProfile P = sect::load_profile(a);
    const sect::SECTProfile Q = sect::load_profile(b);
    std::cout << fmt(sect::sect_distance(P, Q)) << "\n";
    return 0;
}

int run_barcode(const std::string& input, const std::string& direction, const std::string& out) {
    const sect::SimplicialComplex K = sect::load_shape(input);
    const sect::Direction nu = parse_direction(direction, K.dim);
    std::vector<double> heights(K.vertices.size());
    for (std::size_t i = 0; i < K.vertices.size(); ++i) heights[i] = sect::height(K.vertices[i], nu);
    const sect::Barcode bars = sect::compute_barcode(sect::lower_star_filtration(K, heights));
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out.empty()) {
        file.open(out);
        if (!file) throw std::runtime_error("cannot write " + out);
        os = &file;
    }
    *os << "degree,birth,death\n";
    for (const auto& bar : bars.intervals) {
        *os << bar.degree << "," << fmt(bar.birth) << ",";
        if (std::isinf(bar.death)) {
            *os << "inf\n";
        } else {
            *os << fmt(bar.death) << "\n";
        }
    }
    if (!out.empty()) std::cout << "wrote " << out << "\n";
    return 0;
}

int run_gp(const std::string& train_path, const std::string& test_path, const std::string& kernel,
           double theta, bool cv, double tau2, int folds, std::uint64_t seed,
           const std::string& out, bool standardize) {
    const GpTable train = load_gp_table(train_path);
    const GpTable test = load_gp_table(test_path);
    if (!train.has_y) throw std::runtime_error(train_path + ": training table needs a 'y' column");
    if (train.X.cols() != test.X.cols()) {
        throw std::runtime_error("train and test feature counts differ");
    }

    const double y_mean = sect::mean(train.y);
    const double y_sd = sect::sample_sd(train.y);
    if (y_sd == 0.0) throw std::runtime_error("constant training response");
    Eigen::VectorXd ytr(train.y.size());
    for (std::size_t i = 0; i < train.y.size(); ++i) ytr[static_cast<int>(i)] = (train.y[i] - y_mean) / y_sd;

    Eigen::MatrixXd Xtr = train.X, Xte = test.X;
    if (standardize) {
        const sect::Standardizer cols = sect::Standardizer::fit(Xtr);
        if (cols.kept.empty()) throw std::runtime_error("all feature columns are constant");
        if (cols.dropped() > 0) {
            std::cerr << "note: dropped " << cols.dropped() << " constant feature columns\n";
        }
        Xtr = cols.apply(Xtr);
        Xte = cols.apply(Xte);
    }

    const sect::KernelFamily family = sect::kernel_family_from_string(kernel);
    sect::KernelSpec spec{family, theta};
    if (cv && family != sect::KernelFamily::linear) {
        spec.bandwidth = sect::cv_bandwidth(family, Xtr, ytr, folds,
                                            sect::default_bandwidth_grid(), tau2, seed);
        std::cout << "cv bandwidth: " << fmt(spec.bandwidth) << "\n";
    }
    const sect::GPModel model = sect::fit_gp(spec, tau2, Xtr, ytr);
    const sect::Posterior post = sect::posterior_predict(model, Xte);

    std::vector<double> pred_raw(post.mean.size());
    for (int i = 0; i < post.mean.size(); ++i) pred_raw[i] = y_mean + y_sd * post.mean[i];
    auto emit = [&](std::ostream& os) {
        os << "id,mean,sd\n";
        for (int i = 0; i < post.mean.size(); ++i) {
            const double var = std::max(0.0, post.cov(i, i));
            os << test.ids[i] << "," << fmt(pred_raw[i]) << "," << fmt(y_sd * std::sqrt(var))
               << "\n";
        }
    };
    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw std::runtime_error("cannot write " + out);
        emit(os);
        std::cout << "wrote " << out << "\n";
    } else {
        emit(std::cout);
    }
    if (test.has_y) {
        std::cout << "r2 " << fmt(sect::r_squared(test.y, pred_raw)) << "\n";
        std::cout << "rmsep " << fmt(sect::rmsep(test.y, pred_raw)) << "\n";
    }
    return 0;
}

int run_experiment_cmd(const std::string& config_path) {
    const sect::ExperimentConfig config = sect::load_experiment_config(config_path);
    if (config.out_dir.empty()) throw std::runtime_error("config needs an out_dir");
    const sect::ExperimentReport report = sect::run_experiment(config);
    fs::create_directories(config.out_dir);
    sect::write_report_csv(report, (fs::path(config.out_dir) / "report.csv").string());
    sect::write_report_json(report, config, (fs::path(config.out_dir) / "report.json").string());
    for (const auto& c : report.cells) {
        std::printf("%-12s %-9s mean R2 %.4f (SE %.4f)  RMSEP %.4f  optimal %.1f%%\n",
                    c.data_type.c_str(), sect::to_string(c.kernel).c_str(), c.mean_r2, c.se_r2,
                    c.mean_rmsep, c.optimal_pct);
    }
    std::cout << "wrote " << (fs::path(config.out_dir) / "report.csv").string() << " and "
              << (fs::path(config.out_dir) / "report.json").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smooth Euler characteristic transform toolkit"};
    app.set_version_flag("--version", std::string("sect ") + sect::kVersion);
    app.require_subcommand(1);

    std::string input, out, id, direction, a_path, b_path;
    int directions = 72, levels = 100;

    auto* compute = app.add_subcommand("compute", "Compute a SECT profile for one shape");
    compute->add_option("--input", input, "Mask (.csv/.pgm), mesh (.off), or complex (.json)")
        ->required();
    compute->add_option("--directions", directions, "Direction count");
    compute->add_option("--levels", levels, "Threshold count per direction");
    std::string compute_out = "profile.json";
    compute->add_option("--out", compute_out, "Output profile path");
    compute->add_option("--id", id, "Source id stored in the profile");

    auto* curve = app.add_subcommand("curve", "Dump one direction's EC/SEC curve as CSV");
    curve->add_option("--input", input, "Shape file")->required();
    curve->add_option("--direction", direction, "Angle in degrees, or x,y[,z]")->required();
    curve->add_option("--levels", levels, "Threshold count");
    std::string curve_out = "curve.csv";
    curve->add_option("--out", curve_out, "Output CSV path");

    auto* distance = app.add_subcommand("distance", "SECT distance between two profiles");
    distance->add_option("--a", a_path, "First profile")->required();
    distance->add_option("--b", b_path, "Second profile")->required();

    auto* barcode = app.add_subcommand("barcode", "Sublevel persistence barcode for one direction");
    barcode->add_option("--input", input, "Shape file")->required();
    barcode->add_option("--direction", direction, "Angle in degrees, or x,y[,z]")->required();
    std::string barcode_out;
    barcode->add_option("--out", barcode_out, "Output CSV path (stdout when omitted)");

    auto* gp = app.add_subcommand("gp", "Gaussian-process regression on feature tables");
    std::string train_path, test_path, kernel = "gaussian";
    double theta = 1.0, tau2 = 0.1;
    int folds = 10;
    std::uint64_t seed = 0;
    bool cv = false, no_standardize = false;
    gp->add_option("--train", train_path, "Training CSV with a y column")->required();
    gp->add_option("--test", test_path, "Test CSV")->required();
    gp->add_option("--kernel", kernel, "linear, gaussian, or cauchy");
    gp->add_option("--theta", theta, "Kernel bandwidth");
    gp->add_flag("--cv", cv, "Select the bandwidth by 10-fold cross-validation");
    gp->add_option("--tau2", tau2, "Noise variance");
    gp->add_option("--folds", folds, "Cross-validation folds");
    gp->add_option("--seed", seed, "Fold-assignment seed");
    std::string gp_out;
    gp->add_option("--out", gp_out, "Prediction CSV path");
    gp->add_flag("--no-standardize", no_standardize, "Skip feature standardization");

    auto* experiment = app.add_subcommand("experiment", "Run the repeated-split protocol");
    std::string config_path;
    experiment->add_option("--config", config_path, "Experiment config JSON")->required();

    auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort");
    int n = 60;
    std::uint64_t synth_seed = 7;
    std::string synth_out = "cohort";
    synth->add_option("--n", n, "Subject count");
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--out", synth_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) return run_compute(input, directions, levels, compute_out, id);
        if (curve->parsed()) return run_curve(input, direction, levels, curve_out);
        if (distance->parsed()) return run_distance(a_path, b_path);
        if (barcode->parsed()) return run_barcode(input, direction, barcode_out);
        if (gp->parsed()) {
            return run_gp(train_path, test_path, kernel, theta, cv, tau2, folds, seed, gp_out,
                          !no_standardize);
        }
        if (experiment->parsed()) return run_experiment_cmd(config_path);
        if (synth->parsed()) {
            const std::string manifest = sect::generate_synthetic_cohort(n, synth_seed, synth_out);
            std::cout << "wrote " << manifest << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
