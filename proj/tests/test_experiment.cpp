#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sect/experiment.hpp"
#include "sect/ingest.hpp"
#include "sect/synthetic.hpp"

using sect::ExperimentConfig;
using sect::ExperimentReport;
using sect::KernelFamily;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "sect_experiment_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// One generated cohort shared by the test cases below.
const std::string& cohort_manifest() {
    static const std::string manifest = [] {
        const fs::path dir = scratch_dir() / "cohort";
        return sect::generate_synthetic_cohort(12, 21, dir.string());
    }();
    return manifest;
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.manifest_path = cohort_manifest();
    cfg.data_types = {"sect", "noise"};
    cfg.kernels = {KernelFamily::gaussian};
    cfg.folds = 5;
    cfg.bandwidth_grid = {0.5, 1.0, 2.0, 4.0};
    cfg.splits = 8;
    cfg.seed = 4;
    cfg.directions = 12;
    cfg.levels = 20;
    return cfg;
}

}  // namespace

TEST_CASE("synthetic cohorts are valid datasets and regenerate identically") {
    const std::string manifest = cohort_manifest();
    CHECK(fs::exists(manifest));
    const sect::Dataset ds = sect::load_dataset(manifest);
    REQUIRE(ds.subjects.size() == 12);
    CHECK(ds.subjects[0].id == "s000");
    CHECK(ds.subjects[11].id == "s011");
    for (const auto& s : ds.subjects) {
        CHECK(s.has_response);
        CHECK(s.mask_paths.size() == 1);
        CHECK(sect::load_mask(s.mask_paths[0]).foreground_count() > 0);
    }
    const Eigen::MatrixXd& noise = ds.covariates.at("noise");
    CHECK(noise.rows() == 12);
    CHECK(noise.cols() == 10);

    // The generator logs its parameters next to the data.
    const fs::path dir = fs::path(manifest).parent_path();
    nlohmann::json params;
    std::ifstream(dir / "params.json") >> params;
    CHECK(params.at("n") == 12);
    CHECK(params.at("subjects").size() == 12);

    const fs::path again = scratch_dir() / "cohort_again";
    sect::generate_synthetic_cohort(12, 21, again.string());
    CHECK(slurp((again / "manifest.json").string()) == slurp(manifest));
    CHECK(slurp((again / "noise.csv").string()) == slurp((dir / "noise.csv").string()));

    CHECK_THROWS_AS(sect::generate_synthetic_cohort(5, 1, (scratch_dir() / "tiny").string()),
                    std::invalid_argument);
}

TEST_CASE("run_experiment produces a complete, deterministic report") {
    const ExperimentConfig cfg = small_config();
    const ExperimentReport report = sect::run_experiment(cfg);

    CHECK(report.n_subjects == 12);
    REQUIRE(report.cells.size() == 2);
    CHECK(report.records.size() == 8 * 2);  // splits x types x kernels
    for (const auto& r : report.records) {
        CHECK(std::isfinite(r.r2));
        CHECK(r.r2 >= 0.0);
        CHECK(r.r2 <= 1.0);
        CHECK(r.rmsep >= 0.0);
        CHECK(r.tau2 == 0.1);
        CHECK((r.theta == 0.5 || r.theta == 1.0 || r.theta == 2.0 || r.theta == 4.0));
    }

    double optimal_total = 0.0;
    for (const auto& c : report.cells) optimal_total += c.optimal_pct;
    CHECK(optimal_total == doctest::Approx(100.0).epsilon(1e-12));

    CHECK(report.cell("sect", KernelFamily::gaussian).data_type == "sect");
    CHECK_THROWS_AS(report.cell("sect", KernelFamily::cauchy), std::out_of_range);
    REQUIRE(report.tests.size() == 2);
    for (const auto& t : report.tests) {
        CHECK(t.p >= 0.0);
        CHECK(t.p <= 1.0);
    }

    // Rerunning the identical config reproduces the report files byte for byte.
    const ExperimentReport rerun = sect::run_experiment(cfg);
    const std::string j1 = (scratch_dir() / "r1.json").string();
    const std::string j2 = (scratch_dir() / "r2.json").string();
    sect::write_report_json(report, cfg, j1);
    sect::write_report_json(rerun, cfg, j2);
    CHECK(slurp(j1) == slurp(j2));
    const std::string c1 = (scratch_dir() / "r1.csv").string();
    sect::write_report_csv(report, c1);
    const std::string csv = slurp(c1);
    CHECK(csv.rfind("data_type,kernel,mean_r2,se_r2,mean_rmsep,optimal_pct\n", 0) == 0);
    CHECK(csv.find("sect,gaussian,") != std::string::npos);
}

TEST_CASE("a single data type owns all the optimal credit") {
    ExperimentConfig cfg = small_config();
    cfg.data_types = {"noise"};
    cfg.splits = 4;
    const ExperimentReport report = sect::run_experiment(cfg);
    REQUIRE(report.cells.size() == 1);
    CHECK(report.cells[0].optimal_pct == 100.0);
    CHECK(report.tests.empty());  // nothing to compare against
}

TEST_CASE("identical data types split ties evenly and never differ") {
    // Register the same noise table twice under two names.
    const fs::path dir = scratch_dir() / "twin";
    fs::create_directories(dir / "masks");
    nlohmann::json manifest;
    std::ifstream(cohort_manifest()) >> manifest;
    manifest["covariates"]["noise2"] = "noise.csv";
    const fs::path src = fs::path(cohort_manifest()).parent_path();
    for (const auto& entry : fs::directory_iterator(src / "masks")) {
        fs::copy_file(entry.path(), dir / "masks" / entry.path().filename(),
                      fs::copy_options::overwrite_existing);
    }
    fs::copy_file(src / "noise.csv", dir / "noise.csv", fs::copy_options::overwrite_existing);
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";

    ExperimentConfig cfg = small_config();
    cfg.manifest_path = (dir / "manifest.json").string();
    cfg.data_types = {"noise", "noise2"};
    cfg.splits = 6;
    const ExperimentReport report = sect::run_experiment(cfg);

    const auto& a = report.cell("noise", KernelFamily::gaussian);
    const auto& b = report.cell("noise2", KernelFamily::gaussian);
    CHECK(a.mean_r2 == b.mean_r2);
    CHECK(a.mean_rmsep == b.mean_rmsep);
    CHECK(a.optimal_pct == 50.0);
    CHECK(b.optimal_pct == 50.0);
    for (const auto& t : report.tests) {
        CHECK(t.t == 0.0);
        CHECK(t.p == 0.5);
    }
}

TEST_CASE("marginal tau2 picks grid values by training likelihood") {
    ExperimentConfig cfg = small_config();
    cfg.data_types = {"noise"};
    cfg.splits = 3;
    cfg.tau2.mode = sect::Tau2Policy::Mode::marginal;
    cfg.tau2.grid = {0.01, 0.1, 1.0};
    const ExperimentReport report = sect::run_experiment(cfg);
    for (const auto& r : report.records) {
        CHECK((r.tau2 == 0.01 || r.tau2 == 0.1 || r.tau2 == 1.0));
    }
    const ExperimentReport again = sect::run_experiment(cfg);
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        CHECK(report.records[i].tau2 == again.records[i].tau2);
        CHECK(report.records[i].r2 == again.records[i].r2);
    }
}

TEST_CASE("experiment configs load from json with defaults") {
    const fs::path dir = scratch_dir() / "configs";
    fs::create_directories(dir);
    auto put = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir / name);
        out << content;
        return (dir / name).string();
    };

    const std::string good = put("good.json", R"({
      "manifest": "../cohort/manifest.json",
      "data_types": ["sect", "noise"],
      "kernels": ["gaussian", "cauchy", "linear"],
      "splits": 50,
      "seed": 9,
      "tau2": 0.25,
      "out_dir": "out"
    })");
    cohort_manifest();  // materialize the file the relative path points at
    const ExperimentConfig cfg = sect::load_experiment_config(good);
    CHECK(cfg.data_types == std::vector<std::string>{"sect", "noise"});
    REQUIRE(cfg.kernels.size() == 3);
    CHECK(cfg.kernels[2] == KernelFamily::linear);
    CHECK(cfg.folds == 10);
    CHECK(cfg.bandwidth_grid.empty());
    CHECK(cfg.splits == 50);
    CHECK(cfg.train_fraction == 0.8);
    CHECK(cfg.tau2.mode == sect::Tau2Policy::Mode::fixed);
    CHECK(cfg.tau2.fixed == 0.25);
    CHECK(cfg.seed == 9);
    CHECK(cfg.directions == 72);
    CHECK(cfg.levels == 100);
    CHECK(cfg.standardize_features);
    CHECK(fs::path(cfg.manifest_path).filename() == "manifest.json");
    CHECK(fs::path(cfg.out_dir).filename() == "out");

    const ExperimentConfig marginal = sect::load_experiment_config(put("marginal.json", R"({
      "manifest": "../cohort/manifest.json",
      "data_types": ["noise"],
      "kernels": ["gaussian"],
      "tau2_policy": "marginal",
      "tau2_grid": [0.01, 0.1]
    })"));
    CHECK(marginal.tau2.mode == sect::Tau2Policy::Mode::marginal);
    CHECK(marginal.tau2.grid == std::vector<double>{0.01, 0.1});

    CHECK_THROWS_AS(sect::load_experiment_config((dir / "absent.json").string()),
                    std::runtime_error);
    CHECK_THROWS_AS(sect::load_experiment_config(put("nokernels.json", R"({
      "manifest": "../cohort/manifest.json", "data_types": ["noise"], "kernels": []
    })")),
                    std::runtime_error);
    CHECK_THROWS_AS(sect::load_experiment_config(put("badfrac.json", R"({
      "manifest": "../cohort/manifest.json", "data_types": ["noise"],
      "kernels": ["gaussian"], "train_fraction": 1.5
    })")),
                    std::runtime_error);
    CHECK_THROWS_AS(sect::load_experiment_config(put("badkernel.json", R"({
      "manifest": "../cohort/manifest.json", "data_types": ["noise"], "kernels": ["rbf"]
    })")),
                    std::invalid_argument);
}

TEST_CASE("run_experiment rejects impossible protocols") {
    SUBCASE("unknown covariate name") {
        ExperimentConfig cfg = small_config();
        cfg.data_types = {"sect", "mystery"};
        CHECK_THROWS_AS(sect::run_experiment(cfg), std::runtime_error);
    }
    SUBCASE("too few subjects") {
        nlohmann::json manifest;
        std::ifstream(cohort_manifest()) >> manifest;
        manifest["subjects"] = std::vector<nlohmann::json>(manifest["subjects"].begin(),
                                                           manifest["subjects"].begin() + 5);
        manifest.erase("covariates");
        const fs::path dir = fs::path(cohort_manifest()).parent_path();
        std::ofstream(dir / "small_manifest.json") << manifest.dump(2);
        ExperimentConfig cfg = small_config();
        cfg.manifest_path = (dir / "small_manifest.json").string();
        cfg.data_types = {"sect"};
        CHECK_THROWS_AS(sect::run_experiment(cfg), std::runtime_error);
    }
    SUBCASE("folds larger than the training part") {
        ExperimentConfig cfg = small_config();
        cfg.folds = 11;  // train part has 10 subjects
        CHECK_THROWS_AS(sect::run_experiment(cfg), std::runtime_error);
    }
}
