#include "sect/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "sect/stats.hpp"

namespace sect {

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "linear") return KernelFamily::linear;
    if (name == "gaussian") return KernelFamily::gaussian;
    if (name == "cauchy") return KernelFamily::cauchy;
    throw std::invalid_argument("unknown kernel family: " + name);
}

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::linear: return "linear";
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::cauchy: return "cauchy";
    }
    throw std::logic_error("unreachable kernel family");
}

namespace {

void check_bandwidth(const KernelSpec& spec) {
    if (spec.family != KernelFamily::linear && !(spec.bandwidth > 0.0)) {
        throw std::invalid_argument("kernel bandwidth must be positive");
    }
}

double from_sq_dist(const KernelSpec& spec, double d2) {
    switch (spec.family) {
        case KernelFamily::gaussian: return std::exp(-d2 / (2.0 * spec.bandwidth));
        case KernelFamily::cauchy: return 1.0 / (1.0 + spec.bandwidth * d2);
        case KernelFamily::linear: break;
    }
    throw std::logic_error("squared-distance form undefined for the linear kernel");
}

double pair_eval(const KernelSpec& spec, const Eigen::MatrixXd& A, int i,
                 const Eigen::MatrixXd& B, int j) {
    if (spec.family == KernelFamily::linear) {
        return A.row(i).dot(B.row(j)) / A.cols();
    }
    return from_sq_dist(spec, (A.row(i) - B.row(j)).squaredNorm());
}

Eigen::MatrixXd gram_impl(const KernelSpec& spec, const Eigen::MatrixXd& X, bool parallel) {
    check_bandwidth(spec);
    if (X.rows() < 1) throw std::invalid_argument("gram matrix needs at least one row");
    const int n = static_cast<int>(X.rows());
    Eigen::MatrixXd G(n, n);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) G(i, j) = pair_eval(spec, X, i, X, j);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) G(i, j) = pair_eval(spec, X, i, X, j);
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) G(i, j) = G(j, i);
    }
    return G;
}

}  // namespace

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    check_bandwidth(spec);
    if (u.size() != v.size()) throw std::invalid_argument("kernel arguments differ in length");
    if (u.size() == 0) throw std::invalid_argument("kernel arguments are empty");
    if (spec.family == KernelFamily::linear) return u.dot(v) / u.size();
    return from_sq_dist(spec, (u - v).squaredNorm());
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X) {
    return gram_impl(spec, X, true);
}

Eigen::MatrixXd gram_matrix_serial(const KernelSpec& spec, const Eigen::MatrixXd& X) {
    return gram_impl(spec, X, false);
}

Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& B) {
    check_bandwidth(spec);
    if (A.cols() != B.cols()) throw std::invalid_argument("feature lengths differ");
    Eigen::MatrixXd K(A.rows(), B.rows());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < B.rows(); ++j) K(i, j) = pair_eval(spec, A, i, B, j);
    }
    return K;
}

GPModel fit_gp(const KernelSpec& spec, double tau2, const Eigen::MatrixXd& X,
               const Eigen::VectorXd& y) {
    check_bandwidth(spec);
    if (X.rows() < 1) throw std::invalid_argument("fit needs at least one training row");
    if (y.size() != X.rows()) throw std::invalid_argument("response length differs from row count");
    if (tau2 < 0.0) throw std::invalid_argument("noise variance must be >= 0");

    GPModel model;
    model.kernel = spec;
    model.tau2 = tau2;
    model.X = X;
    model.y = y;

    const Eigen::MatrixXd G = gram_matrix(spec, X);
    Eigen::MatrixXd A = G + tau2 * Eigen::MatrixXd::Identity(X.rows(), X.rows());
    model.llt.compute(A);
    if (model.llt.info() == Eigen::Success) return model;

    if (tau2 > 0.0) {
        for (double jitter = 1e-10; jitter <= 1e-4 * (1.0 + 1e-12); jitter *= 10.0) {
            model.llt.compute(A + jitter * Eigen::MatrixXd::Identity(X.rows(), X.rows()));
            if (model.llt.info() == Eigen::Success) {
                model.jitter = jitter;
                return model;
            }
        }
    }
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A)
                               .eigenvalues()
                               .minCoeff();
    throw std::runtime_error("covariance factorization failed, min eigenvalue " +
                             std::to_string(min_eig) + "; raise tau2");
}

Posterior posterior_predict(const GPModel& model, const Eigen::MatrixXd& Xt) {
    if (Xt.cols() != model.X.cols()) {
        throw std::invalid_argument("test feature length differs from training");
    }
    const Eigen::MatrixXd Kts = cross_gram(model.kernel, Xt, model.X);
    const Eigen::MatrixXd Ktt = gram_matrix(model.kernel, Xt);
    const Eigen::VectorXd alpha = model.llt.solve(model.y);
    Posterior post;
    post.mean = Kts * alpha;
    const Eigen::MatrixXd V = model.llt.solve(Kts.transpose());
    Eigen::MatrixXd cov = Ktt - Kts * V;
    post.cov = 0.5 * (cov + cov.transpose());
    return post;
}

double log_marginal_likelihood(const GPModel& model) {
    const Eigen::VectorXd alpha = model.llt.solve(model.y);
    const double quad = model.y.dot(alpha);
    const double logdet = 2.0 * model.llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double n = static_cast<double>(model.y.size());
    return -0.5 * quad - 0.5 * logdet - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

std::vector<double> default_bandwidth_grid() {
    std::vector<double> grid;
    grid.reserve(100);
    for (int i = 1; i <= 100; ++i) grid.push_back(i / 10.0);
    return grid;
}

double cv_bandwidth(KernelFamily family, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    int folds, const std::vector<double>& grid, double tau2,
                    std::uint64_t seed) {
    if (family == KernelFamily::linear) {
        throw std::invalid_argument("the linear kernel has no bandwidth to cross-validate");
    }
    if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
    const int n = static_cast<int>(X.rows());
    if (n < folds) {
        throw std::invalid_argument("fewer samples than folds: " + std::to_string(n) + " < " +
                                    std::to_string(folds));
    }
    if (grid.empty()) throw std::invalid_argument("empty bandwidth grid");
    std::vector<double> thetas = grid;
    std::sort(thetas.begin(), thetas.end());
    for (double t : thetas) {
        if (!(t > 0.0)) throw std::invalid_argument("bandwidth grid entries must be positive");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<int> fold_of(n);
    for (int i = 0; i < n; ++i) fold_of[order[i]] = i % folds;

    // Pairwise squared distances once; each bandwidth only rescales them.
    Eigen::MatrixXd D2(n, n);
    for (int i = 0; i < n; ++i) {
        D2(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            D2(i, j) = D2(j, i) = (X.row(i) - X.row(j)).squaredNorm();
        }
    }

    std::vector<double> score(thetas.size());
    const int grid_n = static_cast<int>(thetas.size());
#pragma omp parallel for schedule(static)
    for (int g = 0; g < grid_n; ++g) {
        const KernelSpec spec{family, thetas[g]};
        Eigen::MatrixXd G(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) G(i, j) = from_sq_dist(spec, D2(i, j));
        }
        double total = 0.0;
        for (int f = 0; f < folds; ++f) {
            std::vector<int> train, test;
            for (int i = 0; i < n; ++i) (fold_of[i] == f ? test : train).push_back(i);
            const int ntr = static_cast<int>(train.size());
            const int nte = static_cast<int>(test.size());
            Eigen::MatrixXd A(ntr, ntr);
            Eigen::VectorXd ytr(ntr);
            for (int i = 0; i < ntr; ++i) {
                ytr[i] = y[train[i]];
                for (int j = 0; j < ntr; ++j) A(i, j) = G(train[i], train[j]);
                A(i, i) += tau2;
            }
            Eigen::LLT<Eigen::MatrixXd> llt(A);
            if (llt.info() != Eigen::Success) {
                total = std::numeric_limits<double>::infinity();
                break;
            }
            const Eigen::VectorXd alpha = llt.solve(ytr);
            double sq = 0.0;
            for (int i = 0; i < nte; ++i) {
                double pred = 0.0;
                for (int j = 0; j < ntr; ++j) pred += G(test[i], train[j]) * alpha[j];
                const double d = pred - y[test[i]];
                sq += d * d;
            }
            total += std::sqrt(sq / nte);
        }
        score[g] = total / folds;
    }

    int best = 0;
    for (int g = 1; g < grid_n; ++g) {
        if (score[g] < score[best]) best = g;
    }
    return thetas[best];
}

double r_squared(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size()) throw std::invalid_argument("length mismatch");
    const int n = static_cast<int>(y_true.size());
    if (n < 2) throw std::invalid_argument("R^2 needs at least 2 points");
    const double mt = mean(y_true);
    const double mp = mean(y_pred);
    double st = 0.0, sp = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dt = y_true[i] - mt;
        const double dp = y_pred[i] - mp;
        st += dt * dt;
        sp += dp * dp;
        cross += dt * dp;
    }
    if (st == 0.0) throw std::invalid_argument("R^2 undefined for a constant y_true");
    if (sp == 0.0) return 0.0;
    // Rounding can push |r| a hair past 1 when the fit is exact; the squared
    // correlation itself never exceeds 1.
    const double r = cross / std::sqrt(st * sp);
    return std::min(r * r, 1.0);
}

double rmsep(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size()) throw std::invalid_argument("length mismatch");
    if (y_true.empty()) throw std::invalid_argument("RMSEP of empty vectors");
    double sq = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double d = y_pred[i] - y_true[i];
        sq += d * d;
    }
    return std::sqrt(sq / y_true.size());
}

}  // namespace sect
