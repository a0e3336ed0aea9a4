#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace sect {

enum class KernelFamily { linear, gaussian, cauchy };

KernelFamily kernel_family_from_string(const std::string& name);
std::string to_string(KernelFamily family);

/// Kernel with optional bandwidth. The bandwidth is ignored by the linear
/// family; it must be positive for the others.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double bandwidth = 1.0;
};

/// linear: u.v / p; gaussian: exp(-|u-v|^2 / (2 theta));
/// cauchy: 1 / (1 + theta |u-v|^2).
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Symmetric Gram matrix over the rows of X. Entries are evaluated pairwise
/// in a fixed order, so serial and parallel versions agree bitwise.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X);
Eigen::MatrixXd gram_matrix_serial(const KernelSpec& spec, const Eigen::MatrixXd& X);

/// Rectangular kernel matrix between the rows of A and the rows of B.
Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& B);

struct GPModel {
    KernelSpec kernel;
    double tau2 = 0.1;
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    Eigen::LLT<Eigen::MatrixXd> llt;
    /// Diagonal jitter that was needed to factorize, 0 in the normal case.
    double jitter = 0.0;
};

/// Factorizes gram(X) + tau2 I. When tau2 > 0 a failing factorization is
/// retried with escalating diagonal jitter (1e-10 up to 1e-4); with tau2 = 0
/// failure is immediate and reports the minimum eigenvalue.
GPModel fit_gp(const KernelSpec& spec, double tau2, const Eigen::MatrixXd& X,
               const Eigen::VectorXd& y);

struct Posterior {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/// mean = K_TS (K_SS + tau2 I)^-1 y,
/// cov  = K_TT - K_TS (K_SS + tau2 I)^-1 K_ST, symmetrized.
Posterior posterior_predict(const GPModel& model, const Eigen::MatrixXd& Xt);

double log_marginal_likelihood(const GPModel& model);

/// The 100-point grid 0.1, 0.2, ..., 10.0.
std::vector<double> default_bandwidth_grid();

/// Bandwidth minimizing mean out-of-fold RMSEP over the grid; ties go to the
/// smaller bandwidth. Folds come from a seeded shuffle dealt round-robin.
double cv_bandwidth(KernelFamily family, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    int folds, const std::vector<double>& grid, double tau2,
                    std::uint64_t seed);

/// Squared Pearson correlation. Errors on constant y_true; a constant
/// prediction has no linear association and scores 0.
double r_squared(const std::vector<double>& y_true, const std::vector<double>& y_pred);
double rmsep(const std::vector<double>& y_true, const std::vector<double>& y_pred);

}  // namespace sect
