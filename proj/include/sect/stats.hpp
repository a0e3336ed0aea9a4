#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace sect {

/// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
/// needed so results are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double next_double();
    /// Uniform integer in [0, n), n >= 1.
    int next_int(int n);
    /// Standard normal via Box-Muller; generates in pairs.
    double next_gaussian();

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            std::swap(v[i], v[next_int(i + 1)]);
        }
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Decorrelates a master seed into per-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

double mean(const std::vector<double>& v);
/// Sample standard deviation with the n-1 denominator.
double sample_sd(const std::vector<double>& v);

/// Column-wise standardization fitted on training rows: subtract the mean,
/// divide by the sample standard deviation. Zero-variance columns are dropped.
struct Standardizer {
    Eigen::VectorXd col_mean;
    Eigen::VectorXd col_sd;
    std::vector<int> kept;

    static Standardizer fit(const Eigen::MatrixXd& X);
    Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
    int dropped() const { return static_cast<int>(col_mean.size() - kept.size()); }
};

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// One-sided upper tail P(T > t) of Student's t with the given degrees of
/// freedom.
double student_t_upper_p(double t, double dof);

}  // namespace sect
