#include "sect/stats.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sect {

std::uint64_t Rng::next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::next_int(int n) {
    if (n < 1) throw std::invalid_argument("next_int needs n >= 1");
    return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                             static_cast<unsigned __int128>(n)) >>
                            64);
}

double Rng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    Rng rng(seed ^ (0xA0761D6478BD642FULL * (stream + 1)));
    return rng.next_u64();
}

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean of an empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("sample sd needs at least 2 values");
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
    if (X.rows() < 2) throw std::invalid_argument("standardizer needs at least 2 rows");
    Standardizer s;
    const int p = static_cast<int>(X.cols());
    s.col_mean.resize(p);
    s.col_sd.resize(p);
    for (int j = 0; j < p; ++j) {
        s.col_mean[j] = X.col(j).mean();
        const double ss = (X.col(j).array() - s.col_mean[j]).square().sum();
        s.col_sd[j] = std::sqrt(ss / (X.rows() - 1));
        if (s.col_sd[j] > 0.0) s.kept.push_back(j);
    }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const {
    if (X.cols() != col_mean.size()) {
        throw std::invalid_argument("standardizer fitted on a different column count");
    }
    Eigen::MatrixXd out(X.rows(), static_cast<int>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const int j = kept[k];
        out.col(static_cast<int>(k)) = (X.col(j).array() - col_mean[j]) / col_sd[j];
    }
    return out;
}

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-15;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // The continued fraction converges fast for x < (a+1)/(a+b+2).
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                          b * std::log1p(-x) + a * std::log(x)) *
                     betacf(b, a, 1.0 - x) / b;
}

double student_t_upper_p(double t, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
    if (t < 0.0) return 1.0 - student_t_upper_p(-t, dof);
    const double x = dof / (dof + t * t);
    return 0.5 * incomplete_beta(dof / 2.0, 0.5, x);
}

}  // namespace sect
