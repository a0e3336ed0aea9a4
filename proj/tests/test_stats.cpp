#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "sect/stats.hpp"

using sect::Rng;

TEST_CASE("rng streams are deterministic") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(43);
    CHECK(Rng(42).next_u64() != c.next_u64());
}

TEST_CASE("rng uniform doubles live in the unit interval") {
    Rng rng(7);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("rng bounded integers cover their range") {
    Rng rng(11);
    CHECK(rng.next_int(1) == 0);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 14000; ++i) {
        const int v = rng.next_int(7);
        CHECK(v >= 0);
        CHECK(v < 7);
        ++counts[v];
    }
    for (int c : counts) CHECK(c > 1500);  // roughly uniform, expected 2000
}

TEST_CASE("rng gaussians have the right first two moments") {
    Rng rng(99);
    double s1 = 0.0, s2 = 0.0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        const double g = rng.next_gaussian();
        s1 += g;
        s2 += g * g;
    }
    CHECK(std::abs(s1 / n) < 0.02);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("shuffle is a seeded permutation") {
    std::vector<int> v(20);
    for (int i = 0; i < 20; ++i) v[i] = i;
    std::vector<int> w = v;
    Rng a(5), b(5);
    a.shuffle(v);
    b.shuffle(w);
    CHECK(v == w);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 20; ++i) CHECK(sorted[i] == i);
    std::vector<int> u(20);
    for (int i = 0; i < 20; ++i) u[i] = i;
    Rng c(6);
    c.shuffle(u);
    CHECK(u != v);
}

TEST_CASE("mix_seed decorrelates streams") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 100; ++s) seen.insert(sect::mix_seed(7, s));
    CHECK(seen.size() == 100);
    CHECK(sect::mix_seed(7, 3) == sect::mix_seed(7, 3));
    CHECK(sect::mix_seed(7, 3) != sect::mix_seed(8, 3));
}

TEST_CASE("mean and sample sd") {
    CHECK(sect::mean({1.0, 2.0, 3.0, 4.0}) == 2.5);
    CHECK(sect::sample_sd({1.0, 2.0, 3.0, 4.0}) ==
          doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
    CHECK(sect::sample_sd({2.0, 2.0}) == 0.0);
    CHECK_THROWS_AS(sect::mean({}), std::invalid_argument);
    CHECK_THROWS_AS(sect::sample_sd({1.0}), std::invalid_argument);
}

TEST_CASE("standardizer drops constant columns and reuses training stats") {
    Eigen::MatrixXd X(2, 3);
    X << 1.0, 5.0, 2.0,
         3.0, 5.0, 4.0;
    const sect::Standardizer st = sect::Standardizer::fit(X);
    CHECK(st.kept == std::vector<int>{0, 2});
    CHECK(st.dropped() == 1);
    CHECK(st.col_mean[0] == 2.0);
    CHECK(st.col_mean[1] == 5.0);
    CHECK(st.col_sd[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    const Eigen::MatrixXd Z = st.apply(X);
    REQUIRE(Z.cols() == 2);
    CHECK(Z(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(Z(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

    Eigen::MatrixXd fresh(1, 3);
    fresh << 2.0, 9.0, 9.0;  // the constant column's value is irrelevant
    const Eigen::MatrixXd F = st.apply(fresh);
    CHECK(F(0, 0) == 0.0);
    CHECK(F(0, 1) == doctest::Approx(6.0 / std::sqrt(2.0)).epsilon(1e-15));

    CHECK_THROWS_AS(sect::Standardizer::fit(Eigen::MatrixXd(1, 3)), std::invalid_argument);
}

TEST_CASE("incomplete beta hits closed forms") {
    CHECK(sect::incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(sect::incomplete_beta(2.0, 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(sect::incomplete_beta(3.0, 4.0, 0.0) == 0.0);
    CHECK(sect::incomplete_beta(3.0, 4.0, 1.0) == 1.0);
    // I_x(2, 1) = x^2
    CHECK(sect::incomplete_beta(2.0, 1.0, 0.7) == doctest::Approx(0.49).epsilon(1e-13));
}

TEST_CASE("student t upper tail matches references") {
    CHECK(sect::student_t_upper_p(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sect::student_t_upper_p(1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sect::student_t_upper_p(2.0, 10.0) ==
          doctest::Approx(0.036694017385370196).epsilon(1e-12));
    CHECK(sect::student_t_upper_p(1.8124611, 10.0) ==
          doctest::Approx(0.05000000186095758).epsilon(1e-12));
    CHECK(sect::student_t_upper_p(-1.5, 30.0) ==
          doctest::Approx(0.927967035435677).epsilon(1e-12));
    // Symmetry: P(T > t) + P(T > -t) = 1.
    CHECK(sect::student_t_upper_p(0.8, 12.0) + sect::student_t_upper_p(-0.8, 12.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
}
