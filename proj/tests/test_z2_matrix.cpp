#include <doctest.h>

#include "sect/stats.hpp"
#include "sect/z2_matrix.hpp"

using sect::Z2Matrix;

TEST_CASE("z2 get/set/clear round-trip") {
    Z2Matrix m(70, 3);  // spans two 64-bit words per column
    CHECK(m.rows() == 70);
    CHECK(m.cols() == 3);
    CHECK_FALSE(m.get(0, 0));
    m.set(0, 0);
    m.set(63, 1);
    m.set(64, 1);
    m.set(69, 2);
    CHECK(m.get(0, 0));
    CHECK(m.get(63, 1));
    CHECK(m.get(64, 1));
    CHECK(m.get(69, 2));
    CHECK_FALSE(m.get(1, 0));
    m.clear(63, 1);
    CHECK_FALSE(m.get(63, 1));
    CHECK(m.get(64, 1));
}

TEST_CASE("z2 rank of small matrices") {
    SUBCASE("zero matrix") {
        Z2Matrix m(4, 4);
        CHECK(m.rank() == 0);
    }
    SUBCASE("identity") {
        Z2Matrix m(3, 3);
        for (int i = 0; i < 3; ++i) m.set(i, i);
        CHECK(m.rank() == 3);
    }
    SUBCASE("dependent columns") {
        // col2 = col0 xor col1
        Z2Matrix m(3, 3);
        m.set(0, 0);
        m.set(1, 1);
        m.set(0, 2);
        m.set(1, 2);
        CHECK(m.rank() == 2);
    }
    SUBCASE("all ones 2x2 has rank 1") {
        Z2Matrix m(2, 2);
        m.set(0, 0);
        m.set(1, 0);
        m.set(0, 1);
        m.set(1, 1);
        CHECK(m.rank() == 1);
    }
}

TEST_CASE("z2 rank is preserved by column operations") {
    sect::Rng rng(991);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5 + rng.next_int(60);
        Z2Matrix m(n, n);
        for (int c = 0; c < n; ++c) {
            for (int r = 0; r < n; ++r) {
                if (rng.next_double() < 0.3) m.set(r, c);
            }
        }
        const int before = m.rank();
        Z2Matrix column_ops = m;
        for (int k = 0; k < 10; ++k) {
            const int dst = rng.next_int(n);
            int src = rng.next_int(n);
            if (src == dst) src = (src + 1) % n;
            column_ops.add_column(dst, src);
        }
        CHECK(column_ops.rank() == before);
    }
}

TEST_CASE("z2 add_column xors and column_low tracks the pivot") {
    Z2Matrix m(5, 2);
    m.set(1, 0);
    m.set(4, 0);
    m.set(4, 1);
    CHECK(m.column_low(0) == 4);
    CHECK(m.column_low(1) == 4);
    m.add_column(1, 0);  // col1 ^= col0 -> rows {1}
    CHECK(m.get(1, 1));
    CHECK_FALSE(m.get(4, 1));
    CHECK(m.column_low(1) == 1);
    m.add_column(1, 1);  // self-xor zeroes the column
    CHECK(m.column_low(1) == -1);
}

TEST_CASE("z2 multiply") {
    SUBCASE("identity is neutral") {
        sect::Rng rng(17);
        Z2Matrix a(6, 4);
        for (int c = 0; c < 4; ++c) {
            for (int r = 0; r < 6; ++r) {
                if (rng.next_double() < 0.5) a.set(r, c);
            }
        }
        Z2Matrix id(4, 4);
        for (int i = 0; i < 4; ++i) id.set(i, i);
        const Z2Matrix prod = sect::z2_multiply(a, id);
        for (int c = 0; c < 4; ++c) {
            for (int r = 0; r < 6; ++r) CHECK(prod.get(r, c) == a.get(r, c));
        }
    }
    SUBCASE("known 2x2 product") {
        // [1 1; 0 1] * [1 0; 1 1] = [0 1; 1 1] over Z2
        Z2Matrix a(2, 2), b(2, 2);
        a.set(0, 0);
        a.set(0, 1);
        a.set(1, 1);
        b.set(0, 0);
        b.set(1, 0);
        b.set(1, 1);
        const Z2Matrix p = sect::z2_multiply(a, b);
        CHECK_FALSE(p.get(0, 0));
        CHECK(p.get(1, 0));
        CHECK(p.get(0, 1));
        CHECK(p.get(1, 1));
    }
}
