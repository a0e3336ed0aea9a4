#pragma once

#include <cstdint>
#include <vector>

namespace sect {

/// Dense bit-packed matrix over the binary field, stored column-major.
/// Used for boundary matrices of chain complexes and their rank computations.
class Z2Matrix {
public:
    Z2Matrix() = default;
    Z2Matrix(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool get(int r, int c) const;
    void set(int r, int c);
    void clear(int r, int c);

    /// Rank over Z2 by Gaussian elimination on a working copy.
    int rank() const;

    /// XOR column `src` into column `dst`.
    void add_column(int dst, int src);

    /// Index of the highest set row in column c, or -1 if the column is zero.
    int column_low(int c) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    int words_per_col_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Matrix product over Z2.
Z2Matrix z2_multiply(const Z2Matrix& a, const Z2Matrix& b);

}  // namespace sect
