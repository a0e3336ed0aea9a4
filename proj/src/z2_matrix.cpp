#include "sect/z2_matrix.hpp"

#include <bit>
#include <stdexcept>

namespace sect {

Z2Matrix::Z2Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("Z2Matrix: negative dimension");
    words_per_col_ = (rows + 63) / 64;
    bits_.assign(static_cast<std::size_t>(words_per_col_) * cols, 0);
}

bool Z2Matrix::get(int r, int c) const {
    return (bits_[static_cast<std::size_t>(c) * words_per_col_ + r / 64] >> (r % 64)) & 1u;
}

void Z2Matrix::set(int r, int c) {
    bits_[static_cast<std::size_t>(c) * words_per_col_ + r / 64] |= std::uint64_t(1) << (r % 64);
}

void Z2Matrix::clear(int r, int c) {
    bits_[static_cast<std::size_t>(c) * words_per_col_ + r / 64] &= ~(std::uint64_t(1) << (r % 64));
}

void Z2Matrix::add_column(int dst, int src) {
    std::uint64_t* d = bits_.data() + static_cast<std::size_t>(dst) * words_per_col_;
    const std::uint64_t* s = bits_.data() + static_cast<std::size_t>(src) * words_per_col_;
    for (int w = 0; w < words_per_col_; ++w) d[w] ^= s[w];
}

int Z2Matrix::column_low(int c) const {
    const std::uint64_t* col = bits_.data() + static_cast<std::size_t>(c) * words_per_col_;
    for (int w = words_per_col_ - 1; w >= 0; --w) {
        if (col[w] != 0) return w * 64 + 63 - std::countl_zero(col[w]);
    }
    return -1;
}

int Z2Matrix::rank() const {
    Z2Matrix work = *this;
    // pivot_col[r] = column whose lowest set bit is row r, or -1
    std::vector<int> pivot_col(static_cast<std::size_t>(rows_), -1);
    int rank = 0;
    for (int c = 0; c < cols_; ++c) {
        int low = work.column_low(c);
        while (low >= 0 && pivot_col[low] >= 0) {
            work.add_column(c, pivot_col[low]);
            low = work.column_low(c);
        }
        if (low >= 0) {
            pivot_col[low] = c;
            ++rank;
        }
    }
    return rank;
}

Z2Matrix z2_multiply(const Z2Matrix& a, const Z2Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("z2_multiply: inner dimensions differ");
    // out[:,j] = XOR of a[:,i] over all i with b(i,j) = 1.
    Z2Matrix out(a.rows(), b.cols());
    for (int j = 0; j < b.cols(); ++j) {
        for (int i = 0; i < b.rows(); ++i) {
            if (!b.get(i, j)) continue;
            for (int r = 0; r < a.rows(); ++r) {
                if (a.get(r, i)) {
                    if (out.get(r, j)) out.clear(r, j); else out.set(r, j);
                }
            }
        }
    }
    return out;
}

}  // namespace sect
