#ifndef TOPOCUBE_F2_HPP
#define TOPOCUBE_F2_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "topocube/errors.hpp"

namespace topocube {

/// Dense matrix over the two-element field. Rows are packed into 64-bit words;
/// row XOR is the elimination primitive.
class F2Matrix {
  public:
    F2Matrix() : rows_(0), cols_(0), wpr_(0) {}
    F2Matrix(int rows, int cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), bits_(static_cast<std::size_t>(rows) * wpr_, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool get(int r, int c) const { return (word(r, c >> 6) >> (c & 63)) & 1; }
    void set(int r, int c, bool v) {
        std::uint64_t m = std::uint64_t{1} << (c & 63);
        if (v)
            word(r, c >> 6) |= m;
        else
            word(r, c >> 6) &= ~m;
    }
    void toggle(int r, int c) { word(r, c >> 6) ^= std::uint64_t{1} << (c & 63); }

    void xor_row_into(int src, int dst) {
        const std::uint64_t* s = &bits_[static_cast<std::size_t>(src) * wpr_];
        std::uint64_t* d = &bits_[static_cast<std::size_t>(dst) * wpr_];
        for (int w = 0; w < wpr_; ++w) d[w] ^= s[w];
    }

    void swap_rows(int a, int b) {
        if (a == b) return;
        for (int w = 0; w < wpr_; ++w) std::swap(word(a, w), word(b, w));
    }

    // dst row ^= src row of another matrix with the same column count.
    void xor_row_from(const F2Matrix& src, int src_row, int dst_row) {
        for (int w = 0; w < wpr_; ++w) word(dst_row, w) ^= src.word(src_row, w);
    }

    int words_per_row() const { return wpr_; }
    std::uint64_t row_word(int r, int w) const { return word(r, w); }

    /// Column index of the first set bit in a row, or -1.
    int leading_bit(int r) const {
        for (int w = 0; w < wpr_; ++w) {
            std::uint64_t x = word(r, w);
            if (x) return 64 * w + std::countr_zero(x);
        }
        return -1;
    }

    bool row_empty(int r) const {
        for (int w = 0; w < wpr_; ++w)
            if (word(r, w)) return false;
        return true;
    }

    int column_weight(int c) const {
        int k = 0;
        for (int r = 0; r < rows_; ++r) k += get(r, c);
        return k;
    }

    bool operator==(const F2Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }

    /// y = M*x over F2, x indexed by columns.
    std::vector<std::uint8_t> apply(const std::vector<std::uint8_t>& x) const {
        std::vector<std::uint64_t> mask(wpr_, 0);
        for (int c = 0; c < cols_; ++c)
            if (x[c]) mask[c >> 6] |= std::uint64_t{1} << (c & 63);
        std::vector<std::uint8_t> y(rows_, 0);
        for (int r = 0; r < rows_; ++r) {
            int acc = 0;
            for (int w = 0; w < wpr_; ++w) acc ^= std::popcount(word(r, w) & mask[w]);
            y[r] = static_cast<std::uint8_t>(acc & 1);
        }
        return y;
    }

    /// Dump format used by golden tests: "rows cols" line, then one hex string
    /// per row; hex digit i encodes columns 4i..4i+3, column 4i in the low bit.
    std::string dump() const {
        std::ostringstream os;
        os << rows_ << ' ' << cols_ << '\n';
        int digits = (cols_ + 3) / 4;
        for (int r = 0; r < rows_; ++r) {
            for (int d = 0; d < digits; ++d) {
                int nib = 0;
                for (int b = 0; b < 4; ++b) {
                    int c = 4 * d + b;
                    if (c < cols_ && get(r, c)) nib |= 1 << b;
                }
                os << "0123456789abcdef"[nib];
            }
            os << '\n';
        }
        return os.str();
    }

  private:
    std::uint64_t& word(int r, int w) { return bits_[static_cast<std::size_t>(r) * wpr_ + w]; }
    const std::uint64_t& word(int r, int w) const { return bits_[static_cast<std::size_t>(r) * wpr_ + w]; }

    int rows_, cols_, wpr_;
    std::vector<std::uint64_t> bits_;
};

/// Rank by forward elimination. Rows are reduced in order against the pivot
/// rows accumulated so far (leading bits found by word scans), which keeps
/// the kernel deterministic and fast on the sparse boundary matrices this
/// toolkit produces. The input is copied; the argument is never modified.
inline int f2_rank(F2Matrix m) {
    std::vector<int> pivot_row_of_col(m.cols(), -1);
    int rank = 0;
    for (int i = 0; i < m.rows(); ++i) {
        int lead = m.leading_bit(i);
        while (lead >= 0 && pivot_row_of_col[lead] >= 0) {
            m.xor_row_into(pivot_row_of_col[lead], i);
            lead = m.leading_bit(i);
        }
        if (lead >= 0) {
            pivot_row_of_col[lead] = i;
            ++rank;
        }
    }
    return rank;
}

/// Solve M*x = b over F2. Returns the canonical particular solution (free
/// variables fixed to 0), or nullopt when the system is inconsistent.
inline std::optional<std::vector<std::uint8_t>> f2_solve(const F2Matrix& m,
                                                         const std::vector<std::uint8_t>& b) {
    int rows = m.rows(), cols = m.cols();
    if (static_cast<int>(b.size()) != rows)
        throw ValidationError("solve: right-hand side length does not match row count");
    F2Matrix aug(rows, cols + 1);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c)
            if (m.get(r, c)) aug.set(r, c, true);
        if (b[r]) aug.set(r, cols, true);
    }
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (aug.get(i, c)) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        aug.swap_rows(piv, r);
        for (int i = 0; i < rows; ++i)
            if (i != r && aug.get(i, c)) aug.xor_row_into(r, i);
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (aug.get(i, cols)) return std::nullopt;
    std::vector<std::uint8_t> x(cols, 0);
    for (int i = 0; i < r; ++i) x[pivot_col[i]] = aug.get(i, cols);
    return x;
}

/// Basis of the nullspace of M (vectors indexed by columns), canonical order.
inline std::vector<std::vector<std::uint8_t>> f2_nullspace(const F2Matrix& m) {
    int rows = m.rows(), cols = m.cols();
    F2Matrix red = m;
    std::vector<int> pivot_of_col(cols, -1);
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (red.get(i, c)) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        red.swap_rows(piv, r);
        for (int i = 0; i < rows; ++i)
            if (i != r && red.get(i, c)) red.xor_row_into(r, i);
        pivot_of_col[c] = r;
        ++r;
    }
    std::vector<std::vector<std::uint8_t>> basis;
    for (int c = 0; c < cols; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        std::vector<std::uint8_t> v(cols, 0);
        v[c] = 1;
        for (int c2 = 0; c2 < cols; ++c2)
            if (pivot_of_col[c2] >= 0 && red.get(pivot_of_col[c2], c)) v[c2] = 1;
        basis.push_back(std::move(v));
    }
    return basis;
}

inline int f2_nullity(const F2Matrix& m) { return m.cols() - f2_rank(m); }

/// [a | b] side by side; both must have equal row counts.
inline F2Matrix f2_hstack(const F2Matrix& a, const F2Matrix& b) {
    if (a.rows() != b.rows()) throw ValidationError("hstack: row count mismatch");
    F2Matrix m(a.rows(), a.cols() + b.cols());
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < a.cols(); ++c)
            if (a.get(r, c)) m.set(r, c, true);
        for (int c = 0; c < b.cols(); ++c)
            if (b.get(r, c)) m.set(r, a.cols() + c, true);
    }
    return m;
}

/// Block-diagonal direct sum.
inline F2Matrix f2_direct_sum(const F2Matrix& a, const F2Matrix& b) {
    F2Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
            if (a.get(r, c)) m.set(r, c, true);
    for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c)
            if (b.get(r, c)) m.set(a.rows() + r, a.cols() + c, true);
    return m;
}

/// C = A*B over F2; word scans over A's rows, so sparse rows cost little.
inline F2Matrix f2_mul(const F2Matrix& a, const F2Matrix& b) {
    if (a.cols() != b.rows()) throw ValidationError("mul: inner dimension mismatch");
    F2Matrix c(a.rows(), b.cols());
    for (int r = 0; r < a.rows(); ++r) {
        for (int w = 0; w < a.words_per_row(); ++w) {
            std::uint64_t bits = a.row_word(r, w);
            while (bits) {
                int k = 64 * w + std::countr_zero(bits);
                bits &= bits - 1;
                c.xor_row_from(b, k, r);
            }
        }
    }
    return c;
}

}  // namespace topocube

#endif
