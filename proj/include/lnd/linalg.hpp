#pragma once

// Dense exact linear algebra over Q: reduced row echelon form, nullspaces and
// particular solutions. Systems here come from coefficient comparison and
// have at most a few hundred unknowns, so nothing clever is done.

#include "lnd/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace lnd {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

struct Echelon {
    Matrix reduced;                  // zero rows removed
    std::vector<std::size_t> pivots;  // pivot column of each row, increasing
};

/// Gauss-Jordan elimination; pivot columns are chosen left to right.
inline Echelon rref(Matrix m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t pick = row;
        while (pick < m.rows() && m(pick, col) == 0) ++pick;
        if (pick == m.rows()) continue;
        m.swap_rows(row, pick);
        Rational inv = 1 / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0) continue;
            Rational f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                if (m(row, c) != 0) m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    Matrix out(row, m.cols());
    for (std::size_t r = 0; r < row; ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    return {std::move(out), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

/// A basis of {v : m v = 0}, one vector per free column, with a 1 in that
/// column and 0 in the other free columns.
inline std::vector<std::vector<Rational>> nullspace(const Matrix& m) {
    Echelon e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(m.cols());
        v[free] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some solution of m v = rhs with every free variable set to 0, or nullopt.
inline std::optional<std::vector<Rational>> solve(const Matrix& m, const std::vector<Rational>& rhs) {
    Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
        aug(r, m.cols()) = rhs.at(r);
    }
    Echelon e = rref(std::move(aug));
    std::vector<Rational> v(m.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == m.cols()) return std::nullopt;
        v[e.pivots[r]] = e.reduced(r, m.cols());
    }
    return v;
}

}  // namespace lnd
