#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "revcut/rng.hpp"

namespace revcut::gf {

using Elem = std::uint32_t;

bool is_prime(std::uint64_t n);

/// Smallest prime strictly greater than n.
std::uint32_t next_prime_above(std::uint64_t n);

/// Prime field F_p. Construction verifies primality (p < 2^32).
class Field {
public:
    explicit Field(std::uint64_t p);

    std::uint32_t modulus() const noexcept { return p_; }

    Elem reduce(std::int64_t v) const noexcept {
        auto r = v % static_cast<std::int64_t>(p_);
        return static_cast<Elem>(r < 0 ? r + p_ : r);
    }
    Elem add(Elem a, Elem b) const noexcept {
        std::uint64_t s = std::uint64_t{a} + b;
        return static_cast<Elem>(s >= p_ ? s - p_ : s);
    }
    Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : static_cast<Elem>(std::uint64_t{a} + p_ - b); }
    Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const noexcept { return static_cast<Elem>(std::uint64_t{a} * b % p_); }
    Elem pow(Elem a, std::uint64_t e) const noexcept;
    /// Multiplicative inverse; a must be nonzero.
    Elem inv(Elem a) const noexcept { return pow(a, p_ - 2); }

    Elem random(Rng& rng) const { return static_cast<Elem>(rng.uniform(p_)); }

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::uint32_t p_;
};

/// Dense row-major matrix over a prime field. Zero rows or columns are legal.
class Matrix {
public:
    Matrix(Field field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}
    Matrix(Field field, std::initializer_list<std::initializer_list<std::int64_t>> rows);

    static Matrix identity(Field field, std::size_t n);

    const Field& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::int64_t v) { data_[r * cols_ + c] = field_.reduce(v); }

    std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    Matrix select_rows(std::span<const std::size_t> idx) const;
    Matrix select_cols(std::span<const std::size_t> idx) const;
    /// Columns [first, first + count).
    Matrix col_range(std::size_t first, std::size_t count) const;
    /// Vertical concatenation; column counts must agree.
    Matrix stack(const Matrix& below) const;

    Matrix operator*(const Matrix& rhs) const;
    std::vector<Elem> apply(std::span<const Elem> v) const;

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Elem> data_;
};

std::size_t rank(const Matrix& m);

/// Inverse of a square matrix, or nullopt when singular. Throws NotSquare.
std::optional<Matrix> inverse(const Matrix& m);

/// True iff the row spaces of a and b meet only in zero. Throws
/// DimensionMismatch when column counts differ.
bool row_space_intersection_trivial(const Matrix& a, const Matrix& b);

}  // namespace revcut::gf
