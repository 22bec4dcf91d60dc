#include "revcut/gf.hpp"

#include <string>
#include <utility>

#include "revcut/error.hpp"

namespace revcut::gf {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::uint32_t next_prime_above(std::uint64_t n) {
    std::uint64_t c = n + 1;
    while (!is_prime(c)) ++c;
    if (c > UINT32_MAX) throw Error(ErrorCode::TooLarge, "no 32-bit prime above " + std::to_string(n));
    return static_cast<std::uint32_t>(c);
}

Field::Field(std::uint64_t p) : p_(0) {
    if (p > UINT32_MAX) throw Error(ErrorCode::TooLarge, "modulus must fit in 32 bits");
    if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    p_ = static_cast<std::uint32_t>(p);
}

Elem Field::pow(Elem a, std::uint64_t e) const noexcept {
    Elem result = 1 % p_;
    while (e) {
        if (e & 1) result = mul(result, a);
        a = mul(a, a);
        e >>= 1;
    }
    return result;
}

Matrix::Matrix(Field field, std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : field_(field), rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
        for (auto v : r) data_.push_back(field_.reduce(v));
    }
}

Matrix Matrix::identity(Field field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix Matrix::select_rows(std::span<const std::size_t> idx) const {
    Matrix out(field_, idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t c = 0; c < cols_; ++c) out.data_[i * cols_ + c] = (*this)(idx[i], c);
    return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const {
    Matrix out(field_, rows_, idx.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t j = 0; j < idx.size(); ++j) out.data_[r * idx.size() + j] = (*this)(r, idx[j]);
    return out;
}

Matrix Matrix::col_range(std::size_t first, std::size_t count) const {
    Matrix out(field_, rows_, count);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t j = 0; j < count; ++j) out.data_[r * count + j] = (*this)(r, first + j);
    return out;
}

Matrix Matrix::stack(const Matrix& below) const {
    if (below.cols_ != cols_) throw Error(ErrorCode::DimensionMismatch, "stack: column counts differ");
    Matrix out(field_, rows_ + below.rows_, cols_);
    std::copy(data_.begin(), data_.end(), out.data_.begin());
    std::copy(below.data_.begin(), below.data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
    return out;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw Error(ErrorCode::DimensionMismatch, "product: inner dimensions differ");
    Matrix out(field_, rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            Elem a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out.data_[i * rhs.cols_ + j] = field_.add(out.data_[i * rhs.cols_ + j], field_.mul(a, rhs(k, j)));
        }
    return out;
}

std::vector<Elem> Matrix::apply(std::span<const Elem> v) const {
    if (v.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "apply: vector length differs");
    std::vector<Elem> out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < cols_; ++j) acc = (acc + std::uint64_t{(*this)(i, j)} * v[j]) % field_.modulus();
        out[i] = static_cast<Elem>(acc);
    }
    return out;
}

namespace {

// In-place reduction to row echelon form. Pivot for each column is the
// first nonzero entry at or below the current row. Returns the rank.
std::size_t echelonize(std::vector<Elem>& a, std::size_t rows, std::size_t cols, const Field& f,
                       std::vector<Elem>* companion = nullptr, std::size_t companion_cols = 0) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a[pivot * cols + j], a[r * cols + j]);
            if (companion)
                for (std::size_t j = 0; j < companion_cols; ++j)
                    std::swap((*companion)[pivot * companion_cols + j], (*companion)[r * companion_cols + j]);
        }
        const Elem scale = f.inv(a[r * cols + c]);
        for (std::size_t j = 0; j < cols; ++j) a[r * cols + j] = f.mul(a[r * cols + j], scale);
        if (companion)
            for (std::size_t j = 0; j < companion_cols; ++j)
                (*companion)[r * companion_cols + j] = f.mul((*companion)[r * companion_cols + j], scale);
        // Clear the column everywhere else so the companion ends up as the inverse.
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const Elem factor = a[i * cols + c];
            if (factor == 0) continue;
            for (std::size_t j = 0; j < cols; ++j)
                a[i * cols + j] = f.sub(a[i * cols + j], f.mul(factor, a[r * cols + j]));
            if (companion)
                for (std::size_t j = 0; j < companion_cols; ++j)
                    (*companion)[i * companion_cols + j] =
                        f.sub((*companion)[i * companion_cols + j], f.mul(factor, (*companion)[r * companion_cols + j]));
        }
        ++r;
    }
    return r;
}

std::vector<Elem> entries(const Matrix& m) {
    std::vector<Elem> out;
    out.reserve(m.rows() * m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

}  // namespace

std::size_t rank(const Matrix& m) {
    if (m.empty()) return 0;
    auto a = entries(m);
    return echelonize(a, m.rows(), m.cols(), m.field());
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "inverse of non-square matrix");
    const std::size_t n = m.rows();
    auto a = entries(m);
    auto id = entries(Matrix::identity(m.field(), n));
    if (echelonize(a, n, n, m.field(), &id, n) != n) return std::nullopt;
    Matrix out(m.field(), n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.set(r, c, id[r * n + c]);
    return out;
}

bool row_space_intersection_trivial(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "row spaces live in different dimensions");
    return rank(a.stack(b)) == rank(a) + rank(b);
}

}  // namespace revcut::gf
