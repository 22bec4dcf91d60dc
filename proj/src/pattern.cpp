#include "revcut/pattern.hpp"

#include <algorithm>

#include "revcut/error.hpp"

namespace revcut {

PatternMatrix::PatternMatrix(std::size_t rows, std::size_t cols)
    : labels(rows), backward(rows, false), rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

PatternMatrix::PatternMatrix(std::initializer_list<std::initializer_list<int>> rows)
    : PatternMatrix(rows.size(), rows.size() ? rows.begin()->size() : 0) {
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged pattern literal");
        std::size_t c = 0;
        for (int v : row) set(r, c++, v != 0);
        ++r;
    }
}

PatternMatrix PatternMatrix::identity(std::size_t n) {
    PatternMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) p.set(i, i);
    return p;
}

std::size_t PatternMatrix::ones() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

bool PatternMatrix::row_is_zero(std::size_t r) const {
    for (std::size_t c = 0; c < cols_; ++c)
        if ((*this)(r, c)) return false;
    return true;
}

PatternMatrix PatternMatrix::select_rows(std::span<const std::size_t> idx) const {
    PatternMatrix out(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= rows_) throw Error(ErrorCode::DimensionMismatch, "row index out of range");
        for (std::size_t c = 0; c < cols_; ++c) out.set(i, c, (*this)(idx[i], c));
        out.labels[i] = labels[idx[i]];
        out.backward[i] = backward[idx[i]];
    }
    return out;
}

PatternMatrix PatternMatrix::stack(const PatternMatrix& below) const {
    if (below.cols_ != cols_) throw Error(ErrorCode::DimensionMismatch, "stack: column counts differ");
    PatternMatrix out(rows_ + below.rows_, cols_);
    std::copy(bits_.begin(), bits_.end(), out.bits_.begin());
    std::copy(below.bits_.begin(), below.bits_.end(), out.bits_.begin() + static_cast<std::ptrdiff_t>(bits_.size()));
    std::copy(labels.begin(), labels.end(), out.labels.begin());
    std::copy(below.labels.begin(), below.labels.end(), out.labels.begin() + static_cast<std::ptrdiff_t>(rows_));
    for (std::size_t i = 0; i < rows_; ++i) out.backward[i] = backward[i];
    for (std::size_t i = 0; i < below.rows_; ++i) out.backward[rows_ + i] = below.backward[i];
    return out;
}

}  // namespace revcut
