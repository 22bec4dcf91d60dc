#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace revcut {

/// 0-1 zero-pattern matrix. Rows optionally carry an edge label and a flag
/// marking rows that stand for backward edges.
class PatternMatrix {
public:
    PatternMatrix() = default;
    PatternMatrix(std::size_t rows, std::size_t cols);
    PatternMatrix(std::initializer_list<std::initializer_list<int>> rows);

    static PatternMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    bool operator()(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c] != 0; }
    void set(std::size_t r, std::size_t c, bool v = true) { bits_[r * cols_ + c] = v ? 1 : 0; }

    std::size_t ones() const;
    bool row_is_zero(std::size_t r) const;

    PatternMatrix select_rows(std::span<const std::size_t> idx) const;
    PatternMatrix stack(const PatternMatrix& below) const;

    std::vector<std::string> labels;
    std::vector<bool> backward;

    friend bool operator==(const PatternMatrix& a, const PatternMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.bits_ == b.bits_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

}  // namespace revcut
