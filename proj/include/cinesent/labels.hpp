#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cinesent {

/// Dense row-major 0/1 matrix: one row per item, one column per label.
class LabelMatrix {
 public:
  LabelMatrix() = default;
  LabelMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::uint8_t operator()(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
  std::uint8_t& operator()(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }

  std::span<const std::uint8_t> row(std::size_t r) const { return {cells_.data() + r * cols_, cols_}; }
  std::span<std::uint8_t> row(std::size_t r) { return {cells_.data() + r * cols_, cols_}; }

  std::vector<std::uint8_t> column(std::size_t c) const {
    std::vector<std::uint8_t> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  void push_row(std::span<const std::uint8_t> values) {
    if (rows_ == 0 && cells_.empty()) cols_ = values.size();
    if (values.size() != cols_) throw std::invalid_argument("label row has wrong width");
    cells_.insert(cells_.end(), values.begin(), values.end());
    ++rows_;
  }

  /// Rows picked by index, in the given order.
  LabelMatrix select(std::span<const std::size_t> rows) const {
    LabelMatrix out(0, cols_);
    out.cells_.reserve(rows.size() * cols_);
    for (auto r : rows) out.push_row(row(r));
    return out;
  }

  friend bool operator==(const LabelMatrix&, const LabelMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

}  // namespace cinesent
