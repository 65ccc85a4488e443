#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace afbench {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  [[nodiscard]] std::string shape_string() const;
  [[nodiscard]] bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

enum class Axis { Rows, Cols };
enum class ReduceOp { Sum, Max, ArgMax, Mean };

/// a (m x k) times b (k x n). Throws ShapeError on mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);
/// transpose(a) * b without materializing the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a * transpose(b).
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

Matrix map(const Matrix& a, const std::function<double(double)>& f);

/// Reduce along an axis. Axis::Rows collapses each row to one value
/// (result rows x 1); Axis::Cols collapses each column (result 1 x cols).
/// ArgMax returns indices as doubles; ties resolve to the lowest index.
Matrix reduce(const Matrix& a, Axis axis, ReduceOp op);

/// Index of the largest element, lowest index among ties.
std::size_t argmax(std::span<const double> v);

/// Adds the 1 x cols row vector to every row of a, in place.
void add_row_vector(Matrix& a, const Matrix& row);

}  // namespace afbench
