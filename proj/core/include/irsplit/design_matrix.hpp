#pragma once

#include "irsplit/types.hpp"

#include <Eigen/Sparse>

#include <variant>

namespace irsplit {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                  Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// m×n data matrix, dense row-major or compressed sparse rows. Only products
/// with x and with its transpose are exposed; AᵀA is never formed.
class DesignMatrix {
 public:
  DesignMatrix() = default;
  explicit DesignMatrix(DenseMatrix dense);
  explicit DesignMatrix(SparseMatrix sparse);

  Index rows() const;
  Index cols() const;
  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(data_); }

  Point apply(const Point& x) const;            ///< A x, length m
  Point apply_transpose(const Point& u) const;  ///< Aᵀ u, length n

  /// Row i as a dense vector (test and I/O helper).
  Point row(Index i) const;
  DenseMatrix to_dense() const;
  SparseMatrix to_sparse() const;

 private:
  std::variant<DenseMatrix, SparseMatrix> data_;
};

}  // namespace irsplit
