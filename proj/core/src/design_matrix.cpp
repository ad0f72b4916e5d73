#include "irsplit/design_matrix.hpp"

#include <cmath>
#include <string>

namespace irsplit {

DesignMatrix::DesignMatrix(DenseMatrix dense) : data_(std::move(dense)) {
  if (!std::get<DenseMatrix>(data_).allFinite()) {
    throw NonFiniteInput("DesignMatrix: non-finite entry");
  }
}

DesignMatrix::DesignMatrix(SparseMatrix sparse) : data_(std::move(sparse)) {
  auto& m = std::get<SparseMatrix>(data_);
  m.makeCompressed();
  for (Index k = 0; k < m.nonZeros(); ++k) {
    if (!std::isfinite(m.valuePtr()[k])) {
      throw NonFiniteInput("DesignMatrix: non-finite entry");
    }
  }
}

Index DesignMatrix::rows() const {
  return std::visit([](const auto& m) { return Index(m.rows()); }, data_);
}

Index DesignMatrix::cols() const {
  return std::visit([](const auto& m) { return Index(m.cols()); }, data_);
}

Point DesignMatrix::apply(const Point& x) const {
  if (x.size() != cols()) {
    throw DimensionMismatch("DesignMatrix::apply: expected length " +
                            std::to_string(cols()));
  }
  return std::visit([&](const auto& m) -> Point { return m * x; }, data_);
}

Point DesignMatrix::apply_transpose(const Point& u) const {
  if (u.size() != rows()) {
    throw DimensionMismatch("DesignMatrix::apply_transpose: expected length " +
                            std::to_string(rows()));
  }
  return std::visit([&](const auto& m) -> Point { return m.transpose() * u; },
                    data_);
}

Point DesignMatrix::row(Index i) const {
  return std::visit(
      [&](const auto& m) -> Point { return Point(m.row(i).transpose()); },
      data_);
}

DenseMatrix DesignMatrix::to_dense() const {
  if (const auto* d = std::get_if<DenseMatrix>(&data_)) return *d;
  return DenseMatrix(std::get<SparseMatrix>(data_));
}

SparseMatrix DesignMatrix::to_sparse() const {
  if (const auto* s = std::get_if<SparseMatrix>(&data_)) return *s;
  return std::get<DenseMatrix>(data_).sparseView();
}

}  // namespace irsplit
