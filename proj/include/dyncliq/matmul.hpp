#pragma once

#include <cstdint>
#include <vector>

#include "dyncliq/errors.hpp"

namespace dyncliq {

struct DenseMatrix {
  int dim = 0;
  std::vector<int64_t> entries;  // row-major, dim*dim

  DenseMatrix() = default;
  explicit DenseMatrix(int d) : dim(d), entries(static_cast<size_t>(d) * d, 0) {
    if (d < 0) throw ParameterError("matrix dim must be >= 0");
  }
  int64_t& at(int r, int c) { return entries[static_cast<size_t>(r) * dim + c]; }
  int64_t at(int r, int c) const { return entries[static_cast<size_t>(r) * dim + c]; }
  bool operator==(const DenseMatrix& other) const = default;
};

// Reference O(dim^3) product. Throws ParameterError on dimension mismatch.
DenseMatrix naive_multiply(const DenseMatrix& a, const DenseMatrix& b);

// Recursive seven-product scheme; zero-pads to the next power of two and
// switches to the naive kernel at blocks of dim <= 64. The seven subproducts
// per level run as independent tasks. Exact over int64.
DenseMatrix strassen_multiply(const DenseMatrix& a, const DenseMatrix& b);

// Sum of the diagonal of A*A*A, computed with strassen_multiply twice.
int64_t cube_diagonal_sum(const DenseMatrix& a);

}  // namespace dyncliq
