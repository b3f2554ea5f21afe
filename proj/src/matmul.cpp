#include "dyncliq/matmul.hpp"

#include <omp.h>

#include "dyncliq/threading.hpp"

namespace dyncliq {

namespace {

constexpr int kCutoff = 64;

// Square block with its own storage; recursion works on these instead of the
// caller-facing DenseMatrix so padding stays internal.
struct Block {
  int n = 0;
  std::vector<int64_t> a;
  explicit Block(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, 0) {}
  int64_t& at(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
  int64_t at(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }
};

Block add(const Block& x, const Block& y) {
  Block z(x.n);
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] = x.a[i] + y.a[i];
  return z;
}

Block sub(const Block& x, const Block& y) {
  Block z(x.n);
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] = x.a[i] - y.a[i];
  return z;
}

Block quadrant(const Block& x, int qr, int qc) {
  int h = x.n / 2;
  Block q(h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < h; ++c) q.at(r, c) = x.at(qr * h + r, qc * h + c);
  return q;
}

void naive_into(const Block& x, const Block& y, Block& z) {
  int n = x.n;
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) {
      int64_t v = x.at(r, j);
      if (v == 0) continue;
      const int64_t* yrow = &y.a[static_cast<size_t>(j) * n];
      int64_t* zrow = &z.a[static_cast<size_t>(r) * n];
      for (int c = 0; c < n; ++c) zrow[c] += v * yrow[c];
    }
  }
}

Block strassen_rec(const Block& x, const Block& y) {
  if (x.n <= kCutoff) {
    Block z(x.n);
    naive_into(x, y, z);
    return z;
  }
  int h = x.n / 2;
  Block a11 = quadrant(x, 0, 0), a12 = quadrant(x, 0, 1);
  Block a21 = quadrant(x, 1, 0), a22 = quadrant(x, 1, 1);
  Block b11 = quadrant(y, 0, 0), b12 = quadrant(y, 0, 1);
  Block b21 = quadrant(y, 1, 0), b22 = quadrant(y, 1, 1);

  std::vector<Block> m(7, Block(0));
#pragma omp taskloop shared(m, a11, a12, a21, a22, b11, b12, b21, b22) grainsize(1)
  for (int p = 0; p < 7; ++p) {
    switch (p) {
      case 0: m[0] = strassen_rec(add(a11, a22), add(b11, b22)); break;
      case 1: m[1] = strassen_rec(add(a21, a22), b11); break;
      case 2: m[2] = strassen_rec(a11, sub(b12, b22)); break;
      case 3: m[3] = strassen_rec(a22, sub(b21, b11)); break;
      case 4: m[4] = strassen_rec(add(a11, a12), b22); break;
      case 5: m[5] = strassen_rec(sub(a21, a11), add(b11, b12)); break;
      case 6: m[6] = strassen_rec(sub(a12, a22), add(b21, b22)); break;
    }
  }

  Block z(x.n);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < h; ++c) {
      size_t i = static_cast<size_t>(r) * h + c;
      z.at(r, c) = m[0].a[i] + m[3].a[i] - m[4].a[i] + m[6].a[i];
      z.at(r, c + h) = m[2].a[i] + m[4].a[i];
      z.at(r + h, c) = m[1].a[i] + m[3].a[i];
      z.at(r + h, c + h) = m[0].a[i] - m[1].a[i] + m[2].a[i] + m[5].a[i];
    }
  }
  return z;
}

int pad_dim(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

DenseMatrix naive_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dim != b.dim) throw ParameterError("matrix dimension mismatch");
  DenseMatrix c(a.dim);
  int n = a.dim;
#pragma omp parallel for schedule(static) num_threads(get_num_threads())
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) {
      int64_t v = a.at(r, j);
      if (v == 0) continue;
      for (int col = 0; col < n; ++col) c.at(r, col) += v * b.at(j, col);
    }
  }
  return c;
}

DenseMatrix strassen_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dim != b.dim) throw ParameterError("matrix dimension mismatch");
  if (a.dim == 0) return DenseMatrix(0);
  int p = pad_dim(a.dim);
  Block x(p), y(p);
  for (int r = 0; r < a.dim; ++r)
    for (int c = 0; c < a.dim; ++c) {
      x.at(r, c) = a.at(r, c);
      y.at(r, c) = b.at(r, c);
    }
  Block z(0);
#pragma omp parallel num_threads(get_num_threads())
#pragma omp single
  z = strassen_rec(x, y);
  DenseMatrix out(a.dim);
  for (int r = 0; r < a.dim; ++r)
    for (int c = 0; c < a.dim; ++c) out.at(r, c) = z.at(r, c);
  return out;
}

int64_t cube_diagonal_sum(const DenseMatrix& a) {
  DenseMatrix a2 = strassen_multiply(a, a);
  DenseMatrix a3 = strassen_multiply(a2, a);
  int64_t trace = 0;
  for (int i = 0; i < a3.dim; ++i) trace += a3.at(i, i);
  return trace;
}

}  // namespace dyncliq
