#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glq/scalars.hpp"

namespace glq {

using Vec = std::vector<RationalScalar>;
using Mat = std::vector<Vec>;  // row-major

// Finite-dimensional Z2-graded space: a parity (0 or 1) per basis index.
struct GradedSpace {
  std::vector<int> parity;

  int dim() const { return static_cast<int>(parity.size()); }
  bool operator==(const GradedSpace&) const = default;

  // Tensor index flattening is row-major throughout: (i,j) -> i*dim(b)+j.
  static GradedSpace tensor(const GradedSpace& a, const GradedSpace& b);
};

// Parity-homogeneous linear map between graded spaces, stored densely.
// entries[r][c] is the coefficient of basis r of cod in the image of basis c.
struct GradedOperator {
  GradedSpace dom, cod;
  int parity = 0;
  Mat entries;

  static GradedOperator zero(const GradedSpace& cod, const GradedSpace& dom,
                             int parity);
  static GradedOperator identity(const GradedSpace& s);
  // Matrix unit e_{ab}: v_b -> v_a on s; parity [a]+[b].
  static GradedOperator unit(const GradedSpace& s, int a, int b);

  bool is_zero() const;
  bool is_square() const { return dom == cod; }
  // Entries vanish unless parity(r) = parity(c) + parity(op) mod 2.
  bool parity_pattern_ok() const;

  Vec apply(const Vec& v) const;
  GradedOperator operator*(const GradedOperator& o) const;  // composition
  GradedOperator operator+(const GradedOperator& o) const;
  GradedOperator operator-(const GradedOperator& o) const;
  GradedOperator scaled(const RationalScalar& f) const;
  bool operator==(const GradedOperator&) const = default;
};

// (A(x)B)(u(x)v) = (-1)^{parity(B)*parity(u)} Au (x) Bv on homogeneous u.
GradedOperator graded_kron(const GradedOperator& a, const GradedOperator& b);

// (A^st)_{ab} = (-1)^{[a]([a]+[b])} A_{ba}; square operators only.
GradedOperator supertranspose(const GradedOperator& a);

// tau: A(x)B -> B(x)A, v_i(x)v_j -> (-1)^{[i][j]} v_j(x)v_i.
GradedOperator graded_flip(const GradedSpace& a, const GradedSpace& b);

// Exact linear algebra over Q(q).  Elimination is fraction-free
// (Bareiss) after clearing row denominators; the pivot is the first
// nonzero entry in column order, ties broken by lowest row index.
int rank(const Mat& m);
std::vector<Vec> kernel(const Mat& m);      // right kernel, deterministic basis
std::optional<Vec> solve(const Mat& m, const Vec& b);  // one solution or none

int rank(const GradedOperator& a);
std::vector<Vec> kernel(const GradedOperator& a);
std::optional<Vec> solve(const GradedOperator& a, const Vec& b);

// Rank of the matrix specialized at q=q0 over Z/p; empty if a denominator
// vanishes at the evaluation point.  Always a lower bound on the exact rank,
// used as an advisory pre-screen only.
std::optional<int> rank_modular(const Mat& m, std::uint64_t q0, std::uint64_t p);

// Incremental exact span with membership tests and coordinates relative to
// the vectors that were accepted as independent.
class SpanBasis {
 public:
  explicit SpanBasis(int ncols) : ncols_(ncols) {}

  // Adds v if independent of the current span; returns true when added.
  bool add(const Vec& v);
  bool contains(const Vec& v) const;
  // Coefficients expressing v over the accepted vectors, if v lies in the span.
  std::optional<Vec> coordinates(const Vec& v) const;
  int size() const { return static_cast<int>(rows_.size()); }
  int ncols() const { return ncols_; }

 private:
  int ncols_;
  Mat rows_;                    // echelon, pivots normalized to 1
  std::vector<int> pivot_col_;
  Mat history_;                 // rows_[i] = sum_j history_[i][j] * accepted_j
  std::optional<std::pair<Vec, Vec>> reduce(const Vec& v) const;
};

// Vector and matrix helpers.
Vec zero_vec(int n);
bool is_zero_vec(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, const RationalScalar& f);
Vec mat_apply(const Mat& m, const Vec& v);

// Row-major dump: one row per line, canonical entry renderings separated by
// single spaces.  Used bit-exactly by golden files.
std::string dump(const Mat& m);
std::string dump(const GradedOperator& a);

}  // namespace glq
