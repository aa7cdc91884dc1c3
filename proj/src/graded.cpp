#include "glq/graded.hpp"

#include <algorithm>
#include <stdexcept>

namespace glq {

GradedSpace GradedSpace::tensor(const GradedSpace& a, const GradedSpace& b) {
  GradedSpace t;
  t.parity.reserve(a.parity.size() * b.parity.size());
  for (int pa : a.parity)
    for (int pb : b.parity) t.parity.push_back((pa + pb) & 1);
  return t;
}

GradedOperator GradedOperator::zero(const GradedSpace& cod,
                                    const GradedSpace& dom, int parity) {
  GradedOperator op;
  op.dom = dom;
  op.cod = cod;
  op.parity = parity & 1;
  op.entries.assign(cod.dim(), Vec(dom.dim()));
  return op;
}

GradedOperator GradedOperator::identity(const GradedSpace& s) {
  GradedOperator op = zero(s, s, 0);
  for (int i = 0; i < s.dim(); ++i) op.entries[i][i] = RationalScalar(1);
  return op;
}

GradedOperator GradedOperator::unit(const GradedSpace& s, int a, int b) {
  GradedOperator op = zero(s, s, (s.parity[a] + s.parity[b]) & 1);
  op.entries[a][b] = RationalScalar(1);
  return op;
}

bool GradedOperator::is_zero() const {
  for (const auto& row : entries)
    for (const auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

bool GradedOperator::parity_pattern_ok() const {
  for (int r = 0; r < cod.dim(); ++r)
    for (int c = 0; c < dom.dim(); ++c)
      if (!entries[r][c].is_zero() &&
          ((cod.parity[r] + dom.parity[c] + parity) & 1) != 0)
        return false;
  return true;
}

Vec GradedOperator::apply(const Vec& v) const {
  if (static_cast<int>(v.size()) != dom.dim())
    throw std::logic_error("apply: dimension mismatch");
  return mat_apply(entries, v);
}

GradedOperator GradedOperator::operator*(const GradedOperator& o) const {
  if (o.cod != dom) throw std::logic_error("compose: dimension mismatch");
  GradedOperator r = zero(cod, o.dom, parity + o.parity);
  for (int i = 0; i < cod.dim(); ++i)
    for (int k = 0; k < dom.dim(); ++k) {
      if (entries[i][k].is_zero()) continue;
      for (int j = 0; j < o.dom.dim(); ++j) {
        if (o.entries[k][j].is_zero()) continue;
        r.entries[i][j] += entries[i][k] * o.entries[k][j];
      }
    }
  return r;
}

GradedOperator GradedOperator::operator+(const GradedOperator& o) const {
  if (dom != o.dom || cod != o.cod || parity != o.parity)
    throw std::logic_error("add: operator shape mismatch");
  GradedOperator r = *this;
  for (int i = 0; i < cod.dim(); ++i)
    for (int j = 0; j < dom.dim(); ++j) r.entries[i][j] += o.entries[i][j];
  return r;
}

GradedOperator GradedOperator::operator-(const GradedOperator& o) const {
  return *this + o.scaled(RationalScalar(-1));
}

GradedOperator GradedOperator::scaled(const RationalScalar& f) const {
  GradedOperator r = *this;
  for (auto& row : r.entries)
    for (auto& x : row) x *= f;
  return r;
}

GradedOperator graded_kron(const GradedOperator& a, const GradedOperator& b) {
  GradedOperator r = GradedOperator::zero(GradedSpace::tensor(a.cod, b.cod),
                                          GradedSpace::tensor(a.dom, b.dom),
                                          a.parity + b.parity);
  const int bd = b.dom.dim(), bc = b.cod.dim();
  for (int i = 0; i < a.cod.dim(); ++i)
    for (int j = 0; j < a.dom.dim(); ++j) {
      if (a.entries[i][j].is_zero()) continue;
      const bool flip = (b.parity & a.dom.parity[j]) != 0;
      for (int k = 0; k < bc; ++k)
        for (int l = 0; l < bd; ++l) {
          if (b.entries[k][l].is_zero()) continue;
          RationalScalar v = a.entries[i][j] * b.entries[k][l];
          r.entries[i * bc + k][j * bd + l] = flip ? -v : v;
        }
    }
  return r;
}

GradedOperator supertranspose(const GradedOperator& a) {
  if (!a.is_square()) throw std::logic_error("supertranspose: square only");
  GradedOperator r = GradedOperator::zero(a.cod, a.dom, a.parity);
  const auto& par = a.dom.parity;
  for (int i = 0; i < a.cod.dim(); ++i)
    for (int j = 0; j < a.dom.dim(); ++j) {
      const bool neg = (par[i] & (par[i] ^ par[j])) != 0;
      r.entries[i][j] = neg ? -a.entries[j][i] : a.entries[j][i];
    }
  return r;
}

GradedOperator graded_flip(const GradedSpace& a, const GradedSpace& b) {
  GradedOperator r = GradedOperator::zero(GradedSpace::tensor(b, a),
                                          GradedSpace::tensor(a, b), 0);
  const int da = a.dim(), db = b.dim();
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) {
      const bool neg = (a.parity[i] & b.parity[j]) != 0;
      r.entries[j * da + i][i * db + j] = RationalScalar(neg ? -1 : 1);
    }
  return r;
}

namespace {

struct Echelon {
  std::vector<std::vector<IntPoly>> rows;  // echelon rows, pivots leftmost
  std::vector<int> pivot_col;
};

// Fraction-free row echelon form after clearing row denominators.
Echelon echelon_form(const Mat& m) {
  Echelon e;
  if (m.empty()) return e;
  const int nc = static_cast<int>(m[0].size());
  std::vector<std::vector<IntPoly>> rows;
  rows.reserve(m.size());
  for (const auto& row : m) {
    // lcm of denominators via successive gcds
    IntPoly l(1);
    for (const auto& x : row)
      if (!x.den().is_one())
        l = IntPoly::divide_exact(l * x.den(), IntPoly::gcd(l, x.den()));
    std::vector<IntPoly> r(nc);
    bool nonzero = false;
    for (int j = 0; j < nc; ++j) {
      if (row[j].is_zero()) continue;
      r[j] = row[j].num() * IntPoly::divide_exact(l, row[j].den());
      nonzero = true;
    }
    if (nonzero) rows.push_back(std::move(r));
  }

  IntPoly prev(1);
  size_t top = 0;
  for (int col = 0; col < nc && top < rows.size(); ++col) {
    size_t piv = top;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::rotate(rows.begin() + top, rows.begin() + piv, rows.begin() + piv + 1);
    const std::vector<IntPoly> p = rows[top];
    for (size_t i = top + 1; i < rows.size(); ++i) {
      if (rows[i][col].is_zero()) {
        for (int j = col + 1; j < nc; ++j)
          if (!rows[i][j].is_zero())
            rows[i][j] = IntPoly::divide_exact(rows[i][j] * p[col], prev);
        continue;
      }
      const IntPoly f = rows[i][col];
      rows[i][col] = IntPoly();
      for (int j = col + 1; j < nc; ++j) {
        IntPoly v = rows[i][j] * p[col] - f * p[j];
        if (!v.is_zero()) v = IntPoly::divide_exact(v, prev);
        rows[i][j] = std::move(v);
      }
    }
    prev = p[col];
    e.pivot_col.push_back(col);
    ++top;
  }
  rows.resize(top);
  e.rows = std::move(rows);
  return e;
}

}  // namespace

int rank(const Mat& m) { return static_cast<int>(echelon_form(m).pivot_col.size()); }

std::vector<Vec> kernel(const Mat& m) {
  if (m.empty()) return {};
  const int nc = static_cast<int>(m[0].size());
  const Echelon e = echelon_form(m);
  std::vector<bool> is_pivot(nc, false);
  for (int c : e.pivot_col) is_pivot[c] = true;

  std::vector<Vec> basis;
  for (int f = 0; f < nc; ++f) {
    if (is_pivot[f]) continue;
    Vec x = zero_vec(nc);
    x[f] = RationalScalar(1);
    for (int i = static_cast<int>(e.rows.size()) - 1; i >= 0; --i) {
      const int p = e.pivot_col[i];
      if (p > f) continue;
      RationalScalar s;
      for (int j = p + 1; j < nc; ++j) {
        if (e.rows[i][j].is_zero() || x[j].is_zero()) continue;
        s += RationalScalar(e.rows[i][j]) * x[j];
      }
      x[p] = -s / RationalScalar(e.rows[i][p]);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<Vec> solve(const Mat& m, const Vec& b) {
  if (m.empty()) return is_zero_vec(b) ? std::optional<Vec>(Vec{}) : std::nullopt;
  const int nc = static_cast<int>(m[0].size());
  Mat aug(m.size(), Vec(nc + 1));
  for (size_t i = 0; i < m.size(); ++i) {
    std::copy(m[i].begin(), m[i].end(), aug[i].begin());
    aug[i][nc] = b[i];
  }
  const Echelon e = echelon_form(aug);
  // Inconsistent iff some pivot lands in the appended column.
  if (!e.pivot_col.empty() && e.pivot_col.back() == nc) return std::nullopt;

  Vec x = zero_vec(nc);  // free variables set to zero
  for (int i = static_cast<int>(e.rows.size()) - 1; i >= 0; --i) {
    const int p = e.pivot_col[i];
    RationalScalar s = RationalScalar(e.rows[i][nc]);
    for (int j = p + 1; j < nc; ++j) {
      if (e.rows[i][j].is_zero() || x[j].is_zero()) continue;
      s -= RationalScalar(e.rows[i][j]) * x[j];
    }
    x[p] = s / RationalScalar(e.rows[i][p]);
  }
  return x;
}

int rank(const GradedOperator& a) { return rank(a.entries); }
std::vector<Vec> kernel(const GradedOperator& a) { return kernel(a.entries); }
std::optional<Vec> solve(const GradedOperator& a, const Vec& b) {
  return solve(a.entries, b);
}

std::optional<int> rank_modular(const Mat& m, std::uint64_t q0, std::uint64_t p) {
  if (m.empty()) return 0;
  const size_t nc = m[0].size();
  std::vector<std::vector<std::uint64_t>> a(m.size(), std::vector<std::uint64_t>(nc));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < nc; ++j) {
      const auto v = m[i][j].eval_mod(q0, p);
      if (!v) return std::nullopt;
      a[i][j] = *v;
    }
  int rk = 0;
  for (size_t col = 0; col < nc && rk < static_cast<int>(a.size()); ++col) {
    size_t piv = rk;
    while (piv < a.size() && a[piv][col] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[rk], a[piv]);
    const std::uint64_t inv = inv_mod(a[rk][col], p);
    for (size_t i = rk + 1; i < a.size(); ++i) {
      if (a[i][col] == 0) continue;
      const std::uint64_t f = (a[i][col] * inv) % p;
      for (size_t j = col; j < nc; ++j)
        a[i][j] = (a[i][j] + (p - f) * a[rk][j]) % p;
    }
    ++rk;
  }
  return rk;
}

std::optional<std::pair<Vec, Vec>> SpanBasis::reduce(const Vec& v) const {
  Vec rem = v;
  Vec combo = zero_vec(size());
  for (size_t i = 0; i < rows_.size(); ++i) {
    const RationalScalar& c = rem[pivot_col_[i]];
    if (c.is_zero()) continue;
    const RationalScalar f = c;  // pivots are normalized to 1
    for (int j = 0; j < ncols_; ++j)
      if (!rows_[i][j].is_zero()) rem[j] -= f * rows_[i][j];
    for (int j = 0; j < size(); ++j)
      if (!history_[i][j].is_zero()) combo[j] += f * history_[i][j];
  }
  return std::make_pair(std::move(rem), std::move(combo));
}

bool SpanBasis::add(const Vec& v) {
  if (static_cast<int>(v.size()) != ncols_)
    throw std::logic_error("SpanBasis: width mismatch");
  auto [rem, combo] = *reduce(v);
  int piv = -1;
  for (int j = 0; j < ncols_; ++j)
    if (!rem[j].is_zero()) {
      piv = j;
      break;
    }
  if (piv < 0) return false;
  const RationalScalar inv = rem[piv].inverse();
  for (auto& x : rem) x *= inv;
  // new_row = (v - sum combo_j * accepted_j) / rem[piv]
  Vec h = zero_vec(size() + 1);
  for (int j = 0; j < size(); ++j) h[j] = -combo[j] * inv;
  h[size()] = inv;
  for (auto& row : history_) row.push_back(RationalScalar());
  rows_.push_back(std::move(rem));
  pivot_col_.push_back(piv);
  history_.push_back(std::move(h));
  return true;
}

bool SpanBasis::contains(const Vec& v) const {
  return is_zero_vec(reduce(v)->first);
}

std::optional<Vec> SpanBasis::coordinates(const Vec& v) const {
  auto [rem, combo] = *reduce(v);
  if (!is_zero_vec(rem)) return std::nullopt;
  return combo;
}

Vec zero_vec(int n) { return Vec(n); }

bool is_zero_vec(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Vec add(const Vec& a, const Vec& b) {
  Vec r = a;
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r = a;
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

Vec scale(const Vec& a, const RationalScalar& f) {
  Vec r = a;
  for (auto& x : r) x *= f;
  return r;
}

Vec mat_apply(const Mat& m, const Vec& v) {
  Vec r = zero_vec(static_cast<int>(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) {
      if (m[i][j].is_zero() || v[j].is_zero()) continue;
      r[i] += m[i][j] * v[j];
    }
  return r;
}

std::string dump(const Mat& m) {
  std::string s;
  for (const auto& row : m) {
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) s += ' ';
      s += row[j].str();
    }
    s += '\n';
  }
  return s;
}

std::string dump(const GradedOperator& a) { return dump(a.entries); }

}  // namespace glq
