#include "glq/coords.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

namespace glq {

namespace {

const RationalScalar kOne(1);

Weight add_weight(const Weight& a, const Weight& b) {
  Weight r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Weight sub_weight(const Weight& a, const Weight& b) {
  Weight r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Weight gen_weight_shift(const SuperIndex& idx, const Gen& g) {
  Weight w(idx.dim(), 0);
  if (g.kind == Gen::Raise) {
    w[g.idx - 1] = 1;
    w[g.idx] = -1;
  } else if (g.kind == Gen::Lower) {
    w[g.idx - 1] = -1;
    w[g.idx] = 1;
  }
  return w;
}

// (K_c K_{c+1}^{-1})^e as a word of torus letters.
Word kweight_word(int c, int e) {
  Word w;
  for (int i = 0; i < (e > 0 ? e : -e); ++i) {
    if (e > 0) {
      w.push_back({Gen::K, c});
      w.push_back({Gen::Kinv, c + 1});
    } else {
      w.push_back({Gen::Kinv, c});
      w.push_back({Gen::K, c + 1});
    }
  }
  return w;
}

Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

// Right multiplication by a generator matrix, skipping its zero entries.
Mat sparse_rmul(const Mat& P, const Mat& G) {
  const int n = static_cast<int>(P.size());
  const int m = static_cast<int>(G[0].size());
  Mat R(n, Vec(m));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < m; ++j) {
      if (G[k][j].is_zero()) continue;
      for (int i = 0; i < n; ++i) {
        if (P[i][k].is_zero()) continue;
        R[i][j] += P[i][k] * G[k][j];
      }
    }
  return R;
}

Mat mat_identity(int n) {
  Mat m(n, Vec(n));
  for (int i = 0; i < n; ++i) m[i][i] = kOne;
  return m;
}

Mat mat_inverse(const Mat& a) {
  const int n = static_cast<int>(a.size());
  Mat m = a;
  Mat inv = mat_identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!m[r][col].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) throw MathError("matrix is singular");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    const RationalScalar s = m[col][col].inverse();
    for (int j = 0; j < n; ++j) {
      m[col][j] *= s;
      inv[col][j] *= s;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const RationalScalar f = m[r][col];
      for (int j = 0; j < n; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// All generator words of length <= maxlen, by length then generator order.
std::vector<Word> enumerate_words(const SuperIndex& idx, int maxlen) {
  const std::vector<Gen> gens = all_generators(idx);
  std::vector<Word> out;
  out.push_back({});
  size_t level_begin = 0;
  for (int len = 1; len <= maxlen; ++len) {
    const size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i)
      for (const Gen& g : gens) {
        Word w = out[i];
        w.push_back(g);
        out.push_back(std::move(w));
      }
    level_begin = level_end;
  }
  return out;
}

int rank_modp(std::vector<std::vector<std::uint64_t>> m, std::uint64_t p) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (m[r][col] % p != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    const std::uint64_t inv = inv_mod(m[rank][col] % p, p);
    for (int j = col; j < cols; ++j)
      m[rank][j] = (m[rank][j] % p) * inv % p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const std::uint64_t f = m[r][col] % p;
      if (f == 0) continue;
      for (int j = col; j < cols; ++j)
        m[r][j] = (m[r][j] + (p - f) * m[rank][j]) % p;
    }
    ++rank;
  }
  return rank;
}

// Functional-span analysis of one module, split by weight shift.  Family
// words are grown breadth first; the per-shift spans are exactly the spans
// of all word images because each extension step transports linear
// dependencies (the entries of pi(w g) in one shift block only use entries
// of pi(w) from one shift block).
struct ShiftData {
  std::vector<Weight> shifts;
  std::map<Weight, int> shift_index;
  std::vector<std::vector<std::pair<int, int>>> entries;
  std::vector<std::vector<Mat>> fam_mats;
  std::vector<std::vector<Word>> fam_words;
  std::vector<SpanBasis> fspan;  // entry-functional echelon per shift
};

Vec flatten_shift(const Mat& P, const std::vector<std::pair<int, int>>& ent) {
  Vec v;
  v.reserve(ent.size());
  for (const auto& [i, j] : ent) v.push_back(P[i][j]);
  return v;
}

ShiftData analyze_module(const RepModule& M) {
  const int d = M.dim();
  ShiftData sd;
  std::map<Weight, std::vector<std::pair<int, int>>> ent;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      ent[sub_weight(M.weights[i], M.weights[j])].push_back({i, j});
  for (auto& [s, e] : ent) {
    sd.shift_index[s] = static_cast<int>(sd.shifts.size());
    sd.shifts.push_back(s);
    sd.entries.push_back(e);
  }
  const int ns = static_cast<int>(sd.shifts.size());
  sd.fam_mats.resize(ns);
  sd.fam_words.resize(ns);
  std::vector<SpanBasis> span;
  for (int s = 0; s < ns; ++s)
    span.emplace_back(static_cast<int>(sd.entries[s].size()));

  const std::vector<Gen> gens = all_generators(M.idx);
  const Weight zero(M.idx.dim(), 0);
  std::deque<std::tuple<int, int, Gen>> queue;  // parent shift, index, letter
  {
    const int s0 = sd.shift_index.at(zero);
    span[s0].add(flatten_shift(mat_identity(d), sd.entries[s0]));
    sd.fam_mats[s0].push_back(mat_identity(d));
    sd.fam_words[s0].push_back({});
    for (const Gen& g : gens) queue.push_back({s0, 0, g});
  }
  while (!queue.empty()) {
    auto [ps, pi, g] = queue.front();
    queue.pop_front();
    const Weight s =
        add_weight(sd.shifts[ps], gen_weight_shift(M.idx, g));
    auto it = sd.shift_index.find(s);
    if (it == sd.shift_index.end()) continue;  // image is identically zero
    const int si = it->second;
    Mat P = sparse_rmul(sd.fam_mats[ps][pi], M.act(g).entries);
    if (!span[si].add(flatten_shift(P, sd.entries[si]))) continue;
    Word w = sd.fam_words[ps][pi];
    w.push_back(g);
    sd.fam_mats[si].push_back(std::move(P));
    sd.fam_words[si].push_back(std::move(w));
    const int ni = static_cast<int>(sd.fam_mats[si].size()) - 1;
    for (const Gen& h : gens) queue.push_back({si, ni, h});
  }

  for (int s = 0; s < ns; ++s) {
    SpanBasis fs(static_cast<int>(sd.fam_mats[s].size()));
    for (const auto& [i, j] : sd.entries[s]) {
      Vec row;
      row.reserve(sd.fam_mats[s].size());
      for (const Mat& P : sd.fam_mats[s]) row.push_back(P[i][j]);
      fs.add(row);
    }
    sd.fspan.push_back(std::move(fs));
  }
  return sd;
}

// Standard word provenance: a block of E factors then a block of Ebar.
std::optional<std::pair<int, int>> parse_word_name(const std::string& name) {
  if (name == "1") return std::make_pair(0, 0);
  int k = 0, l = 0;
  bool seen_bar = false;
  size_t pos = 0;
  while (pos < name.size()) {
    if (name.compare(pos, 4, "Ebar") == 0) {
      seen_bar = true;
      ++l;
      pos += 4;
    } else if (name.compare(pos, 1, "E") == 0 && !seen_bar) {
      ++k;
      pos += 1;
    } else {
      return std::nullopt;
    }
    if (pos < name.size()) {
      if (name[pos] != '*') return std::nullopt;
      ++pos;
      if (pos == name.size()) return std::nullopt;
    }
  }
  if (k + l == 0) return std::nullopt;
  return std::make_pair(k, l);
}

// Tensor word in any factor order: '*'-separated E / Ebar / 1 factors.
// Unit factors are dropped: tensoring with the one-dimensional even space
// keeps both the flattened indices and the action matrices unchanged.
std::optional<std::vector<bool>> parse_interleaved(const std::string& name) {
  std::vector<bool> pattern;
  size_t pos = 0;
  while (pos <= name.size()) {
    const size_t star = std::min(name.find('*', pos), name.size());
    const std::string factor = name.substr(pos, star - pos);
    if (factor == "E")
      pattern.push_back(false);
    else if (factor == "Ebar")
      pattern.push_back(true);
    else if (factor != "1")
      return std::nullopt;
    if (star == name.size()) break;
    pos = star + 1;
    if (pos == name.size()) return std::nullopt;
  }
  return pattern;
}

// Exact isomorphism from the tensor word `name` onto the standard word
// module with the same factor content, as a chain of adjacent mixed swaps;
// certified against both module structures.
GradedOperator build_sort_sigma(GqContext& ctx, const std::string& name);

}  // namespace

void GqElement::add_term(const McKey& k, const RationalScalar& c) {
  if (c.is_zero()) return;
  auto it = terms.find(k);
  if (it == terms.end()) {
    terms.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

GqElement operator+(const GqElement& a, const GqElement& b) {
  GqElement r = a;
  for (const auto& [k, c] : b.terms) r.add_term(k, c);
  return r;
}

GqElement operator-(const GqElement& a, const GqElement& b) {
  GqElement r = a;
  for (const auto& [k, c] : b.terms) r.add_term(k, -c);
  return r;
}

GqElement gq_scale(const GqElement& a, const RationalScalar& c) {
  GqElement r;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : a.terms) r.add_term(k, v * c);
  return r;
}

bool operator==(const GqElement& a, const GqElement& b) {
  return a.terms == b.terms;
}

std::string element_str(const GqElement& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (const auto& [k, c] : f.terms) {
    if (!s.empty()) s += " + ";
    s += c.str() + "*t[" + k.module + ";" + std::to_string(k.row) + "," +
         std::to_string(k.col) + "]";
  }
  return s;
}

std::vector<CoprodTerm> coproduct_word(const SuperIndex& idx, const Word& w,
                                       const CoproductConvention& conv) {
  std::vector<CoprodTerm> acc = {{kOne, {}, {}}};
  for (const Gen& g : w) {
    std::vector<CoprodTerm> letter;
    switch (g.kind) {
      case Gen::K:
      case Gen::Kinv:
        letter.push_back({kOne, {g}, {g}});
        break;
      case Gen::Raise:
        letter.push_back({kOne, {g}, kweight_word(g.idx, conv.e_power)});
        letter.push_back({kOne, {}, {g}});
        break;
      case Gen::Lower:
        letter.push_back({kOne, {g}, {}});
        letter.push_back({kOne, kweight_word(g.idx, conv.f_power), {g}});
        break;
    }
    std::map<std::pair<std::string, std::string>, CoprodTerm> merged;
    for (const CoprodTerm& t : acc)
      for (const CoprodTerm& s : letter) {
        const int sign = word_parity(idx, t.right) * word_parity(idx, s.left);
        RationalScalar c = t.coeff * s.coeff;
        if (sign & 1) c = -c;
        Word left = concat(t.left, s.left);
        Word right = concat(t.right, s.right);
        const auto key = std::make_pair(word_str(left), word_str(right));
        auto it = merged.find(key);
        if (it == merged.end())
          merged.emplace(key, CoprodTerm{c, std::move(left), std::move(right)});
        else
          it->second.coeff += c;
      }
    acc.clear();
    for (auto& [k, t] : merged)
      if (!t.coeff.is_zero()) acc.push_back(std::move(t));
  }
  return acc;
}

std::pair<RationalScalar, Word> antipode_inv_word(
    const Gen& g, const CoproductConvention& conv) {
  switch (g.kind) {
    case Gen::K:
      return {kOne, {{Gen::Kinv, g.idx}}};
    case Gen::Kinv:
      return {kOne, {{Gen::K, g.idx}}};
    case Gen::Raise:
      return {-kOne, concat(kweight_word(g.idx, -conv.e_power), {g})};
    case Gen::Lower:
      return {-kOne, concat({g}, kweight_word(g.idx, -conv.f_power))};
  }
  throw std::logic_error("unreachable");
}

std::vector<Mat> intertwiner_basis(const RepModule& W, const RepModule& M) {
  const int dw = W.dim();
  const int dm = M.dim();
  // Unknowns T[i][j] with matching weight and parity; K conditions are then
  // automatic and the remaining generators give the linear system.
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < dm; ++i)
    for (int j = 0; j < dw; ++j)
      if (M.weights[i] == W.weights[j] &&
          M.space.parity[i] == W.space.parity[j])
        slots.push_back({i, j});
  const int ns = static_cast<int>(slots.size());
  if (ns == 0) return {};
  std::map<std::pair<int, int>, int> slot_index;
  for (int t = 0; t < ns; ++t) slot_index[slots[t]] = t;

  Mat sys;
  std::vector<const GradedOperator*> ops;
  for (const GradedOperator& op : W.raise_op) ops.push_back(&op);
  for (const GradedOperator& op : W.lower_op) ops.push_back(&op);
  std::vector<const GradedOperator*> mops;
  for (const GradedOperator& op : M.raise_op) mops.push_back(&op);
  for (const GradedOperator& op : M.lower_op) mops.push_back(&op);
  for (size_t o = 0; o < ops.size(); ++o) {
    const Mat& gw = ops[o]->entries;
    const Mat& gm = mops[o]->entries;
    // Condition rows: (T gw - gm T)[i][j] = 0.
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dw; ++j) {
        Vec row(ns);
        bool nonzero = false;
        for (int k = 0; k < dw; ++k) {
          if (gw[k][j].is_zero()) continue;
          auto it = slot_index.find({i, k});
          if (it == slot_index.end()) continue;
          row[it->second] += gw[k][j];
          nonzero = true;
        }
        for (int k = 0; k < dm; ++k) {
          if (gm[i][k].is_zero()) continue;
          auto it = slot_index.find({k, j});
          if (it == slot_index.end()) continue;
          row[it->second] -= gm[i][k];
          nonzero = true;
        }
        if (nonzero) sys.push_back(std::move(row));
      }
  }
  const std::vector<Vec> ker = sys.empty() ? [&] {
    std::vector<Vec> full;
    for (int t = 0; t < ns; ++t) {
      Vec e(ns);
      e[t] = kOne;
      full.push_back(std::move(e));
    }
    return full;
  }()
                                           : kernel(sys);
  std::vector<Mat> out;
  for (const Vec& v : ker) {
    Mat T(dm, Vec(dw));
    for (int t = 0; t < ns; ++t) T[slots[t].first][slots[t].second] = v[t];
    out.push_back(std::move(T));
  }
  return out;
}

GqContext::GqContext(const SuperIndex& idx)
    : idx_(idx),
      conv_(Calibration::is_set() ? Calibration::get() : calibrate_coproduct()),
      cache_(idx) {
  const int d = idx_.dim();
  const Weight zero(d, 0);
  Weight hw_e(d, 0);
  hw_e[0] = 1;
  Weight hw_ebar(d, 0);
  hw_ebar[d - 1] = -1;
  const std::pair<Weight, std::pair<int, int>> seeds[] = {
      {zero, {0, 0}}, {hw_e, {1, 0}}, {hw_ebar, {0, 1}}};
  for (const auto& [hw, kl] : seeds) {
    const RepModule& W = ensure_word(kl.first, kl.second);
    if (!cache_.find_class(hw)) cache_.register_class(hw, W);
    origins_[class_name(hw)] = {W.provenance, mat_identity(W.dim()),
                                mat_identity(W.dim())};
  }
  sync_class_names();
}

const Decomposition& GqContext::decomposition_absorbed(int k, int l) {
  const Decomposition& dec = cache_.decomposition(k, l);
  const std::string origin = cache_.word(k, l).provenance;
  for (const Summand& s : dec.summands) record_origin(s, origin);
  sync_class_names();
  return dec;
}

void GqContext::record_origin(const Summand& s, const std::string& origin) {
  const std::string cls = class_name(s.highest_weight);
  if (origins_.count(cls)) return;
  // Valid only when the registered realization is this summand's module;
  // the class may have been extracted from another block first.
  const RepModule* reg = cache_.find_class(s.highest_weight);
  if (!reg || reg->space != s.module.space || reg->actK != s.module.actK ||
      reg->raise_op != s.module.raise_op || reg->lower_op != s.module.lower_op)
    return;
  // The registered realization acts in the closure basis: with C the
  // column-stacked basis, pi_cls(x) = C^+ pi_M(x) C for any left inverse
  // C^+, and the coefficients expand accordingly.
  const int dc = static_cast<int>(s.basis.size());
  const int dm = dc > 0 ? static_cast<int>(s.basis[0].size()) : 0;
  Mat C(dm, Vec(dc));
  for (int r = 0; r < dc; ++r)
    for (int i = 0; i < dm; ++i) C[i][r] = s.basis[r][i];
  Mat ctc(dc, Vec(dc));
  for (int a = 0; a < dc; ++a)
    for (int b = 0; b < dc; ++b)
      for (int i = 0; i < dm; ++i) ctc[a][b] += C[i][a] * C[i][b];
  const Mat ctc_inv = mat_inverse(ctc);
  Mat pinv(dc, Vec(dm));
  for (int a = 0; a < dc; ++a)
    for (int i = 0; i < dm; ++i)
      for (int b = 0; b < dc; ++b) pinv[a][i] += ctc_inv[a][b] * C[i][b];
  origins_[cls] = {origin, std::move(pinv), std::move(C)};
}

bool GqContext::expandable(const std::string& name) const {
  if (parse_word_name(name)) return true;
  auto it = origins_.find(name);
  return it != origins_.end() && expandable(it->second.origin);
}

bool GqContext::expand_key(const McKey& k, const RationalScalar& c,
                           GqElement& out) {
  if (parse_word_name(k.module)) {
    out.add_term(k, c);
    return true;
  }
  auto it = origins_.find(k.module);
  if (it == origins_.end()) return false;
  const ClassOrigin& o = it->second;
  const int dm = static_cast<int>(o.expA.size());
  for (int i = 0; i < dm; ++i) {
    if (o.expB[k.row][i].is_zero()) continue;
    for (int j = 0; j < dm; ++j) {
      const RationalScalar cc = c * o.expB[k.row][i] * o.expA[j][k.col];
      if (cc.is_zero()) continue;
      if (!expand_key({o.origin, i, j}, cc, out)) return false;
    }
  }
  return true;
}

std::optional<GqElement> GqContext::expand_to_words(const GqElement& f) {
  GqElement out;
  for (const auto& [k, c] : f.terms)
    if (!expand_key(k, c, out)) return std::nullopt;
  return out;
}

const std::pair<Mat, Mat>& GqContext::sort_chain(const std::string& name) {
  auto it = chains_.find(name);
  if (it != chains_.end()) return it->second;
  const GradedOperator sigma = build_sort_sigma(*this, name);
  return chains_
      .emplace(name, std::make_pair(sigma.entries, mat_inverse(sigma.entries)))
      .first->second;
}

GqElement GqContext::canonicalize_word_key(const McKey& key,
                                           const RationalScalar& c) {
  const auto pattern = parse_interleaved(key.module);
  if (!pattern) throw MathError("not a tensor word: " + key.module);
  int k = 0, l = 0;
  for (bool b : *pattern) (b ? l : k)++;
  const std::string std_name = ensure_word(k, l).provenance;
  GqElement formal;
  if (key.module == std_name) {
    formal.add_term(key, c);
  } else {
    // t^A_{IJ} = sum_{uv} sigma_inv[I][u] sigma[v][J] t^{std}_{uv}.
    const auto& [sigma, sigma_inv] = sort_chain(key.module);
    const int d = static_cast<int>(sigma.size());
    for (int u = 0; u < d; ++u) {
      if (sigma_inv[key.row][u].is_zero()) continue;
      for (int v = 0; v < d; ++v) {
        const RationalScalar cc = c * sigma_inv[key.row][u] * sigma[v][key.col];
        if (!cc.is_zero()) formal.add_term({std_name, u, v}, cc);
      }
    }
  }
  const ReduceInfo& info = reduce_info(std_name);
  if (!info.reducible) ensure_blocks(k + l);
  const BlockCoords& bc = block_coords(std_name);
  const int d = module_named(std_name).dim();
  GqElement out;
  for (const auto& [kk, cc] : formal.terms) {
    const Vec& coords = bc.entry_coords[kk.row * d + kk.col];
    for (size_t t = 0; t < coords.size(); ++t)
      if (!coords[t].is_zero()) out.add_term(bc.basis[t], cc * coords[t]);
  }
  return out;
}

const RepModule& GqContext::ensure_word(int k, int l) {
  const RepModule& W = cache_.word(k, l);
  named_[W.provenance] = &W;
  return W;
}

void GqContext::sync_class_names() {
  for (const Weight& w : cache_.registered_weights())
    named_["W" + weight_str(w)] = cache_.find_class(w);
}

void GqContext::ensure_blocks(int degree) {
  for (int k = 0; k <= degree; ++k)
    for (int l = 0; k + l <= degree; ++l) {
      ensure_word(k, l);
      decomposition_absorbed(k, l);
    }
}

std::string GqContext::class_name(const Weight& hw) const {
  return "W" + weight_str(hw);
}

const RepModule& GqContext::module_named(const std::string& name) {
  auto it = named_.find(name);
  if (it != named_.end()) return *it->second;
  sync_class_names();
  it = named_.find(name);
  if (it != named_.end()) return *it->second;
  if (const auto kl = parse_word_name(name))
    return ensure_word(kl->first, kl->second);
  throw MathError("unknown module name: " + name);
}

const RepModule& GqContext::tensor_named(const std::string& a,
                                         const std::string& b) {
  const std::string name = a + "*" + b;
  auto it = named_.find(name);
  if (it != named_.end()) return *it->second;
  // Prefer the shared word module when the name is a standard word; the
  // tensor product is associative on the nose, so the matrices agree.
  try {
    return module_named(name);
  } catch (const MathError&) {
  }
  const RepModule& A = module_named(a);
  const RepModule& B = module_named(b);
  auto owned = std::make_unique<RepModule>(tensor_module_with(A, B, conv_));
  owned->provenance = name;
  const RepModule* ptr = owned.get();
  owned_.push_back(std::move(owned));
  named_[name] = ptr;
  return *ptr;
}

GqElement GqContext::mc(const std::string& module, int row, int col) {
  const RepModule& M = module_named(module);
  if (row < 0 || col < 0 || row >= M.dim() || col >= M.dim())
    throw MathError("matrix coefficient index out of range");
  GqElement f;
  f.add_term({module, row, col}, kOne);
  return f;
}

GqElement GqContext::unit() {
  return mc(class_name(Weight(idx_.dim(), 0)), 0, 0);
}

int GqContext::key_parity(const McKey& k) {
  const RepModule& M = module_named(k.module);
  return (M.space.parity[k.row] + M.space.parity[k.col]) & 1;
}

std::optional<int> GqContext::element_parity(const GqElement& f) {
  std::optional<int> p;
  for (const auto& [k, c] : f.terms) {
    const int kp = key_parity(k);
    if (!p)
      p = kp;
    else if (*p != kp)
      return std::nullopt;
  }
  return p;
}

RationalScalar GqContext::pair_word(const GqElement& f, const Word& w) {
  RationalScalar out;
  for (const auto& [k, c] : f.terms) {
    const RepModule& M = module_named(k.module);
    out += c * M.act_word(w).entries[k.row][k.col];
  }
  return out;
}

GqElement GqContext::multiply(const GqElement& f, const GqElement& g) {
  // Work on word coefficients whenever the factors expand onto them: the
  // product then canonicalizes inside one standard block, which makes the
  // normal form independent of the association order.
  const auto fe = expand_to_words(f);
  const auto ge = expand_to_words(g);
  const GqElement& fl = fe ? *fe : f;
  const GqElement& gl = ge ? *ge : g;
  GqElement prod;
  for (const auto& [kf, cf] : fl.terms) {
    const RepModule& M = module_named(kf.module);
    const int pi = M.space.parity[kf.row];
    for (const auto& [kg, cg] : gl.terms) {
      const RepModule& N = module_named(kg.module);
      const RepModule& T = tensor_named(kf.module, kg.module);
      const int dn = N.dim();
      RationalScalar c = cf * cg;
      if (((N.space.parity[kg.row] + N.space.parity[kg.col]) & 1) && pi)
        c = -c;
      prod.add_term({T.provenance, kf.row * dn + kg.row, kf.col * dn + kg.col},
                    c);
    }
  }
  return peter_weyl_reduce(prod);
}

const ReduceInfo& GqContext::reduce_info(const std::string& module) {
  auto it = reduce_.find(module);
  if (it != reduce_.end()) return it->second;
  const RepModule& M = module_named(module);
  ReduceInfo info;
  for (const Weight& hw : cache_.registered_weights())
    if (class_name(hw) == module) {
      // Registered class realization: already canonical.
      info.reducible = true;
      const int d = M.dim();
      info.pieces.push_back({module, mat_identity(d), mat_identity(d)});
      return reduce_.emplace(module, std::move(info)).first->second;
    }
  const auto kl = parse_word_name(module);
  Decomposition local;
  if (!kl) local = decompose(M);
  const Decomposition& dec =
      kl ? decomposition_absorbed(kl->first, kl->second) : local;
  if (!kl) {
    for (const Summand& s : dec.summands) {
      if (!cache_.find_class(s.highest_weight))
        cache_.register_class(s.highest_weight, s.module);
      record_origin(s, module);
    }
    sync_class_names();
  }
  if (dec.residue_dim > 0) {
    info.reducible = false;
    flagged_.insert(module);
    return reduce_.emplace(module, std::move(info)).first->second;
  }
  const int d = M.dim();
  Mat P(d, Vec(d));
  int cur = 0;
  for (const Summand& s : dec.summands) {
    for (size_t r = 0; r < s.basis.size(); ++r)
      for (int i = 0; i < d; ++i) P[i][cur + static_cast<int>(r)] = s.basis[r][i];
    cur += static_cast<int>(s.basis.size());
  }
  const Mat Pinv = mat_inverse(P);
  info.reducible = true;
  cur = 0;
  for (const Summand& s : dec.summands) {
    const int dc = s.module.dim();
    const RepModule* W = cache_.find_class(s.highest_weight);
    Mat phi;
    if (W == &s.module) {
      phi = mat_identity(dc);
    } else {
      const std::vector<Mat> basis = intertwiner_basis(s.module, *W);
      if (basis.size() != 1)
        throw MathError("intertwiner space between realizations of " +
                        class_name(s.highest_weight) + " has dimension " +
                        std::to_string(basis.size()));
      phi = basis[0];
    }
    const Mat phinv = mat_inverse(phi);
    ClassPiece piece;
    piece.cls = class_name(s.highest_weight);
    piece.A.assign(d, Vec(dc));
    piece.B.assign(dc, Vec(d));
    for (int i = 0; i < d; ++i)
      for (int u = 0; u < dc; ++u)
        for (int r = 0; r < dc; ++r)
          piece.A[i][u] += P[i][cur + r] * phinv[r][u];
    for (int v = 0; v < dc; ++v)
      for (int j = 0; j < d; ++j)
        for (int r = 0; r < dc; ++r)
          piece.B[v][j] += phi[v][r] * Pinv[cur + r][j];
    info.pieces.push_back(std::move(piece));
    cur += dc;
  }
  return reduce_.emplace(module, std::move(info)).first->second;
}

GqElement GqContext::peter_weyl_reduce(const GqElement& f) {
  GqElement out;
  for (const auto& [k, c] : f.terms) {
    bool is_class = false;
    for (const Weight& hw : cache_.registered_weights())
      if (class_name(hw) == k.module) {
        is_class = true;
        break;
      }
    if (is_class) {
      out.add_term(k, c);
      continue;
    }
    if (parse_interleaved(k.module)) {
      out = out + canonicalize_word_key(k, c);
      continue;
    }
    const ReduceInfo& info = reduce_info(k.module);
    if (!info.reducible) {
      out.add_term(k, c);
      continue;
    }
    for (const ClassPiece& piece : info.pieces) {
      const int dc = static_cast<int>(piece.B.size());
      for (int u = 0; u < dc; ++u) {
        if (piece.A[k.row][u].is_zero()) continue;
        for (int v = 0; v < dc; ++v) {
          const RationalScalar coeff =
              c * piece.A[k.row][u] * piece.B[v][k.col];
          out.add_term({piece.cls, u, v}, coeff);
        }
      }
    }
  }
  return out;
}

const ModuleFunctionals& GqContext::module_functionals(
    const std::string& module) {
  auto it = functionals_.find(module);
  if (it != functionals_.end()) return it->second;
  const RepModule& M = module_named(module);
  const ShiftData sd = analyze_module(M);
  const int d = M.dim();
  ModuleFunctionals mf;
  std::vector<int> offset(sd.shifts.size() + 1, 0);
  std::vector<std::vector<std::pair<int, int>>> indep(sd.shifts.size());
  for (size_t s = 0; s < sd.shifts.size(); ++s) {
    SpanBasis fs(static_cast<int>(sd.fam_mats[s].size()));
    for (const auto& [i, j] : sd.entries[s]) {
      Vec row;
      for (const Mat& P : sd.fam_mats[s]) row.push_back(P[i][j]);
      if (fs.add(row)) indep[s].push_back({i, j});
    }
    offset[s + 1] = offset[s] + static_cast<int>(indep[s].size());
  }
  for (size_t s = 0; s < sd.shifts.size(); ++s)
    for (const auto& e : indep[s]) mf.independent.push_back(e);
  mf.expand.assign(d * d, Vec(mf.independent.size()));
  for (size_t s = 0; s < sd.shifts.size(); ++s) {
    SpanBasis fs(static_cast<int>(sd.fam_mats[s].size()));
    for (const auto& [i, j] : indep[s]) {
      Vec row;
      for (const Mat& P : sd.fam_mats[s]) row.push_back(P[i][j]);
      fs.add(row);
    }
    for (const auto& [i, j] : sd.entries[s]) {
      Vec row;
      for (const Mat& P : sd.fam_mats[s]) row.push_back(P[i][j]);
      const auto combo = fs.coordinates(row);
      if (!combo) throw MathError("entry escapes its shift span");
      for (size_t t = 0; t < combo->size(); ++t)
        mf.expand[i * d + j][offset[s] + static_cast<int>(t)] = (*combo)[t];
    }
  }
  return functionals_.emplace(module, std::move(mf)).first->second;
}

const BlockCoords& GqContext::block_coords(const std::string& module) {
  auto it = blocks_.find(module);
  if (it != blocks_.end()) return it->second;
  const RepModule& M = module_named(module);
  const ReduceInfo& info = reduce_info(module);
  const int d = M.dim();
  BlockCoords bc;
  bc.module = module;
  if (info.reducible) {
    std::map<McKey, int> colof;
    for (const ClassPiece& piece : info.pieces) {
      const int dc = static_cast<int>(piece.B.size());
      for (int u = 0; u < dc; ++u)
        for (int v = 0; v < dc; ++v) {
          const McKey key{piece.cls, u, v};
          if (!colof.count(key)) {
            colof[key] = static_cast<int>(bc.basis.size());
            bc.basis.push_back(key);
          }
        }
    }
    bc.entry_coords.assign(d * d, Vec(bc.basis.size()));
    for (const ClassPiece& piece : info.pieces) {
      const int dc = static_cast<int>(piece.B.size());
      for (int i = 0; i < d; ++i)
        for (int u = 0; u < dc; ++u) {
          if (piece.A[i][u].is_zero()) continue;
          for (int j = 0; j < d; ++j)
            for (int v = 0; v < dc; ++v) {
              const RationalScalar coeff = piece.A[i][u] * piece.B[v][j];
              if (coeff.is_zero()) continue;
              bc.entry_coords[i * d + j][colof.at(McKey{piece.cls, u, v})] +=
                  coeff;
            }
        }
    }
    bc.fully_reduced = true;
    return blocks_.emplace(module, std::move(bc)).first->second;
  }

  // Glued block: split off every registered class whose coefficients factor
  // through this module, then complete with formal entries.
  bc.fully_reduced = false;
  const ShiftData sd = analyze_module(M);
  const int ns = static_cast<int>(sd.shifts.size());
  std::vector<SpanBasis> bspan;
  for (int s = 0; s < ns; ++s)
    bspan.emplace_back(static_cast<int>(sd.fam_mats[s].size()));
  std::vector<std::vector<int>> percol(ns);  // bspan position -> basis column

  long msum = 0;
  for (long x : M.weights[0]) msum += x;
  sync_class_names();
  for (const Weight& hw : cache_.registered_weights()) {
    const RepModule& W = *cache_.find_class(hw);
    long csum = 0;
    for (long x : hw) csum += x;
    if (csum != msum || W.dim() > d) continue;
    const int dc = W.dim();
    int inside = 0, outside = 0;
    std::map<int, std::vector<Mat>> wimages;  // shift -> images of fam words
    std::vector<std::pair<int, Vec>> rows;    // shift index, evaluation row
    for (int r = 0; r < dc; ++r)
      for (int s = 0; s < dc; ++s) {
        const Weight shift = sub_weight(W.weights[r], W.weights[s]);
        auto sit = sd.shift_index.find(shift);
        if (sit == sd.shift_index.end()) {
          ++outside;
          continue;
        }
        auto wit = wimages.find(sit->second);
        if (wit == wimages.end()) {
          std::vector<Mat> imgs;
          for (const Word& w : sd.fam_words[sit->second])
            imgs.push_back(W.act_word(w).entries);
          wit = wimages.emplace(sit->second, std::move(imgs)).first;
        }
        Vec row;
        row.reserve(wit->second.size());
        for (const Mat& P : wit->second) row.push_back(P[r][s]);
        if (sd.fspan[sit->second].contains(row)) {
          ++inside;
          rows.push_back({sit->second, std::move(row)});
        } else {
          ++outside;
        }
      }
    if (inside == 0) continue;
    if (outside != 0)
      throw MathError("class " + class_name(hw) +
                      " factors only partially through " + module);
    int t = 0;
    for (int r = 0; r < dc; ++r)
      for (int s = 0; s < dc; ++s) {
        const int si = rows[t].first;
        if (!bspan[si].add(rows[t].second))
          throw MathError("class coefficients overlap inside " + module);
        percol[si].push_back(static_cast<int>(bc.basis.size()));
        bc.basis.push_back({class_name(hw), r, s});
        ++t;
      }
  }
  for (int s = 0; s < ns; ++s)
    for (const auto& [i, j] : sd.entries[s]) {
      Vec row;
      for (const Mat& P : sd.fam_mats[s]) row.push_back(P[i][j]);
      if (!bspan[s].add(row)) continue;
      percol[s].push_back(static_cast<int>(bc.basis.size()));
      bc.basis.push_back({module, i, j});
    }
  int total = 0, expected = 0;
  for (int s = 0; s < ns; ++s) {
    total += bspan[s].size();
    expected += sd.fspan[s].size();
  }
  if (total != expected)
    throw MathError("leftover completion misses the functional span");

  bc.entry_coords.assign(d * d, Vec(bc.basis.size()));
  for (int s = 0; s < ns; ++s)
    for (const auto& [i, j] : sd.entries[s]) {
      Vec row;
      for (const Mat& P : sd.fam_mats[s]) row.push_back(P[i][j]);
      const auto combo = bspan[s].coordinates(row);
      if (!combo) throw MathError("entry escapes the block span");
      for (size_t t = 0; t < combo->size(); ++t)
        bc.entry_coords[i * d + j][percol[s][t]] = (*combo)[t];
    }
  return blocks_.emplace(module, std::move(bc)).first->second;
}

GqElement GqContext::act_R(const Gen& g, const GqElement& f) {
  GqElement out;
  const int gp = gen_parity(idx_, g);
  for (const auto& [k, c] : f.terms) {
    const RepModule& M = module_named(k.module);
    const Mat& op = M.act(g).entries;
    const int sign =
        gp * ((M.space.parity[k.row] + M.space.parity[k.col] + gp) & 1);
    RationalScalar cc = c;
    if (sign & 1) cc = -cc;
    for (int r = 0; r < M.dim(); ++r) {
      if (op[r][k.col].is_zero()) continue;
      out.add_term({k.module, k.row, r}, cc * op[r][k.col]);
    }
  }
  return out;
}

GqElement GqContext::act_R_word(const Word& w, const GqElement& f) {
  GqElement out = f;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out = act_R(*it, out);
  return out;
}

GqElement GqContext::act_L(const Gen& g, const GqElement& f) {
  GqElement out;
  const int gp = gen_parity(idx_, g);
  for (const auto& [k, c] : f.terms) {
    const RepModule& M = module_named(k.module);
    const Mat& op = antipode_inv_image(M, g, conv_).entries;
    // The coefficient-parity sign makes this a genuine algebra action
    // (the inverse antipode is graded-antimultiplicative) and makes left
    // and right translation commute on the nose.
    const int sign = gp * ((M.space.parity[k.row] + M.space.parity[k.col]) & 1);
    RationalScalar cc = c;
    if (sign & 1) cc = -cc;
    for (int r = 0; r < M.dim(); ++r) {
      if (op[k.row][r].is_zero()) continue;
      out.add_term({k.module, r, k.col}, cc * op[k.row][r]);
    }
  }
  return out;
}

GqElement GqContext::act_L_word(const Word& w, const GqElement& f) {
  GqElement out = f;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out = act_L(*it, out);
  return out;
}

IndependenceReport GqContext::check_independence(int kmax, int lmax,
                                                 int maxlen) {
  IndependenceReport rep;
  rep.kmax = kmax;
  rep.lmax = lmax;
  rep.maxlen = maxlen;
  std::set<Weight> hws;
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= lmax; ++l)
      for (const Summand& s : decomposition_absorbed(k, l).summands)
        hws.insert(s.highest_weight);
  std::vector<const RepModule*> classes;
  for (const Weight& hw : hws) {
    rep.classes.push_back(class_name(hw));
    classes.push_back(cache_.find_class(hw));
    rep.n_functionals += classes.back()->dim() * classes.back()->dim();
  }
  const std::vector<Word> words = enumerate_words(idx_, maxlen);
  rep.n_words = static_cast<long>(words.size());

  // Evaluation rows, one per class coefficient, in class-then-entry order.
  std::vector<Vec> rows;
  std::vector<McKey> row_keys;
  for (size_t ci = 0; ci < classes.size(); ++ci) {
    const RepModule& W = *classes[ci];
    std::vector<Mat> images;
    images.reserve(words.size());
    for (const Word& w : words) images.push_back(W.act_word(w).entries);
    for (int r = 0; r < W.dim(); ++r)
      for (int s = 0; s < W.dim(); ++s) {
        Vec row;
        row.reserve(words.size());
        for (const Mat& P : images) row.push_back(P[r][s]);
        rows.push_back(std::move(row));
        row_keys.push_back({rep.classes[ci], r, s});
      }
  }

  // Modular witness: full rank mod p certifies exact full rank, because a
  // nonvanishing modular minor has a nonvanishing exact determinant.
  const std::uint64_t p = 1000000007ULL;
  const std::uint64_t q0s[] = {2, 3, 5, 7, 11, 13};
  for (std::uint64_t q0 : q0s) {
    bool pole = false;
    std::vector<std::vector<std::uint64_t>> m;
    for (const Vec& row : rows) {
      std::vector<std::uint64_t> r;
      r.reserve(row.size());
      for (const RationalScalar& x : row) {
        const auto v = x.eval_mod(q0, p);
        if (!v) {
          pole = true;
          break;
        }
        r.push_back(*v);
      }
      if (pole) break;
      m.push_back(std::move(r));
    }
    if (pole) continue;
    rep.q0 = q0;
    rep.p = p;
    rep.rank = rank_modp(std::move(m), p);
    break;
  }
  if (rep.rank == rep.n_functionals) {
    rep.full_rank = true;
    return rep;
  }

  // Short modular rank: decide exactly and report one dependency.
  SpanBasis span(static_cast<int>(words.size()));
  std::vector<size_t> accepted;
  int exact_rank = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (span.add(rows[i])) {
      accepted.push_back(i);
      ++exact_rank;
      continue;
    }
    const auto combo = span.coordinates(rows[i]);
    std::string dep = "t[" + row_keys[i].module + ";" +
                      std::to_string(row_keys[i].row) + "," +
                      std::to_string(row_keys[i].col) + "] =";
    for (size_t t = 0; t < combo->size(); ++t) {
      if ((*combo)[t].is_zero()) continue;
      const McKey& k = row_keys[accepted[t]];
      dep += " + " + (*combo)[t].str() + "*t[" + k.module + ";" +
             std::to_string(k.row) + "," + std::to_string(k.col) + "]";
    }
    rep.dependency = dep;
    rep.rank = exact_rank;
    rep.full_rank = false;
    return rep;
  }
  rep.rank = exact_rank;
  rep.full_rank = exact_rank == rep.n_functionals;
  return rep;
}

std::string GqContext::dump_json(const GqElement& f) {
  std::ostringstream os;
  os << "{\"schema\":\"gq-element-1\",\"terms\":[";
  bool first = true;
  for (const auto& [k, c] : f.terms) {
    if (!first) os << ",";
    first = false;
    os << "{\"module\":\"" << k.module << "\",\"row\":" << k.row
       << ",\"col\":" << k.col << ",\"coeff\":\"" << c.str() << "\"}";
  }
  os << "]}";
  return os.str();
}

GradedOperator mixed_swap(const SuperIndex& idx) {
  const CoproductConvention conv =
      Calibration::is_set() ? Calibration::get() : calibrate_coproduct();
  const RepModule E = build_vector_rep(idx);
  const RepModule Ebar = build_dual_rep_with(E, conv);
  const RepModule A = tensor_module_with(Ebar, E, conv);
  const RepModule B = tensor_module_with(E, Ebar, conv);
  const GradedOperator R = build_R_pibar_pi(idx);
  const GradedOperator swap = graded_flip(Ebar.space, E.space) * R;
  const auto bad = check_intertwiner(swap, A, B);
  if (!bad.empty())
    throw MathError("mixed swap fails to intertwine: " + bad.front());
  if (rank(swap.entries) != A.dim())
    throw MathError("mixed swap is singular");
  return swap;
}

namespace {

GradedOperator build_sort_sigma(GqContext& ctx, const std::string& name) {
  const SuperIndex& idx = ctx.idx();
  const auto pattern = parse_interleaved(name);
  if (!pattern) throw MathError("not a tensor word: " + name);
  std::vector<bool> is_bar = *pattern;
  int k = 0, l = 0;
  for (bool b : is_bar) (b ? l : k)++;
  const RepModule& A = ctx.module_named(name);
  const RepModule& B = ctx.cache().word(k, l);
  if (A.dim() != B.dim())
    throw MathError("tensor word has unexpected dimension: " + name);

  const GradedOperator phi = mixed_swap(idx);
  const GradedSpace unit{std::vector<int>{0}};
  GradedOperator sigma = GradedOperator::identity(A.space);
  const GradedSpace v = idx.vector_space();
  while (true) {
    int t = -1;
    for (size_t i = 0; i + 1 < is_bar.size(); ++i)
      if (is_bar[i] && !is_bar[i + 1]) {
        t = static_cast<int>(i);
        break;
      }
    if (t < 0) break;
    GradedOperator step = GradedOperator::identity(unit);
    for (int i = 0; i < t; ++i)
      step = graded_kron(step, GradedOperator::identity(v));
    step = graded_kron(step, phi);
    for (size_t i = t + 2; i < is_bar.size(); ++i)
      step = graded_kron(step, GradedOperator::identity(v));
    sigma = step * sigma;
    std::swap(is_bar[t], is_bar[t + 1]);
  }
  const auto bad = check_intertwiner(sigma, A, B);
  if (!bad.empty())
    throw MathError("tensor word reordering fails to intertwine: " +
                    bad.front());
  if (rank(sigma.entries) != A.dim())
    throw MathError("tensor word reordering is singular");
  return sigma;
}

// Reversed tensor word Ebar^l (x) E^k and the exact isomorphism onto the
// standard word module E^k (x) Ebar^l.
struct MixedChain {
  std::string reversed_name;
  GradedOperator sigma;
};

MixedChain build_mixed_chain(GqContext& ctx, int k, int l) {
  MixedChain mc;
  std::string cur;
  for (int i = 0; i < l; ++i)
    cur = cur.empty() ? "Ebar" : ctx.tensor_named(cur, "Ebar").provenance;
  for (int i = 0; i < k; ++i)
    cur = cur.empty() ? "E" : ctx.tensor_named(cur, "E").provenance;
  if (cur.empty()) cur = "1";
  mc.reversed_name = cur;
  mc.sigma = build_sort_sigma(ctx, cur);
  return mc;
}

}  // namespace

GqElement rewrite_mixed(GqContext& ctx, int k, int l, int I, int J) {
  const MixedChain mc = build_mixed_chain(ctx, k, l);
  const RepModule& B = ctx.cache().word(k, l);
  const Mat sigma = mc.sigma.entries;
  const Mat sigma_inv = mat_inverse(sigma);
  GqElement out;
  const int d = B.dim();
  for (int u = 0; u < d; ++u) {
    if (sigma_inv[I][u].is_zero()) continue;
    for (int v = 0; v < d; ++v) {
      const RationalScalar c = sigma_inv[I][u] * sigma[v][J];
      if (!c.is_zero()) out.add_term({B.provenance, u, v}, c);
    }
  }
  return out;
}

MixedBlockReport mixed_block_factorization(GqContext& ctx, int k, int l,
                                           int maxlen) {
  MixedBlockReport rep;
  rep.k = k;
  rep.l = l;
  const MixedChain mc = build_mixed_chain(ctx, k, l);
  rep.iso_certified = true;
  const RepModule& A = ctx.module_named(mc.reversed_name);
  const RepModule& B = ctx.cache().word(k, l);
  const int d = A.dim();
  const std::vector<Word> words = enumerate_words(ctx.idx(), maxlen);
  const std::vector<Gen> gens = all_generators(ctx.idx());

  const std::uint64_t p = 1000000007ULL;
  const std::uint64_t q0s[] = {2, 3, 5, 7, 11, 13};
  for (std::uint64_t q0 : q0s) {
    bool pole = false;
    // Word images mod p for both modules, grown by letter extension.
    auto eval_op = [&](const Mat& m) {
      std::vector<std::vector<std::uint64_t>> r;
      for (const Vec& row : m) {
        std::vector<std::uint64_t> rr;
        for (const RationalScalar& x : row) {
          const auto v = x.eval_mod(q0, p);
          if (!v) {
            pole = true;
            return r;
          }
          rr.push_back(*v);
        }
        r.push_back(std::move(rr));
      }
      return r;
    };
    auto modmul = [&](const std::vector<std::vector<std::uint64_t>>& a,
                      const std::vector<std::vector<std::uint64_t>>& b) {
      const int n = static_cast<int>(a.size());
      std::vector<std::vector<std::uint64_t>> c(
          n, std::vector<std::uint64_t>(n, 0));
      for (int i = 0; i < n; ++i)
        for (int t = 0; t < n; ++t) {
          if (a[i][t] == 0) continue;
          for (int j = 0; j < n; ++j)
            c[i][j] = (c[i][j] + a[i][t] * b[t][j]) % p;
        }
      return c;
    };
    std::vector<std::vector<std::vector<std::uint64_t>>> genA, genB;
    for (const Gen& g : gens) {
      genA.push_back(eval_op(A.act(g).entries));
      if (pole) break;
      genB.push_back(eval_op(B.act(g).entries));
      if (pole) break;
    }
    if (pole) continue;
    std::vector<std::vector<std::vector<std::uint64_t>>> wA, wB;
    std::vector<std::vector<std::uint64_t>> id(
        d, std::vector<std::uint64_t>(d, 0));
    for (int i = 0; i < d; ++i) id[i][i] = 1;
    wA.push_back(id);
    wB.push_back(id);
    size_t level_begin = 0, produced = 1;
    for (int len = 1; len <= maxlen; ++len) {
      const size_t level_end = produced;
      for (size_t i = level_begin; i < level_end; ++i)
        for (size_t gi = 0; gi < gens.size(); ++gi) {
          wA.push_back(modmul(wA[i], genA[gi]));
          wB.push_back(modmul(wB[i], genB[gi]));
          ++produced;
        }
      level_begin = level_end;
    }
    std::vector<std::vector<std::uint64_t>> rowsA, rowsB, rowsU;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        std::vector<std::uint64_t> ra, rb;
        ra.reserve(words.size());
        rb.reserve(words.size());
        for (size_t t = 0; t < words.size(); ++t) {
          ra.push_back(wA[t][i][j]);
          rb.push_back(wB[t][i][j]);
        }
        rowsA.push_back(ra);
        rowsB.push_back(rb);
        rowsU.push_back(std::move(ra));
        rowsU.push_back(std::move(rb));
      }
    rep.q0 = q0;
    rep.p = p;
    rep.rank_reversed = rank_modp(std::move(rowsA), p);
    rep.rank_standard = rank_modp(std::move(rowsB), p);
    rep.rank_union = rank_modp(std::move(rowsU), p);
    break;
  }
  rep.equal = rep.iso_certified && rep.rank_reversed == rep.rank_standard &&
              rep.rank_standard == rep.rank_union && rep.rank_union > 0;
  return rep;
}

AxiomReport check_action_axioms(GqContext& ctx, std::uint64_t seed,
                                int count) {
  AxiomReport rep;
  std::mt19937_64 rng(seed);
  const SuperIndex& idx = ctx.idx();
  const std::vector<Gen> gens = all_generators(idx);
  ctx.tensor_named("E", "E");
  ctx.tensor_named("Ebar", "E");
  const std::vector<std::string> pool = {"E", "Ebar", "E*E", "Ebar*E"};
  auto rnd = [&](int n) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  };
  auto random_word = [&](int maxlen) {
    Word w;
    const int len = rnd(maxlen + 1);
    for (int i = 0; i < len; ++i) w.push_back(gens[rnd(static_cast<int>(gens.size()))]);
    return w;
  };
  auto fail = [&](const std::string& what, const std::string& detail) {
    ++rep.failed;
    rep.failures.push_back(what + ": " + detail);
  };
  for (int i = 0; i < count; ++i) {
    const Gen x = gens[rnd(static_cast<int>(gens.size()))];
    const Gen y = gens[rnd(static_cast<int>(gens.size()))];
    const std::string mod = pool[rnd(static_cast<int>(pool.size()))];
    const int dim = ctx.module_named(mod).dim();
    const GqElement f = ctx.mc(mod, rnd(dim), rnd(dim));
    const Word w = random_word(3);
    ++rep.checked;

    GqElement lr = ctx.act_L(x, ctx.act_R(y, f));
    GqElement rl = ctx.act_R(y, ctx.act_L(x, f));
    if (!(lr == rl))
      fail("translation commutation", gen_str(x) + "," + gen_str(y) + " on " +
                                          element_str(f));

    // Right translation against the pairing:
    // <R_x f, w> = (-1)^{|x|(|f|+|x|)} <f, w x>.
    const int fp = *ctx.element_parity(f);
    const int xp = gen_parity(idx, x);
    RationalScalar rhs = ctx.pair_word(f, concat(w, {x}));
    if ((xp * ((fp + xp) & 1)) & 1) rhs = -rhs;
    if (!(ctx.pair_word(ctx.act_R(x, f), w) == rhs))
      fail("right translation semantics", gen_str(x) + " on " + element_str(f));

    // Left translation: <L_x f, w> = (-1)^{|x||f|} coeff * <f, sw . w>
    // with coeff * sw the inverse antipode of x.
    const auto [sc, sw] = antipode_inv_word(x, ctx.convention());
    RationalScalar lhsL = sc * ctx.pair_word(f, concat(sw, w));
    if ((xp * fp) & 1) lhsL = -lhsL;
    if (!(ctx.pair_word(ctx.act_L(x, f), w) == lhsL))
      fail("left translation semantics", gen_str(x) + " on " + element_str(f));

    const Word u = random_word(2), v2 = random_word(2);
    if (!(ctx.act_R_word(concat(u, v2), f) ==
          ctx.act_R_word(u, ctx.act_R_word(v2, f))))
      fail("right word composition", word_str(u) + "|" + word_str(v2));
    if (!(ctx.act_L_word(concat(u, v2), f) ==
          ctx.act_L_word(u, ctx.act_L_word(v2, f))))
      fail("left word composition", word_str(u) + "|" + word_str(v2));
  }
  return rep;
}

}  // namespace glq
