#include "glq/uqrep.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>

namespace glq {

GradedSpace SuperIndex::vector_space() const {
  GradedSpace s;
  s.parity.resize(dim());
  for (int a = 1; a <= dim(); ++a) s.parity[a - 1] = parity(a);
  return s;
}

int gen_parity(const SuperIndex& idx, const Gen& g) {
  if (g.kind == Gen::K || g.kind == Gen::Kinv) return 0;
  return (idx.parity(g.idx) + idx.parity(g.idx + 1)) & 1;
}

int word_parity(const SuperIndex& idx, const Word& w) {
  int p = 0;
  for (const Gen& g : w) p ^= gen_parity(idx, g);
  return p;
}

bool counit_is_one(const Word& w) {
  for (const Gen& g : w)
    if (g.kind == Gen::Raise || g.kind == Gen::Lower) return false;
  return true;
}

std::vector<Gen> all_generators(const SuperIndex& idx) {
  std::vector<Gen> gens;
  for (int a = 1; a <= idx.dim(); ++a) gens.push_back({Gen::K, a});
  for (int a = 1; a <= idx.dim(); ++a) gens.push_back({Gen::Kinv, a});
  for (int c = 1; c < idx.dim(); ++c) gens.push_back({Gen::Raise, c});
  for (int c = 1; c < idx.dim(); ++c) gens.push_back({Gen::Lower, c});
  return gens;
}

std::string gen_str(const Gen& g) {
  switch (g.kind) {
    case Gen::K:
      return "K" + std::to_string(g.idx);
    case Gen::Kinv:
      return "K" + std::to_string(g.idx) + "^-1";
    case Gen::Raise:
      return "E" + std::to_string(g.idx) + "," + std::to_string(g.idx + 1);
    case Gen::Lower:
      return "E" + std::to_string(g.idx + 1) + "," + std::to_string(g.idx);
  }
  return "?";
}

std::string word_str(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += "*";
    s += gen_str(w[i]);
  }
  return s;
}

const std::vector<CoproductConvention>& coproduct_family() {
  static const std::vector<CoproductConvention> family = [] {
    std::vector<CoproductConvention> f;
    for (int e : {+1, -1})
      for (int fp : {-1, +1})
        for (bool gd : {true, false}) {
          std::string name = "raiseK=" + std::string(e > 0 ? "+1" : "-1") +
                             " lowerK=" + std::string(fp > 0 ? "+1" : "-1") +
                             " dual=" + (gd ? "graded" : "plain");
          f.push_back({e, fp, gd, name});
        }
    return f;
  }();
  return family;
}

namespace {
std::optional<CoproductConvention>& calibration_slot() {
  static std::optional<CoproductConvention> slot;
  return slot;
}
}  // namespace

bool Calibration::is_set() { return calibration_slot().has_value(); }

const CoproductConvention& Calibration::get() {
  if (!calibration_slot())
    throw StateError("coproduct convention not calibrated yet");
  return *calibration_slot();
}

void Calibration::set(const CoproductConvention& c) {
  auto& slot = calibration_slot();
  if (slot && !(*slot == c))
    throw StateError("coproduct convention already calibrated differently");
  slot = c;
}

void Calibration::reset() { calibration_slot().reset(); }

std::string weight_str(const Weight& w) {
  std::string s = "(";
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w[i]);
  }
  return s + ")";
}

const GradedOperator& RepModule::act(const Gen& g) const {
  switch (g.kind) {
    case Gen::K:
      return actK[g.idx - 1];
    case Gen::Kinv:
      return actKinv[g.idx - 1];
    case Gen::Raise:
      return raise_op[g.idx - 1];
    case Gen::Lower:
      return lower_op[g.idx - 1];
  }
  throw std::logic_error("unknown generator");
}

GradedOperator RepModule::act_word(const Word& w) const {
  GradedOperator r = GradedOperator::identity(space);
  for (const Gen& g : w) r = r * act(g);
  return r;
}

namespace {

// Representation image of (K_c K_{c+1}^{-1})^{power}, power in {+1,-1}.
GradedOperator kweight_image(const RepModule& M, int c, int power) {
  if (power > 0) return M.actK[c - 1] * M.actKinv[c];
  return M.actKinv[c - 1] * M.actK[c];
}

}  // namespace

std::vector<std::string> check_module(const RepModule& M) {
  std::vector<std::string> bad;
  const SuperIndex& idx = M.idx;
  const int d = M.dim();
  if (static_cast<int>(M.actK.size()) != idx.dim() ||
      static_cast<int>(M.actKinv.size()) != idx.dim() ||
      static_cast<int>(M.raise_op.size()) != idx.dim() - 1 ||
      static_cast<int>(M.lower_op.size()) != idx.dim() - 1 ||
      static_cast<int>(M.weights.size()) != d) {
    bad.push_back("generator table shape mismatch");
    return bad;
  }

  const GradedOperator id = GradedOperator::identity(M.space);
  for (int a = 1; a <= idx.dim(); ++a) {
    const GradedOperator& K = M.actK[a - 1];
    if (!(K * M.actKinv[a - 1] == id))
      bad.push_back("K" + std::to_string(a) + " inverse mismatch");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const RationalScalar want =
            i == j ? idx.q_a(a, M.weights[i][a - 1]) : RationalScalar(0);
        if (!(K.entries[i][j] == want)) {
          bad.push_back("K" + std::to_string(a) +
                        " is not diagonal with the recorded weights");
          goto next_a;
        }
      }
  next_a:;
  }

  for (int c = 1; c < idx.dim(); ++c) {
    const int want_parity = (idx.parity(c) + idx.parity(c + 1)) & 1;
    if (M.raise_op[c - 1].parity != want_parity ||
        M.lower_op[c - 1].parity != want_parity)
      bad.push_back("generator parity wrong at c=" + std::to_string(c));
    if (!M.raise_op[c - 1].parity_pattern_ok() ||
        !M.lower_op[c - 1].parity_pattern_ok())
      bad.push_back("parity pattern violated at c=" + std::to_string(c));
    for (int a = 1; a <= idx.dim(); ++a) {
      const long delta = (a == c ? 1 : 0) - (a == c + 1 ? 1 : 0);
      const GradedOperator& K = M.actK[a - 1];
      const GradedOperator& Ki = M.actKinv[a - 1];
      if (!(K * M.raise_op[c - 1] * Ki ==
            M.raise_op[c - 1].scaled(idx.q_a(a, delta))))
        bad.push_back("K-conjugation fails on raising c=" + std::to_string(c) +
                      ", a=" + std::to_string(a));
      if (!(K * M.lower_op[c - 1] * Ki ==
            M.lower_op[c - 1].scaled(idx.q_a(a, -delta))))
        bad.push_back("K-conjugation fails on lowering c=" + std::to_string(c) +
                      ", a=" + std::to_string(a));
    }
  }
  return bad;
}

RepModule build_trivial_rep(const SuperIndex& idx) {
  RepModule M;
  M.idx = idx;
  M.space = GradedSpace{{0}};
  const GradedOperator one = GradedOperator::identity(M.space);
  const GradedOperator nil = GradedOperator::zero(M.space, M.space, 0);
  M.actK.assign(idx.dim(), one);
  M.actKinv.assign(idx.dim(), one);
  for (int c = 1; c < idx.dim(); ++c) {
    GradedOperator z = nil;
    z.parity = (idx.parity(c) + idx.parity(c + 1)) & 1;
    M.raise_op.push_back(z);
    M.lower_op.push_back(z);
  }
  M.weights.assign(1, Weight(idx.dim(), 0));
  M.provenance = "1";
  return M;
}

RepModule build_vector_rep(const SuperIndex& idx) {
  if (idx.m < 1 || idx.n < 1)
    throw std::domain_error("vector representation needs m,n >= 1");
  RepModule M;
  M.idx = idx;
  M.space = idx.vector_space();
  const int d = idx.dim();
  for (int a = 1; a <= d; ++a) {
    GradedOperator K = GradedOperator::identity(M.space);
    GradedOperator Ki = K;
    K.entries[a - 1][a - 1] = idx.q_a(a, 1);
    Ki.entries[a - 1][a - 1] = idx.q_a(a, -1);
    M.actK.push_back(K);
    M.actKinv.push_back(Ki);
  }
  for (int c = 1; c < d; ++c) {
    M.raise_op.push_back(GradedOperator::unit(M.space, c - 1, c));
    M.lower_op.push_back(GradedOperator::unit(M.space, c, c - 1));
  }
  for (int a = 1; a <= d; ++a) {
    Weight w(d, 0);
    w[a - 1] = 1;
    M.weights.push_back(w);
  }
  M.provenance = "E";
  return M;
}

GradedOperator antipode_image(const RepModule& M, const Gen& g,
                              const CoproductConvention& conv) {
  switch (g.kind) {
    case Gen::K:
      return M.actKinv[g.idx - 1];
    case Gen::Kinv:
      return M.actK[g.idx - 1];
    case Gen::Raise:  // S(E_c) = -E_c X_c^{-1}
      return (M.raise_op[g.idx - 1] * kweight_image(M, g.idx, -conv.e_power))
          .scaled(RationalScalar(-1));
    case Gen::Lower:  // S(F_c) = -Y_c^{-1} F_c
      return (kweight_image(M, g.idx, -conv.f_power) * M.lower_op[g.idx - 1])
          .scaled(RationalScalar(-1));
  }
  throw std::logic_error("unknown generator");
}

GradedOperator antipode_inv_image(const RepModule& M, const Gen& g,
                                  const CoproductConvention& conv) {
  switch (g.kind) {
    case Gen::K:
      return M.actKinv[g.idx - 1];
    case Gen::Kinv:
      return M.actK[g.idx - 1];
    case Gen::Raise:  // S^{-1}(E_c) = -X_c^{-1} E_c
      return (kweight_image(M, g.idx, -conv.e_power) * M.raise_op[g.idx - 1])
          .scaled(RationalScalar(-1));
    case Gen::Lower:  // S^{-1}(F_c) = -F_c Y_c^{-1}
      return (M.lower_op[g.idx - 1] * kweight_image(M, g.idx, -conv.f_power))
          .scaled(RationalScalar(-1));
  }
  throw std::logic_error("unknown generator");
}

RepModule build_dual_rep_with(const RepModule& pi,
                              const CoproductConvention& conv) {
  RepModule M;
  M.idx = pi.idx;
  M.space = pi.space;
  auto dualize = [&](const Gen& g) {
    GradedOperator op = supertranspose(antipode_image(pi, g, conv));
    if (conv.graded_dual && gen_parity(pi.idx, g) == 1)
      op = op.scaled(RationalScalar(-1));
    return op;
  };
  for (int a = 1; a <= pi.idx.dim(); ++a) {
    M.actK.push_back(dualize({Gen::K, a}));
    M.actKinv.push_back(dualize({Gen::Kinv, a}));
  }
  for (int c = 1; c < pi.idx.dim(); ++c) {
    M.raise_op.push_back(dualize({Gen::Raise, c}));
    M.lower_op.push_back(dualize({Gen::Lower, c}));
  }
  for (const Weight& w : pi.weights) {
    Weight neg = w;
    for (long& x : neg) x = -x;
    M.weights.push_back(neg);
  }
  M.provenance = pi.provenance == "E" ? "Ebar" : "dual(" + pi.provenance + ")";
  return M;
}

RepModule build_dual_rep(const RepModule& pi) {
  return build_dual_rep_with(pi, Calibration::get());
}

RepModule tensor_module_with(const RepModule& A, const RepModule& B,
                             const CoproductConvention& conv) {
  if (!(A.idx == B.idx)) throw std::logic_error("tensor: index mismatch");
  RepModule M;
  M.idx = A.idx;
  M.space = GradedSpace::tensor(A.space, B.space);
  const GradedOperator idA = GradedOperator::identity(A.space);
  const GradedOperator idB = GradedOperator::identity(B.space);
  for (int a = 0; a < A.idx.dim(); ++a) {
    M.actK.push_back(graded_kron(A.actK[a], B.actK[a]));
    M.actKinv.push_back(graded_kron(A.actKinv[a], B.actKinv[a]));
  }
  for (int c = 1; c < A.idx.dim(); ++c) {
    M.raise_op.push_back(
        graded_kron(A.raise_op[c - 1], kweight_image(B, c, conv.e_power)) +
        graded_kron(idA, B.raise_op[c - 1]));
    M.lower_op.push_back(
        graded_kron(A.lower_op[c - 1], idB) +
        graded_kron(kweight_image(A, c, conv.f_power), B.lower_op[c - 1]));
  }
  M.weights.reserve(A.dim() * B.dim());
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < B.dim(); ++j) {
      Weight w = A.weights[i];
      for (int t = 0; t < A.idx.dim(); ++t) w[t] += B.weights[j][t];
      M.weights.push_back(std::move(w));
    }
  M.provenance = A.provenance + "*" + B.provenance;
  return M;
}

RepModule tensor_module(const RepModule& A, const RepModule& B) {
  return tensor_module_with(A, B, Calibration::get());
}

RepModule word_module(const SuperIndex& idx, int k, int l) {
  if (k == 0 && l == 0) return build_trivial_rep(idx);
  const RepModule E = build_vector_rep(idx);
  if (l == 0 && k == 1) return E;
  if (l == 0) return tensor_module(word_module(idx, k - 1, 0), E);
  const RepModule Ebar = build_dual_rep(E);
  if (k == 0 && l == 1) return Ebar;
  return tensor_module(word_module(idx, k, l - 1), Ebar);
}

std::vector<std::pair<Weight, Vec>> highest_weight_vectors(const RepModule& M) {
  std::map<Weight, std::vector<int>> spaces;
  for (int i = 0; i < M.dim(); ++i) spaces[M.weights[i]].push_back(i);

  std::vector<std::pair<Weight, Vec>> out;
  for (auto it = spaces.rbegin(); it != spaces.rend(); ++it) {
    const std::vector<int>& cols = it->second;
    Mat sys;
    for (const GradedOperator& up : M.raise_op)
      for (int r = 0; r < M.dim(); ++r) {
        Vec row(cols.size());
        bool nonzero = false;
        for (size_t j = 0; j < cols.size(); ++j) {
          row[j] = up.entries[r][cols[j]];
          nonzero = nonzero || !row[j].is_zero();
        }
        if (nonzero) sys.push_back(std::move(row));
      }
    std::vector<Vec> ker;
    if (sys.empty()) {
      for (size_t j = 0; j < cols.size(); ++j) {
        Vec e = zero_vec(static_cast<int>(cols.size()));
        e[j] = RationalScalar(1);
        ker.push_back(std::move(e));
      }
    } else {
      ker = kernel(sys);
    }
    for (const Vec& k : ker) {
      Vec full = zero_vec(M.dim());
      for (size_t j = 0; j < cols.size(); ++j) full[cols[j]] = k[j];
      out.emplace_back(it->first, std::move(full));
    }
  }
  return out;
}

namespace {

// Smallest subspace containing v and closed under all raising and lowering
// operators; returns the accepted vectors in breadth-first order.
Mat submodule_closure(const RepModule& M, const Vec& v) {
  SpanBasis span(M.dim());
  Mat basis;
  std::deque<Vec> frontier;
  span.add(v);
  basis.push_back(v);
  frontier.push_back(v);
  while (!frontier.empty()) {
    const Vec u = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& ops : {std::cref(M.raise_op), std::cref(M.lower_op)})
      for (const GradedOperator& op : ops.get()) {
        Vec w = op.apply(u);
        if (is_zero_vec(w)) continue;
        if (span.add(w)) {
          basis.push_back(w);
          frontier.push_back(w);
        }
      }
  }
  return basis;
}

int first_support(const Vec& v) {
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) return static_cast<int>(i);
  throw std::logic_error("zero vector has no support");
}

// Materialize the span of `basis` (closed under the action) as a RepModule.
RepModule submodule_from_basis(const RepModule& M, const Mat& basis,
                               const std::string& provenance) {
  SpanBasis span(M.dim());
  for (const Vec& b : basis) span.add(b);

  RepModule S;
  S.idx = M.idx;
  S.provenance = provenance;
  for (const Vec& b : basis) {
    const int lead = first_support(b);
    S.space.parity.push_back(M.space.parity[lead]);
    S.weights.push_back(M.weights[lead]);
  }
  const int d = static_cast<int>(basis.size());
  auto restrict_op = [&](const GradedOperator& op) {
    GradedOperator r = GradedOperator::zero(S.space, S.space, op.parity);
    for (int j = 0; j < d; ++j) {
      const auto coords = span.coordinates(op.apply(basis[j]));
      if (!coords) throw std::logic_error("closure is not action-stable");
      for (int i = 0; i < d; ++i) r.entries[i][j] = (*coords)[i];
    }
    return r;
  };
  for (const GradedOperator& op : M.actK) S.actK.push_back(restrict_op(op));
  for (const GradedOperator& op : M.actKinv) S.actKinv.push_back(restrict_op(op));
  for (const GradedOperator& op : M.raise_op) S.raise_op.push_back(restrict_op(op));
  for (const GradedOperator& op : M.lower_op) S.lower_op.push_back(restrict_op(op));
  return S;
}

}  // namespace

Decomposition decompose(const RepModule& M) {
  Decomposition dec;
  SpanBasis accepted(M.dim());
  for (const auto& [hw, v] : highest_weight_vectors(M)) {
    if (accepted.contains(v)) continue;
    const Mat basis = submodule_closure(M, v);
    RepModule S = submodule_from_basis(
        M, basis, M.provenance + "[hw=" + weight_str(hw) + "]");
    if (highest_weight_vectors(S).size() != 1) continue;  // not irreducible
    for (const Vec& b : basis)
      if (!accepted.add(b))
        throw std::logic_error("irreducible closure meets the accepted span");
    dec.summands.push_back({hw, std::move(S), basis});
  }
  dec.residue_dim = M.dim() - accepted.size();
  return dec;
}

Weight lowest_weight(const RepModule& W) {
  Mat sys;
  for (const GradedOperator& dn : W.lower_op)
    for (int r = 0; r < W.dim(); ++r) sys.push_back(dn.entries[r]);
  std::vector<Vec> ker = sys.empty() ? std::vector<Vec>{} : kernel(sys);
  if (sys.empty())
    return *std::min_element(W.weights.begin(), W.weights.end());
  if (ker.empty()) throw std::logic_error("module has no lowest weight vector");
  return W.weights[first_support(ker.front())];
}

const RepModule& ModuleCache::word(int k, int l) {
  const auto key = std::make_pair(k, l);
  auto it = words_.find(key);
  if (it == words_.end())
    it = words_.emplace(key, word_module(idx_, k, l)).first;
  return it->second;
}

const Decomposition& ModuleCache::decomposition(int k, int l) {
  const auto key = std::make_pair(k, l);
  auto it = decs_.find(key);
  if (it == decs_.end()) {
    it = decs_.emplace(key, decompose(word(k, l))).first;
    for (const Summand& s : it->second.summands)
      if (!find_class(s.highest_weight))
        register_class(s.highest_weight, s.module);
  }
  return it->second;
}

const RepModule* ModuleCache::find_class(const Weight& hw) const {
  auto it = classes_.find(hw);
  return it == classes_.end() ? nullptr : &it->second;
}

const RepModule& ModuleCache::register_class(const Weight& hw,
                                             const RepModule& M) {
  return classes_.emplace(hw, M).first->second;
}

std::vector<Weight> ModuleCache::registered_weights() const {
  std::vector<Weight> out;
  for (const auto& [w, _] : classes_) out.push_back(w);
  return out;
}

std::vector<Weight> enumerate_lambda(const SuperIndex& idx, int k,
                                     TensorSide side) {
  ModuleCache cache(idx);
  std::vector<Weight> found;
  found.emplace_back(idx.dim(), 0);
  for (int j = 1; j <= k; ++j) {
    const Decomposition& dec =
        side == TensorSide::contravariant ? cache.decomposition(j, 0)
                                          : cache.decomposition(0, j);
    for (const Summand& s : dec.summands)
      if (std::find(found.begin(), found.end(), s.highest_weight) == found.end())
        found.push_back(s.highest_weight);
  }
  std::sort(found.begin(), found.end(), std::greater<>());
  return found;
}

Weight dagger(const Weight& lambda, const SuperIndex& idx, int degree) {
  ModuleCache cache(idx);
  for (int j = 0; j <= degree; ++j) {
    cache.decomposition(j, 0);
    cache.decomposition(0, j);
  }
  const RepModule* W = cache.find_class(lambda);
  if (!W)
    throw std::domain_error("weight " + weight_str(lambda) +
                            " not found in the enumerated tensor range");
  Weight low = lowest_weight(*W);
  for (long& x : low) x = -x;
  return low;
}

std::string decomposition_report_json(const SuperIndex& idx,
                                      const std::string& word,
                                      const Decomposition& dec) {
  nlohmann::json j;
  j["schema"] = "decomposition/v1";
  j["m"] = idx.m;
  j["n"] = idx.n;
  j["word"] = word;
  j["summands"] = nlohmann::json::array();
  for (const Summand& s : dec.summands)
    j["summands"].push_back(
        {{"highest_weight", s.highest_weight}, {"dim", s.module.dim()}});
  j["residue_dim"] = dec.residue_dim;
  return j.dump(2) + "\n";
}

}  // namespace glq
