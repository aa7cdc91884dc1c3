#include "glq/homogeneous.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <utility>

#include "glq/rmatrix.hpp"

namespace glq {
namespace {

Weight negate_weight(const Weight& w) {
  Weight out(w.size());
  for (size_t i = 0; i < w.size(); ++i) out[i] = -w[i];
  return out;
}

// Tensor-word root of a provenance string: optional trailing irrep
// selectors stripped, the rest must be a product of E/Ebar/1 factors.
bool tensor_rooted(const std::string& provenance) {
  std::string s = provenance;
  while (!s.empty() && s.back() == ']') {
    const size_t pos = s.rfind("[hw=");
    if (pos == std::string::npos) return false;
    s = s.substr(0, pos);
  }
  if (s.empty()) return false;
  size_t start = 0;
  while (start <= s.size()) {
    const size_t stop = std::min(s.find('*', start), s.size());
    const std::string f = s.substr(start, stop - start);
    if (f != "E" && f != "Ebar" && f != "1") return false;
    start = stop + 1;
  }
  return true;
}

std::vector<Word> words_up_to(const SuperIndex& idx, int maxlen) {
  const std::vector<Gen> gens = all_generators(idx);
  std::vector<Word> out;
  out.push_back({});
  size_t begin = 0;
  for (int len = 1; len <= maxlen; ++len) {
    const size_t end = out.size();
    for (size_t i = begin; i < end; ++i)
      for (const Gen& g : gens) {
        Word w = out[i];
        w.push_back(g);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

}  // namespace

bool ParabolicSpec::valid() const {
  if (idx.m <= 0 || idx.n <= 0) return false;
  for (int c : theta)
    if (c < 1 || c >= idx.dim()) return false;
  return true;
}

std::vector<Gen> ParabolicSpec::generators(Side side) const {
  std::vector<Gen> out;
  for (int a = 1; a <= idx.dim(); ++a) out.push_back({Gen::K, a});
  for (int a = 1; a <= idx.dim(); ++a) out.push_back({Gen::Kinv, a});
  for (int c = 1; c < idx.dim(); ++c)
    if (theta.count(c) || side == Side::plus) out.push_back({Gen::Raise, c});
  for (int c = 1; c < idx.dim(); ++c)
    if (theta.count(c) || side == Side::minus) out.push_back({Gen::Lower, c});
  return out;
}

std::string ParabolicSpec::str() const {
  std::ostringstream os;
  os << "theta={";
  bool first = true;
  for (int c : theta) {
    if (!first) os << ",";
    os << c;
    first = false;
  }
  os << "}";
  return os.str();
}

RepModule restrict_module(const RepModule& M, const ParabolicSpec& P,
                          Side side) {
  if (!P.valid() || !(P.idx == M.idx))
    throw MathError("parabolic data does not match the module index");
  RepModule out = M;
  for (int c = 1; c < M.idx.dim(); ++c) {
    const int gp = gen_parity(M.idx, {Gen::Raise, c});
    if (!P.theta.count(c) && side != Side::plus)
      out.raise_op[c - 1] = GradedOperator::zero(M.space, M.space, gp);
    if (!P.theta.count(c) && side != Side::minus)
      out.lower_op[c - 1] = GradedOperator::zero(M.space, M.space, gp);
  }
  const char* tag = side == Side::levi ? "|k" : side == Side::plus ? "|p+" : "|p-";
  out.provenance = M.provenance + tag + P.str();
  return out;
}

int hom_dim(const RepModule& W, const RepModule& M, const ParabolicSpec& P,
            Side side) {
  return static_cast<int>(
      intertwiner_basis(restrict_module(W, P, side), restrict_module(M, P, side))
          .size());
}

RepModule weight_line_module(const SuperIndex& idx, const Weight& mu) {
  if (static_cast<int>(mu.size()) != idx.dim())
    throw MathError("weight length does not match the index");
  long odd_sum = 0;
  for (int a = idx.m + 1; a <= idx.dim(); ++a) odd_sum += mu[a - 1];
  const int par = static_cast<int>(((odd_sum % 2) + 2) % 2);

  RepModule V;
  V.idx = idx;
  V.space = GradedSpace{{par}};
  V.weights = {mu};
  V.provenance = "line" + weight_str(mu);
  for (int a = 1; a <= idx.dim(); ++a) {
    GradedOperator K = GradedOperator::identity(V.space);
    GradedOperator Ki = K;
    K.entries[0][0] = idx.q_a(a, mu[a - 1]);
    Ki.entries[0][0] = idx.q_a(a, -mu[a - 1]);
    V.actK.push_back(K);
    V.actKinv.push_back(Ki);
  }
  for (int c = 1; c < idx.dim(); ++c) {
    const int gp = gen_parity(idx, {Gen::Raise, c});
    V.raise_op.push_back(GradedOperator::zero(V.space, V.space, gp));
    V.lower_op.push_back(GradedOperator::zero(V.space, V.space, gp));
  }
  return V;
}

namespace {

void atlas_append(CoordAtlas& atlas, const std::vector<McKey>& keys) {
  for (const McKey& k : keys)
    if (!atlas.index.count(k)) {
      atlas.index.emplace(k, atlas.keys.size());
      atlas.keys.push_back(k);
    }
}

}  // namespace

CoordAtlas block_atlas(GqContext& ctx, int k, int l) {
  // Mixed blocks may be kept whole; their canonical heads are deterministic
  // only once every class of the degree range is registered.
  if (k > 0 && l > 0) ctx.ensure_blocks(k + l);
  const std::string name = ctx.cache().word(k, l).provenance;
  CoordAtlas atlas;
  atlas_append(atlas, ctx.block_coords(name).basis);
  return atlas;
}

CoordAtlas union_atlas(GqContext& ctx, int degree) {
  ctx.ensure_blocks(degree);
  CoordAtlas atlas;
  for (int d = 0; d <= degree; ++d)
    for (int k = d; k >= 0; --k) {
      const std::string name = ctx.cache().word(k, d - k).provenance;
      atlas_append(atlas, ctx.block_coords(name).basis);
    }
  return atlas;
}

CoordAtlas side_atlas(GqContext& ctx, int degree, bool barred) {
  CoordAtlas atlas;
  for (int d = 0; d <= degree; ++d) {
    const std::string name =
        barred ? ctx.cache().word(0, d).provenance : ctx.cache().word(d, 0).provenance;
    atlas_append(atlas, ctx.block_coords(name).basis);
  }
  return atlas;
}

Vec atlas_coords(const CoordAtlas& atlas, const GqElement& f) {
  Vec out = zero_vec(atlas.dim());
  for (const auto& [key, c] : f.terms) {
    const auto it = atlas.index.find(key);
    if (it == atlas.index.end())
      throw MathError("element leaves the atlas span at t[" + key.module + ";" +
                      std::to_string(key.row) + "," + std::to_string(key.col) +
                      "]");
    out[it->second] = c;
  }
  return out;
}

namespace {

// Shared layout of the prefiltered unknowns (b, key) of V (x) span(atlas):
// the torus conditions force the column weight of the key to cancel the
// V-weight of b, so only those pairs enter the linear systems.
struct InducedLayout {
  struct Unknown {
    int b;
    McKey key;
    Weight lweight;  // minus the row weight: the left-translation weight
    int parity;
  };
  std::vector<Unknown> unknowns;
  std::map<std::pair<int, McKey>, int> pos;
};

InducedLayout induced_layout(GqContext& ctx, const RepModule& V,
                             const CoordAtlas& atlas) {
  InducedLayout lay;
  for (const McKey& key : atlas.keys) {
    const RepModule& M = ctx.module_named(key.module);
    const int kp = ctx.key_parity(key);
    const Weight lw = negate_weight(M.weights[key.row]);
    for (int b = 0; b < V.dim(); ++b) {
      if (!(M.weights[key.col] == negate_weight(V.weights[b]))) continue;
      lay.pos.emplace(std::make_pair(b, key),
                      static_cast<int>(lay.unknowns.size()));
      lay.unknowns.push_back({b, key, lw, (V.space.parity[b] + kp) & 1});
    }
  }
  return lay;
}

}  // namespace

InducedSpace induced_space(GqContext& ctx, const RepModule& V,
                           const ParabolicSpec& P, Side cond,
                           const CoordAtlas& atlas, const std::string& label) {
  if (!P.valid() || !(P.idx == V.idx) || !(P.idx == ctx.idx()))
    throw MathError(label + ": parabolic data does not match");
  const SuperIndex& idx = ctx.idx();
  const InducedLayout lay = induced_layout(ctx, V, atlas);
  const int nu = static_cast<int>(lay.unknowns.size());

  // Sector split: the conditions never mix left-translation weights (the
  // right action fixes row indices) nor parities.
  std::map<std::pair<Weight, int>, std::vector<int>> sectors;
  for (int u = 0; u < nu; ++u)
    sectors[{lay.unknowns[u].lweight, lay.unknowns[u].parity}].push_back(u);
  std::vector<std::pair<Weight, int>> order;
  for (const auto& [sk, cols] : sectors) order.push_back(sk);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<Gen> conds;
  for (const Gen& g : P.generators(cond))
    if (g.kind == Gen::Raise || g.kind == Gen::Lower) conds.push_back(g);

  std::map<std::pair<size_t, McKey>, GqElement> rimage;
  const auto right_image = [&](size_t gi, const McKey& key) -> const GqElement& {
    const auto it = rimage.find({gi, key});
    if (it != rimage.end()) return it->second;
    GqElement img = ctx.peter_weyl_reduce(
        ctx.act_R(conds[gi], ctx.mc(key.module, key.row, key.col)));
    return rimage.emplace(std::make_pair(gi, key), std::move(img)).first->second;
  };
  std::vector<GradedOperator> smat;
  for (const Gen& g : conds) smat.push_back(antipode_image(V, g, ctx.convention()));

  std::vector<Vec> solutions;  // ambient coordinates over the unknowns
  std::vector<Weight> sol_weights;
  std::vector<int> sol_parities;

  for (const auto& sk : order) {
    const std::vector<int>& cols = sectors.at(sk);
    const int nc = static_cast<int>(cols.size());
    Mat rows;
    std::map<std::pair<int, McKey>, int> rowid;
    for (size_t gi = 0; gi < conds.size(); ++gi) {
      rowid.clear();
      const auto row_of = [&](int b, const McKey& key) {
        const auto [it, fresh] = rowid.emplace(std::make_pair(b, key),
                                               static_cast<int>(rows.size()));
        if (fresh) rows.push_back(zero_vec(nc));
        return it->second;
      };
      for (int c = 0; c < nc; ++c) {
        const auto& un = lay.unknowns[cols[c]];
        for (const auto& [key2, coeff] : right_image(gi, un.key).terms)
          rows[row_of(un.b, key2)][c] += coeff;
        for (int b2 = 0; b2 < V.dim(); ++b2) {
          const RationalScalar& s = smat[gi].entries[b2][un.b];
          if (s.is_zero()) continue;
          rows[row_of(b2, un.key)][c] -= s;
        }
      }
    }

    std::vector<Vec> local;
    if (rows.empty()) {
      for (int c = 0; c < nc; ++c) {
        Vec e = zero_vec(nc);
        e[c] = RationalScalar(1);
        local.push_back(std::move(e));
      }
    } else {
      local = kernel(rows);
    }
    for (const Vec& x : local) {
      Vec full = zero_vec(nu);
      for (int c = 0; c < nc; ++c) full[cols[c]] = x[c];
      solutions.push_back(std::move(full));
      sol_weights.push_back(sk.first);
      sol_parities.push_back(sk.second);
    }
  }

  InducedSpace out;
  const int ns = static_cast<int>(solutions.size());
  for (int s = 0; s < ns; ++s) {
    std::vector<GqElement> comp(V.dim());
    for (int u = 0; u < nu; ++u) {
      if (solutions[s][u].is_zero()) continue;
      const auto& un = lay.unknowns[u];
      comp[un.b] = comp[un.b] +
                   gq_scale(ctx.mc(un.key.module, un.key.row, un.key.col),
                            solutions[s][u]);
    }
    if (!satisfies_induced_conditions(ctx, V, P, cond, comp))
      throw MathError(label + ": solver output fails the defining conditions");
    out.basis.push_back(std::move(comp));
  }

  // Left-translation module on the solution basis: the left action fixes
  // column indices, hence preserves the prefilter, and commutes with the
  // defining right conditions.
  SpanBasis span(nu);
  for (const Vec& v : solutions)
    if (!span.add(v)) throw MathError(label + ": dependent solution basis");

  std::map<std::pair<size_t, McKey>, GqElement> limage;
  const std::vector<Gen> gens = all_generators(idx);
  const auto left_image = [&](size_t gi, const McKey& key) -> const GqElement& {
    const auto it = limage.find({gi, key});
    if (it != limage.end()) return it->second;
    GqElement img = ctx.peter_weyl_reduce(
        ctx.act_L(gens[gi], ctx.mc(key.module, key.row, key.col)));
    return limage.emplace(std::make_pair(gi, key), std::move(img)).first->second;
  };

  RepModule mod;
  mod.idx = idx;
  std::vector<int> pars(sol_parities.begin(), sol_parities.end());
  mod.space = GradedSpace{pars};
  mod.weights = sol_weights;
  mod.provenance = label;
  const auto action_of = [&](size_t gi) {
    const int gp = gen_parity(idx, gens[gi]);
    Mat entries(ns, zero_vec(ns));
    for (int s = 0; s < ns; ++s) {
      Vec img = zero_vec(nu);
      for (int u = 0; u < nu; ++u) {
        if (solutions[s][u].is_zero()) continue;
        const auto& un = lay.unknowns[u];
        for (const auto& [key2, coeff] : left_image(gi, un.key).terms) {
          const auto pit = lay.pos.find({un.b, key2});
          if (pit == lay.pos.end())
            throw MathError(label + ": left image leaves the atlas");
          img[pit->second] += solutions[s][u] * coeff;
        }
      }
      const auto coords = span.coordinates(img);
      if (!coords)
        throw MathError(label + ": left translation leaves the solution space");
      for (int r = 0; r < ns; ++r) entries[r][s] = (*coords)[r];
    }
    return GradedOperator{mod.space, mod.space, gp, std::move(entries)};
  };
  for (size_t gi = 0; gi < gens.size(); ++gi) {
    const Gen& g = gens[gi];
    if (g.kind == Gen::K) mod.actK.push_back(action_of(gi));
    else if (g.kind == Gen::Kinv) mod.actKinv.push_back(action_of(gi));
    else if (g.kind == Gen::Raise) mod.raise_op.push_back(action_of(gi));
    else mod.lower_op.push_back(action_of(gi));
  }
  const auto residues = check_module(mod);
  if (!residues.empty())
    throw MathError(label + ": assembled module fails checks: " + residues[0]);
  out.module = std::move(mod);
  return out;
}

bool satisfies_induced_conditions(GqContext& ctx, const RepModule& V,
                                  const ParabolicSpec& P, Side cond,
                                  const std::vector<GqElement>& zeta) {
  if (static_cast<int>(zeta.size()) != V.dim())
    throw MathError("component count does not match the module");
  for (const Gen& g : P.generators(cond)) {
    const GradedOperator s = antipode_image(V, g, ctx.convention());
    for (int b = 0; b < V.dim(); ++b) {
      GqElement lhs = ctx.act_R(g, zeta[b]);
      GqElement rhs;
      for (int b2 = 0; b2 < V.dim(); ++b2) {
        if (s.entries[b][b2].is_zero()) continue;
        rhs = rhs + gq_scale(zeta[b2], s.entries[b][b2]);
      }
      if (!ctx.peter_weyl_reduce(lhs - rhs).is_zero()) return false;
    }
  }
  return true;
}

InducedSpace induced_block(GqContext& ctx, const RepModule& V,
                           const ParabolicSpec& P, int k, int l) {
  const CoordAtlas atlas = block_atlas(ctx, k, l);
  std::ostringstream label;
  label << "E(" << V.provenance << ")[" << k << "," << l << "]";
  return induced_space(ctx, V, P, Side::levi, atlas, label.str());
}

std::vector<AqBlock> invariants_Aq(GqContext& ctx, const ParabolicSpec& P,
                                   int kmax, int lmax) {
  const RepModule triv = build_trivial_rep(ctx.idx());
  std::vector<AqBlock> out;
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= lmax; ++l) {
      std::ostringstream label;
      label << "Aq[" << P.str() << "](" << k << "," << l << ")";
      const InducedSpace sol = induced_space(ctx, triv, P, Side::levi,
                                             block_atlas(ctx, k, l), label.str());
      AqBlock blk;
      blk.k = k;
      blk.l = l;
      for (const auto& z : sol.basis) blk.basis.push_back(z[0]);
      out.push_back(std::move(blk));
    }
  return out;
}

ClosureReport check_aq_closure(GqContext& ctx, const ParabolicSpec& P,
                               int kmax, int lmax, std::uint64_t seed,
                               int count) {
  const std::vector<AqBlock> blocks = invariants_Aq(ctx, P, kmax, lmax);
  // The invariant span of the whole computed range, over the merged atlas:
  // canonical products may spread over every class of lower bidegree.
  const CoordAtlas atlas = union_atlas(ctx, kmax + lmax);
  SpanBasis inv(atlas.dim());
  for (const AqBlock& b : blocks)
    for (const GqElement& f : b.basis) inv.add(atlas_coords(atlas, f));

  std::vector<std::pair<int, int>> pool;  // (block index, basis index)
  for (size_t i = 0; i < blocks.size(); ++i)
    for (size_t j = 0; j < blocks[i].basis.size(); ++j)
      pool.push_back({static_cast<int>(i), static_cast<int>(j)});

  ClosureReport rep;
  if (pool.empty()) return rep;
  std::mt19937_64 rng(seed);
  while (rep.checked < count) {
    const auto [i1, j1] = pool[rng() % pool.size()];
    const auto [i2, j2] = pool[rng() % pool.size()];
    if (blocks[i1].k + blocks[i2].k > kmax || blocks[i1].l + blocks[i2].l > lmax)
      continue;
    ++rep.checked;
    const GqElement prod =
        ctx.multiply(blocks[i1].basis[j1], blocks[i2].basis[j2]);
    bool ok = true;
    std::string why;
    try {
      ok = inv.contains(atlas_coords(atlas, prod));
      if (!ok) why = "product escapes the invariant span";
    } catch (const MathError& e) {
      ok = false;
      why = e.what();
    }
    if (!ok) {
      ++rep.failed;
      std::ostringstream os;
      os << "(" << blocks[i1].k << "," << blocks[i1].l << ")#" << j1 << " * ("
         << blocks[i2].k << "," << blocks[i2].l << ")#" << j2 << ": " << why;
      rep.failures.push_back(os.str());
    }
  }
  return rep;
}

namespace {

// The block of coefficients as a module under left translation, assembled
// independently of any equivariance solver.
RepModule block_left_module(GqContext& ctx, const CoordAtlas& atlas,
                            const std::string& label) {
  const SuperIndex& idx = ctx.idx();
  const int d = atlas.dim();
  RepModule mod;
  mod.idx = idx;
  std::vector<int> pars(d);
  mod.weights.resize(d);
  for (int t = 0; t < d; ++t) {
    const McKey& key = atlas.keys[t];
    pars[t] = ctx.key_parity(key);
    mod.weights[t] = negate_weight(ctx.module_named(key.module).weights[key.row]);
  }
  mod.space = GradedSpace{pars};
  mod.provenance = label;
  const auto action_of = [&](const Gen& g) {
    Mat entries(d, zero_vec(d));
    for (int t = 0; t < d; ++t) {
      const McKey& key = atlas.keys[t];
      const GqElement img = ctx.peter_weyl_reduce(
          ctx.act_L(g, ctx.mc(key.module, key.row, key.col)));
      const Vec v = atlas_coords(atlas, img);
      for (int r = 0; r < d; ++r) entries[r][t] = v[r];
    }
    return GradedOperator{mod.space, mod.space, gen_parity(idx, g), std::move(entries)};
  };
  for (const Gen& g : all_generators(idx)) {
    if (g.kind == Gen::K) mod.actK.push_back(action_of(g));
    else if (g.kind == Gen::Kinv) mod.actKinv.push_back(action_of(g));
    else if (g.kind == Gen::Raise) mod.raise_op.push_back(action_of(g));
    else mod.lower_op.push_back(action_of(g));
  }
  const auto residues = check_module(mod);
  if (!residues.empty())
    throw MathError(label + ": left block module fails checks: " + residues[0]);
  return mod;
}

}  // namespace

std::optional<BlockDimCheck> induced_dim_crosscheck(GqContext& ctx,
                                                    const RepModule& V,
                                                    const ParabolicSpec& P,
                                                    int k, int l) {
  BlockDimCheck out;
  out.solver_dim = induced_block(ctx, V, P, k, l).dim();

  const CoordAtlas atlas = block_atlas(ctx, k, l);
  std::ostringstream label;
  label << "L-block(" << k << "," << l << ")";
  const RepModule B = block_left_module(ctx, atlas, label.str());
  const Decomposition dec = decompose(B);
  if (dec.residue_dim > 0) return std::nullopt;

  std::vector<const Summand*> distinct;
  for (const Summand& s : dec.summands) {
    bool seen = false;
    for (const Summand* kept : distinct)
      if (kept->highest_weight == s.highest_weight &&
          !intertwiner_basis(kept->module, s.module).empty()) {
        seen = true;
        break;
      }
    if (!seen) distinct.push_back(&s);
  }
  out.formula_dim = 0;
  for (const Summand* s : distinct)
    out.formula_dim += s->module.dim() * hom_dim(s->module, V, P, Side::levi);
  out.equal = out.solver_dim == out.formula_dim;
  return out;
}

FrobeniusReport frobenius_pair(GqContext& ctx, const RepModule& W,
                               const RepModule& V, const ParabolicSpec& P,
                               int degree) {
  if (!tensor_rooted(W.provenance))
    throw MathError("reciprocity requires a module realized inside a tensor "
                    "word, got provenance '" + W.provenance + "'");
  FrobeniusReport rep;
  rep.degree = degree;
  rep.rhs = hom_dim(W, V, P, Side::levi);
  std::ostringstream label;
  label << "E(" << V.provenance << ")|deg<=" << degree;
  const InducedSpace ind = induced_space(ctx, V, P, Side::levi,
                                         union_atlas(ctx, degree), label.str());
  rep.lhs = ind.dim() == 0
                ? 0
                : static_cast<int>(intertwiner_basis(W, ind.module).size());
  rep.equal = rep.lhs == rep.rhs;
  return rep;
}

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::match: return "MATCH";
    case Verdict::zero_match: return "ZERO_MATCH";
    case Verdict::mismatch: return "MISMATCH";
    default: return "INCONCLUSIVE_AT_D";
  }
}

bool in_lambda_contravariant(const SuperIndex& idx, const Weight& mu) {
  long s = 0;
  for (long x : mu) s += x;
  if (s < 0) return false;
  const auto list =
      enumerate_lambda(idx, static_cast<int>(s), TensorSide::contravariant);
  return std::find(list.begin(), list.end(), mu) != list.end();
}

bool in_lambda_covariant(const SuperIndex& idx, const Weight& mu) {
  long s = 0;
  for (long x : mu) s += x;
  if (s > 0) return false;
  const auto list =
      enumerate_lambda(idx, static_cast<int>(-s), TensorSide::covariant);
  return std::find(list.begin(), list.end(), mu) != list.end();
}

namespace {

// Realization of the irreducible with the given highest weight, registering
// the pure tensor blocks of the right side first.
const RepModule& class_of(GqContext& ctx, const Weight& hw) {
  long s = 0;
  for (long x : hw) s += x;
  if (s >= 0)
    for (int j = 0; j <= s; ++j) ctx.cache().decomposition(j, 0);
  else
    for (int j = 0; j <= -s; ++j) ctx.cache().decomposition(0, j);
  const RepModule* cls = ctx.cache().find_class(hw);
  if (!cls)
    throw MathError("no registered irreducible with highest weight " +
                    weight_str(hw));
  return *cls;
}

}  // namespace

BorelWeilRow o_space_row(GqContext& ctx, const Weight& mu,
                         const ParabolicSpec& P, Side sign, bool barred,
                         int degree) {
  if (!P.theta.empty())
    throw MathError("equivariant subspace rows are built over the empty Levi "
                    "selection only");
  if (sign == Side::levi) throw MathError("a parabolic sign is required");
  BorelWeilRow row;
  row.barred = barred;
  row.sign = sign;

  // Prediction: the full-flag weight line has lowest weight mu itself.
  const Weight& tilde = mu;
  std::optional<Weight> pred;
  if (sign == Side::minus) {
    const bool in = barred ? in_lambda_contravariant(ctx.idx(), mu)
                           : in_lambda_covariant(ctx.idx(), mu);
    if (in) pred = mu;
  } else {
    const Weight neg = negate_weight(tilde);
    const bool in = barred ? in_lambda_covariant(ctx.idx(), neg)
                           : in_lambda_contravariant(ctx.idx(), neg);
    if (in) pred = negate_weight(lowest_weight(class_of(ctx, neg)));
  }
  row.predicted = pred;
  if (pred) row.predicted_dim = class_of(ctx, *pred).dim();

  const RepModule V = weight_line_module(ctx.idx(), mu);
  std::vector<std::pair<int, InducedSpace>> found;
  for (int d = 0; d <= degree; ++d) {
    std::ostringstream label;
    label << (barred ? "O" : "Obar") << weight_str(mu) << "|"
          << (sign == Side::plus ? "p+" : "p-") << "|block " << d;
    InducedSpace sol =
        induced_space(ctx, V, P, sign,
                      block_atlas(ctx, barred ? 0 : d, barred ? d : 0),
                      label.str());
    if (sol.dim() > 0) found.emplace_back(d, std::move(sol));
  }
  for (const auto& [d, sol] : found) row.found_dim += sol.dim();
  if (!found.empty()) row.found_block = found[0].first;

  if (!pred) {
    row.verdict = found.empty() ? Verdict::zero_match : Verdict::mismatch;
    return row;
  }
  if (found.empty()) {
    row.verdict = Verdict::inconclusive;
    return row;
  }
  if (found.size() > 1) {
    row.verdict = Verdict::mismatch;
    return row;
  }
  const Decomposition dec = decompose(found[0].second.module);
  row.irreducible = dec.summands.size() == 1 && dec.residue_dim == 0;
  if (row.irreducible) row.found_hw = dec.summands[0].highest_weight;
  row.verdict = (row.irreducible && row.found_hw == pred &&
                 row.found_dim == row.predicted_dim)
                    ? Verdict::match
                    : Verdict::mismatch;
  return row;
}

BorelWeilReport borel_weil_report(GqContext& ctx, const Weight& mu,
                                  const ParabolicSpec& P, int degree) {
  BorelWeilReport rep;
  rep.mu = mu;
  rep.degree = degree;
  for (const bool barred : {true, false})
    for (const Side sign : {Side::plus, Side::minus})
      rep.rows.push_back(o_space_row(ctx, mu, P, sign, barred, degree));
  return rep;
}

namespace {

constexpr std::uint64_t kModulus = 1000000007ULL;

std::uint64_t modmul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((__uint128_t)a * b % kModulus);
}

using ModMat = std::vector<std::vector<std::uint64_t>>;

std::optional<ModMat> eval_op(const Mat& m, std::uint64_t q0) {
  ModMat out(m.size(), std::vector<std::uint64_t>(m.empty() ? 0 : m[0].size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) {
      const auto v = m[i][j].eval_mod(q0, kModulus);
      if (!v) return std::nullopt;
      out[i][j] = *v;
    }
  return out;
}

ModMat modprod(const ModMat& a, const ModMat& b) {
  const size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  ModMat out(n, std::vector<std::uint64_t>(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (!a[i][t]) continue;
      for (size_t j = 0; j < m; ++j)
        out[i][j] = (out[i][j] + modmul(a[i][t], b[t][j])) % kModulus;
    }
  return out;
}

int rank_modp(std::vector<std::vector<std::uint64_t>> rows) {
  int rank = 0;
  const size_t nc = rows.empty() ? 0 : rows[0].size();
  size_t row = 0;
  for (size_t col = 0; col < nc && row < rows.size(); ++col) {
    size_t piv = row;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[row]);
    const std::uint64_t inv = inv_mod(rows[row][col], kModulus);
    for (size_t i = row + 1; i < rows.size(); ++i) {
      if (!rows[i][col]) continue;
      const std::uint64_t f = modmul(rows[i][col], inv);
      for (size_t j = col; j < nc; ++j) {
        const std::uint64_t sub = modmul(f, rows[row][j]);
        rows[i][j] = (rows[i][j] + kModulus - sub) % kModulus;
      }
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace

SeparationReport separation_surrogate(GqContext& ctx, int degree, int maxlen) {
  SeparationReport rep;
  rep.degree = degree;
  rep.maxlen = maxlen;
  const CoordAtlas atlas = union_atlas(ctx, degree);
  rep.n_keys = atlas.dim();
  const std::vector<Word> words = words_up_to(ctx.idx(), maxlen);

  std::set<std::string> modules;
  for (const McKey& key : atlas.keys) modules.insert(key.module);

  for (const std::uint64_t q0 : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    // Word images per module at q = q0: breadth-first products reuse the
    // prefix image (words are enumerated prefix-first).
    std::map<std::string, std::vector<ModMat>> images;
    bool pole = false;
    for (const std::string& name : modules) {
      const RepModule& M = ctx.module_named(name);
      std::map<std::string, ModMat> gen_imgs;
      for (const Gen& g : all_generators(ctx.idx())) {
        const auto img = eval_op(M.act(g).entries, q0);
        if (!img) {
          pole = true;
          break;
        }
        gen_imgs[gen_str(g)] = *img;
      }
      if (pole) break;
      std::vector<ModMat>& out = images[name];
      out.reserve(words.size());
      std::map<std::string, int> by_name;
      ModMat id(M.dim(), std::vector<std::uint64_t>(M.dim(), 0));
      for (int i = 0; i < M.dim(); ++i) id[i][i] = 1;
      for (size_t wi = 0; wi < words.size(); ++wi) {
        const Word& w = words[wi];
        if (w.empty()) {
          out.push_back(id);
        } else {
          Word prefix(w.begin(), w.end() - 1);
          out.push_back(modprod(out[by_name.at(word_str(prefix))],
                                gen_imgs.at(gen_str(w.back()))));
        }
        by_name[word_str(w)] = static_cast<int>(wi);
      }
    }
    if (pole) continue;

    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(atlas.keys.size());
    for (const McKey& key : atlas.keys) {
      std::vector<std::uint64_t> row(words.size());
      const std::vector<ModMat>& imgs = images.at(key.module);
      for (size_t wi = 0; wi < words.size(); ++wi)
        row[wi] = imgs[wi][key.row][key.col];
      rows.push_back(std::move(row));
    }
    rep.rank = rank_modp(std::move(rows));
    // A full modular rank bounds the exact rank from below, which certifies
    // full exact rank; a deficient modular rank is only reported, not
    // certified.
    rep.full_rank = rep.rank == rep.n_keys;
    return rep;
  }
  throw MathError("no evaluation point avoids the denominator poles");
}

}  // namespace glq
