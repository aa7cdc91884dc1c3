#pragma once
// Quantum homogeneous-space layer on top of the coordinate ring: parabolic
// generator data, right-invariant functions, induced modules of equivariant
// V-valued functions per bidegree block, their parabolic-equivariant
// subspaces, and the reciprocity / highest-weight comparison reports.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "glq/coords.hpp"

namespace glq {

// Generator-set selector: the Levi algebra picked by theta, or one of its
// two parabolic extensions (plus adds the remaining raising letters, minus
// the remaining lowering letters).
enum class Side { levi, plus, minus };

struct ParabolicSpec {
  SuperIndex idx;
  std::set<int> theta;  // subset of {1 .. m+n-1}

  bool valid() const;
  std::vector<Gen> generators(Side side) const;
  std::string str() const;
};

// Same space and weights; raising/lowering operators outside the selected
// generator set are replaced by zero.  K operators are always kept.
RepModule restrict_module(const RepModule& M, const ParabolicSpec& P,
                          Side side);

// Dimension of the grading-preserving maps W -> M commuting with the
// selected generator set.
int hom_dim(const RepModule& W, const RepModule& M, const ParabolicSpec& P,
            Side side);

// One-dimensional module of the given weight; its parity is the mod-2 sum
// of the weight entries on the odd rows.
RepModule weight_line_module(const SuperIndex& idx, const Weight& mu);

// A fixed ordering of canonical basis keys, merged over one or more
// bidegree blocks.  Keys shared between blocks (class coefficients whose
// irrep occurs in several blocks) appear once.
struct CoordAtlas {
  std::vector<McKey> keys;
  std::map<McKey, int> index;

  int dim() const { return static_cast<int>(keys.size()); }
};
CoordAtlas block_atlas(GqContext& ctx, int k, int l);
CoordAtlas union_atlas(GqContext& ctx, int degree);  // all k+l <= degree
// Pure-column atlases: blocks (k,0) for k <= degree, or (0,l) when barred.
CoordAtlas side_atlas(GqContext& ctx, int degree, bool barred);

// Coordinates of a canonical-form element over the atlas keys.
// MathError when a term lies outside the atlas.
Vec atlas_coords(const CoordAtlas& atlas, const GqElement& f);

// Solution space of R_y(zeta) = (S(y) (x) id) zeta for every y in the
// selected generator set, inside V (x) span(atlas keys), zeta written as
// sum_b v_b (x) basis[s][b].  The left translations commute with the
// defining conditions and are returned as a module on the solution basis;
// assembly fails with MathError if a left image ever leaves the space.
struct InducedSpace {
  std::vector<std::vector<GqElement>> basis;  // [solution][V index]
  RepModule module;

  int dim() const { return static_cast<int>(basis.size()); }
};
InducedSpace induced_space(GqContext& ctx, const RepModule& V,
                           const ParabolicSpec& P, Side cond,
                           const CoordAtlas& atlas, const std::string& label);
InducedSpace induced_block(GqContext& ctx, const RepModule& V,
                           const ParabolicSpec& P, int k, int l);

// Exact re-check that an explicit element satisfies every defining
// condition of the induced space.
bool satisfies_induced_conditions(GqContext& ctx, const RepModule& V,
                                  const ParabolicSpec& P, Side cond,
                                  const std::vector<GqElement>& zeta);

// Right-invariant functions R_y(f) = eps(y) f per bidegree block.
struct AqBlock {
  int k = 0, l = 0;
  std::vector<GqElement> basis;
};
std::vector<AqBlock> invariants_Aq(GqContext& ctx, const ParabolicSpec& P,
                                   int kmax, int lmax);

// Seeded sample of products of invariant basis elements; each product must
// land in the invariant span of its target block.
struct ClosureReport {
  int checked = 0;
  int failed = 0;
  std::vector<std::string> failures;
};
ClosureReport check_aq_closure(GqContext& ctx, const ParabolicSpec& P,
                               int kmax, int lmax, std::uint64_t seed,
                               int count);

// Two independent computations of dim induced_block: the solver dimension
// against sum over the distinct left-translation irreps X of the block of
// dim X * hom_dim(X|_levi, V).  nullopt when the block does not decompose.
struct BlockDimCheck {
  int solver_dim = 0;
  int formula_dim = 0;
  bool equal = false;
};
std::optional<BlockDimCheck> induced_dim_crosscheck(GqContext& ctx,
                                                    const RepModule& V,
                                                    const ParabolicSpec& P,
                                                    int k, int l);

// Reciprocity instance: multiplicity of W in the induced space of V over
// all blocks k+l <= degree versus the Levi-equivariant maps W -> V.
struct FrobeniusReport {
  int lhs = 0;  // equivariant maps W -> induced space, all generators
  int rhs = 0;  // equivariant maps W -> V, Levi generators
  int degree = 0;
  bool equal = false;
};
FrobeniusReport frobenius_pair(GqContext& ctx, const RepModule& W,
                               const RepModule& V, const ParabolicSpec& P,
                               int degree);

enum class Verdict { match, zero_match, mismatch, inconclusive };
std::string verdict_str(Verdict v);

// One comparison row: the equivariant subspace of the induced space of the
// weight line mu, cut by the full parabolic conditions of the given sign,
// inside the pure t-blocks (barred = false) or tbar-blocks (barred = true),
// against the predicted irreducible.
struct BorelWeilRow {
  bool barred = false;
  Side sign = Side::minus;
  std::optional<Weight> predicted;  // nullopt: predicted zero
  int predicted_dim = 0;
  int found_dim = 0;
  std::optional<Weight> found_hw;
  int found_block = -1;  // k or l of the unique nonzero block
  bool irreducible = false;
  Verdict verdict = Verdict::inconclusive;
};
struct BorelWeilReport {
  Weight mu;
  int degree = 0;
  std::vector<BorelWeilRow> rows;
};

// Single row (one side, one sign) and the full four-row table.  Only the
// empty Levi selection is supported: the input module is the weight line.
BorelWeilRow o_space_row(GqContext& ctx, const Weight& mu,
                         const ParabolicSpec& P, Side sign, bool barred,
                         int degree);
BorelWeilReport borel_weil_report(GqContext& ctx, const Weight& mu,
                                  const ParabolicSpec& P, int degree);

// Exact membership tests against the enumerated highest-weight sets of the
// tensor powers (degree is determined by the weight sum, so the decision
// needs no truncation bound).
bool in_lambda_contravariant(const SuperIndex& idx, const Weight& mu);
bool in_lambda_covariant(const SuperIndex& idx, const Weight& mu);

// Truncated separation surrogate: evaluation rank of the canonical basis of
// all blocks k+l <= degree against the words of length <= maxlen.
struct SeparationReport {
  int degree = 0;
  int maxlen = 0;
  int n_keys = 0;
  int rank = 0;
  bool full_rank = false;
};
SeparationReport separation_surrogate(GqContext& ctx, int degree, int maxlen);

}  // namespace glq
