#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "glq/rmatrix.hpp"

namespace glq {

// Raised when an exactness contract fails (missing class realization,
// non-scalar intertwiner between isomorphic realizations, span escape).
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One matrix coefficient functional: entry (row, col) of the module
// registered under `module`.  Keys order lexicographically so element
// renderings and JSON dumps are deterministic.
struct McKey {
  std::string module;
  int row = 0;
  int col = 0;

  bool operator==(const McKey& o) const {
    return module == o.module && row == o.row && col == o.col;
  }
  bool operator<(const McKey& o) const {
    if (module != o.module) return module < o.module;
    if (row != o.row) return row < o.row;
    return col < o.col;
  }
};

// Finite linear combination of matrix coefficients.  Zero coefficients are
// never stored, so map equality is equality of normal forms.
struct GqElement {
  std::map<McKey, RationalScalar> terms;

  bool is_zero() const { return terms.empty(); }
  void add_term(const McKey& k, const RationalScalar& c);
};

GqElement operator+(const GqElement& a, const GqElement& b);
GqElement operator-(const GqElement& a, const GqElement& b);
GqElement gq_scale(const GqElement& a, const RationalScalar& c);
bool operator==(const GqElement& a, const GqElement& b);
std::string element_str(const GqElement& f);

// One term of a symbolic coproduct: coeff * (left tensor right).
struct CoprodTerm {
  RationalScalar coeff;
  Word left;
  Word right;
};

// Coproduct of a word under the given convention, expanded in the super
// tensor algebra ((a@b)(c@d) = (-1)^{|b||c|} ac@bd) with like terms merged.
std::vector<CoprodTerm> coproduct_word(const SuperIndex& idx, const Word& w,
                                       const CoproductConvention& conv);

// Inverse antipode of a single generator as a scalar multiple of one word.
std::pair<RationalScalar, Word> antipode_inv_word(
    const Gen& g, const CoproductConvention& conv);

// Rewrite of one module's matrix coefficients onto registered class modules:
// t^M_{IJ} = sum_c sum_{uv} A^c[I][u] * B^c[v][J] * t^{c}_{uv}.
struct ClassPiece {
  std::string cls;
  Mat A;  // dim(M) x dim(cls)
  Mat B;  // dim(cls) x dim(M)
};
struct ReduceInfo {
  bool reducible = false;  // false: module is kept whole and flagged
  std::vector<ClassPiece> pieces;
};

// Exact structure of span{ t^M_{IJ} } as functionals: `independent` lists a
// basis of entry functionals, `expand` gives every formal entry (row
// I*dim+J) over that basis.  Entries with different weight shift
// wt_row - wt_col never interact, so the analysis splits by shift.
struct ModuleFunctionals {
  std::vector<std::pair<int, int>> independent;
  Mat expand;
};

// Faithful linear coordinates for the span of one module's matrix
// coefficients: keys of registered class entries that factor through the
// module, then leftover formal entries completing the span.  `entry_coords`
// expresses every formal entry (row I*dim+J) over `basis`.
struct BlockCoords {
  std::string module;
  std::vector<McKey> basis;
  Mat entry_coords;
  bool fully_reduced = true;
};

// Full-rank certificate for the matrix coefficients of the classes appearing
// in blocks (k,l) <= (kmax,lmax), evaluated against all generator words up
// to `maxlen`.  `full_rank` is exact: a full modular rank at (q0, p) already
// bounds the exact rank from below, and an exact elimination confirms it.
struct IndependenceReport {
  int kmax = 0;
  int lmax = 0;
  int maxlen = 0;
  std::vector<std::string> classes;
  int n_functionals = 0;
  long n_words = 0;
  int rank = 0;
  std::uint64_t q0 = 0;
  std::uint64_t p = 0;
  bool full_rank = false;
  std::string dependency;  // one dependent combination when rank is short
};

// Basis of grading- and weight-preserving maps W -> M commuting with every
// stored generator operator.  Unknowns are prefiltered by weight and parity,
// which keeps the kernels small; valid because the torus is always acting.
std::vector<Mat> intertwiner_basis(const RepModule& W, const RepModule& M);

// Seeded exactness sample for the translation actions: graded commutation of
// the two translations, translation semantics against the pairing, and word
// composition.  Failures carry a rendering of the offending instance.
struct AxiomReport {
  int checked = 0;
  int failed = 0;
  std::vector<std::string> failures;
};

class GqContext;

AxiomReport check_action_axioms(GqContext& ctx, std::uint64_t seed, int count);

// Coordinate ring of the quantum supergroup, truncated to the modules it has
// seen.  Owns the module registry: classes are named "W(a,b,...)", tensor
// modules by their provenance word.  All results are exact.
class GqContext {
 public:
  explicit GqContext(const SuperIndex& idx);

  const SuperIndex& idx() const { return idx_; }
  ModuleCache& cache() { return cache_; }
  const CoproductConvention& convention() const { return conv_; }

  // Registers decomposition classes of every block k+l <= degree.
  void ensure_blocks(int degree);
  // Name lookups.  Unknown names raise MathError.
  const RepModule& module_named(const std::string& name);
  std::string class_name(const Weight& hw) const;
  // Tensor product of two named modules, registered as "a*b".
  const RepModule& tensor_named(const std::string& a, const std::string& b);

  GqElement mc(const std::string& module, int row, int col);
  GqElement unit();
  int key_parity(const McKey& k);
  // Parity of a homogeneous element; empty for zero or mixed elements.
  std::optional<int> element_parity(const GqElement& f);

  // Evaluation <f, w> via the representing matrices.
  RationalScalar pair_word(const GqElement& f, const Word& w);

  // Product with the pairing-compatible sign
  //   t^M_{ij} t^N_{kl} = (-1)^{([k]+[l])[i]} t^{M@N}_{(ik)(jl)},
  // canonicalized by peter_weyl_reduce.  Class coefficients are first
  // expanded over the tensor word they were extracted from, so products
  // always canonicalize inside one standard block and the normal form does
  // not depend on the association order of the factors.
  GqElement multiply(const GqElement& f, const GqElement& g);

  // Canonical form.  Coefficients of tensor words (in any factor order) are
  // rewritten onto the faithful block basis of the standard word module:
  // registered class coefficients plus, when the block has nonzero residue,
  // the formal entries completing the span (the block is then flagged).
  // Other reducible modules are rewritten onto class realizations; other
  // flagged modules are kept whole.  Linear and idempotent.
  GqElement peter_weyl_reduce(const GqElement& f);
  const std::set<std::string>& flagged() const { return flagged_; }
  const ReduceInfo& reduce_info(const std::string& module);
  const ModuleFunctionals& module_functionals(const std::string& module);
  // Callers must register the class range first (ensure_blocks): the basis
  // splits off every registered class that factors through the module.
  const BlockCoords& block_coords(const std::string& module);

  // Right and left translations.  Single generators follow the displayed
  // coefficient formulas; words act by composition of generator actions.
  GqElement act_R(const Gen& g, const GqElement& f);
  GqElement act_R_word(const Word& w, const GqElement& f);
  GqElement act_L(const Gen& g, const GqElement& f);
  GqElement act_L_word(const Word& w, const GqElement& f);

  IndependenceReport check_independence(int kmax, int lmax, int maxlen);

  // Deterministic JSON rendering of an element.
  std::string dump_json(const GqElement& f);

 private:
  // Expansion of a registered class coefficient over the module it was
  // extracted from: t^W_{uv} = sum_{IJ} expB[u][I] expA[J][v] t^{origin}_{IJ}.
  struct ClassOrigin {
    std::string origin;
    Mat expB;
    Mat expA;
  };

  const RepModule& ensure_word(int k, int l);
  void sync_class_names();
  const Decomposition& decomposition_absorbed(int k, int l);
  void record_origin(const Summand& s, const std::string& origin_name);
  bool expandable(const std::string& name) const;
  bool expand_key(const McKey& k, const RationalScalar& c, GqElement& out);
  std::optional<GqElement> expand_to_words(const GqElement& f);
  // sigma, sigma inverse for the reordering of one tensor word name onto the
  // standard word module; identity when the name is already standard.
  const std::pair<Mat, Mat>& sort_chain(const std::string& name);
  GqElement canonicalize_word_key(const McKey& k, const RationalScalar& c);

  SuperIndex idx_;
  CoproductConvention conv_;
  ModuleCache cache_;
  std::map<std::string, const RepModule*> named_;
  std::vector<std::unique_ptr<RepModule>> owned_;
  std::map<std::string, ReduceInfo> reduce_;
  std::map<std::string, ModuleFunctionals> functionals_;
  std::map<std::string, BlockCoords> blocks_;
  std::map<std::string, ClassOrigin> origins_;
  std::map<std::string, std::pair<Mat, Mat>> chains_;
  std::set<std::string> flagged_;
};

// Module isomorphism Ebar@E -> E@Ebar: the mixed intertwiner composed with
// the graded flip, certified exactly against both module structures.
GradedOperator mixed_swap(const SuperIndex& idx);

// Rewrites the formal entry t^{Ebar^l @ E^k}_{IJ} over the entries of the
// standard word module E^k @ Ebar^l through a chain of adjacent swaps.
GqElement rewrite_mixed(GqContext& ctx, int k, int l, int I, int J);

// Rank comparison between products taken in reversed factor order and the
// standard order for one bidegree block.  `iso_certified` is the exact
// statement (an invertible intertwiner maps one span onto the other); the
// ranks are a modular evaluation witness against all words up to maxlen.
struct MixedBlockReport {
  int k = 0;
  int l = 0;
  bool iso_certified = false;
  int rank_reversed = 0;
  int rank_standard = 0;
  int rank_union = 0;
  std::uint64_t q0 = 0;
  std::uint64_t p = 0;
  bool equal = false;
};
MixedBlockReport mixed_block_factorization(GqContext& ctx, int k, int l,
                                           int maxlen);

}  // namespace glq
