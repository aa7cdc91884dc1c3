#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glq/graded.hpp"

namespace glq {

struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

// Index data for gl(m|n): I = {1..m+n}, I' = I \ {m+n}, parity 0 on 1..m
// and 1 on m+1..m+n, q_a = q^{+1} for even a and q^{-1} for odd a.
struct SuperIndex {
  int m = 1, n = 1;

  int dim() const { return m + n; }
  int parity(int a) const { return a > m ? 1 : 0; }      // a in 1..m+n
  int sign_exp(int a) const { return parity(a) ? -1 : 1; }  // (-1)^{[a]}
  RationalScalar q_a(int a, long e = 1) const {
    return RationalScalar::q_power(e * sign_exp(a));
  }
  GradedSpace vector_space() const;
  bool operator==(const SuperIndex&) const = default;
};

// Algebra generator tags: K_a, K_a^{-1} (a in I), E_{c,c+1}, E_{c+1,c} (c in I').
struct Gen {
  enum Kind { K, Kinv, Raise, Lower } kind;
  int idx;
  bool operator==(const Gen&) const = default;
};
using Word = std::vector<Gen>;

int gen_parity(const SuperIndex& idx, const Gen& g);
int word_parity(const SuperIndex& idx, const Word& w);
bool counit_is_one(const Word& w);  // epsilon(word): 1 if no E letters, else 0
std::vector<Gen> all_generators(const SuperIndex& idx);
std::string gen_str(const Gen& g);
std::string word_str(const Word& w);

// The coproduct keeps the Jimbo shape
//   D(K_a) = K_a (x) K_a,
//   D(E_c) = E_c (x) X_c + 1 (x) E_c,       X_c = (K_c K_{c+1}^{-1})^{e_power},
//   D(F_c) = F_c (x) 1   + Y_c (x) F_c,     Y_c = (K_c K_{c+1}^{-1})^{f_power},
// and the dual representation is built from the induced antipode through the
// supertranspose, either with the parity twist (-1)^{[x]} or without it.
struct CoproductConvention {
  int e_power;
  int f_power;
  bool graded_dual;
  std::string name;
  bool operator==(const CoproductConvention&) const = default;
};

// The declared calibration family, fixed order, versioned here once.
const std::vector<CoproductConvention>& coproduct_family();

// Global write-once record of the calibrated convention.
class Calibration {
 public:
  static bool is_set();
  static const CoproductConvention& get();   // StateError when unset
  static void set(const CoproductConvention& c);  // StateError on conflict
  static void reset();  // test/CLI setup only
};

// Weight = vector of K-exponents, ordered lexicographically.
using Weight = std::vector<long>;
std::string weight_str(const Weight& w);

// A concrete representation: action matrices for every generator, a weight
// per basis vector, and a provenance word describing the construction.
struct RepModule {
  SuperIndex idx;
  GradedSpace space;
  std::vector<GradedOperator> actK, actKinv;    // index a-1
  std::vector<GradedOperator> raise_op, lower_op;  // index c-1
  std::vector<Weight> weights;
  std::string provenance;

  int dim() const { return space.dim(); }
  const GradedOperator& act(const Gen& g) const;
  GradedOperator act_word(const Word& w) const;
};

// Residual messages from the structural checks; empty means all pass.
std::vector<std::string> check_module(const RepModule& M);

RepModule build_trivial_rep(const SuperIndex& idx);
RepModule build_vector_rep(const SuperIndex& idx);

// pi_bar(x) = [(-1)^{[x]}] st(pi(S(x))) on the graded dual basis.
RepModule build_dual_rep(const RepModule& pi);  // uses the calibrated convention
RepModule build_dual_rep_with(const RepModule& pi, const CoproductConvention& c);

RepModule tensor_module(const RepModule& A, const RepModule& B);
RepModule tensor_module_with(const RepModule& A, const RepModule& B,
                             const CoproductConvention& c);

// E^{(x)k} (x) Ebar^{(x)l}, left associated.
RepModule word_module(const SuperIndex& idx, int k, int l);

// Representation images of the antipode and its inverse on generators.
GradedOperator antipode_image(const RepModule& M, const Gen& g,
                              const CoproductConvention& c);
GradedOperator antipode_inv_image(const RepModule& M, const Gen& g,
                                  const CoproductConvention& c);

// Joint kernel of all raising operators, organized per weight, weights in
// decreasing lexicographic order; vectors are weight-homogeneous.
std::vector<std::pair<Weight, Vec>> highest_weight_vectors(const RepModule& M);

struct Summand {
  Weight highest_weight;
  RepModule module;         // in its own basis
  Mat basis;                // rows: basis vectors in the ambient coordinates
};

struct Decomposition {
  std::vector<Summand> summands;
  int residue_dim = 0;      // ambient dim minus the sum of summand dims
};

// Closure of each singular vector under raising+lowering; a closure is kept
// when it is irreducible (single singular line) and independent of the ones
// already kept.  residue_dim = 0 certifies complete reducibility.
Decomposition decompose(const RepModule& M);

Weight lowest_weight(const RepModule& W);  // W irreducible

// Highest weights of all irreducibles found in X^{(x)j}, j <= k, where X is
// E (contravariant) or Ebar (covariant); always contains the zero weight.
enum class TensorSide { contravariant, covariant };
std::vector<Weight> enumerate_lambda(const SuperIndex& idx, int k, TensorSide side);

// dagger(lambda) = -(lowest weight of W(lambda)), lambda within the
// enumerated contravariant range for the given degree.
Weight dagger(const Weight& lambda, const SuperIndex& idx, int degree);

// Decomposition cache plus the registry of first-extracted irreducible
// realizations keyed by highest weight.
class ModuleCache {
 public:
  explicit ModuleCache(const SuperIndex& idx) : idx_(idx) {}

  const SuperIndex& idx() const { return idx_; }
  const RepModule& word(int k, int l);
  const Decomposition& decomposition(int k, int l);
  // First-seen realization of the irreducible class with this highest weight.
  const RepModule* find_class(const Weight& hw) const;
  const RepModule& register_class(const Weight& hw, const RepModule& M);
  std::vector<Weight> registered_weights() const;

 private:
  SuperIndex idx_;
  std::map<std::pair<int, int>, RepModule> words_;
  std::map<std::pair<int, int>, Decomposition> decs_;
  std::map<Weight, RepModule> classes_;
};

std::string decomposition_report_json(const SuperIndex& idx,
                                      const std::string& word,
                                      const Decomposition& dec);

}  // namespace glq
