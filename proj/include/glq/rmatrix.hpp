#pragma once

#include "glq/uqrep.hpp"

namespace glq {

// Literal braiding on Ebar (x) E in the flattened pair basis:
// diagonal q^{-(-1)^{[a]}} on pairs (a,a) and 1 on mixed pairs, plus the
// corner terms -(q-q^{-1})(-1)^{[a]+[b]+[a][b]} e_{ba} (x) e_{ba} for a < b.
GradedOperator build_R_pibar_pi(const SuperIndex& idx);

// Tensor module whose action comes from the graded-opposite coproduct:
// D'(K) = K (x) K, D'(E_c) = X_c (x) E_c + E_c (x) 1,
// D'(F_c) = 1 (x) F_c + F_c (x) Y_c.
RepModule opposite_tensor_module_with(const RepModule& A, const RepModule& B,
                                      const CoproductConvention& c);
RepModule opposite_tensor_module(const RepModule& A, const RepModule& B);

// Generators g with R A(g) != B(g) R, as messages; empty means R intertwines.
std::vector<std::string> check_intertwiner(const GradedOperator& R,
                                           const RepModule& A,
                                           const RepModule& B);

struct CalibrationTrial {
  CoproductConvention convention;
  bool pass = false;
  std::vector<std::string> failures;
};

// One trial per declared family member: does the literal mixed braiding
// intertwine the straight and opposite coproduct actions on Ebar (x) E?
std::vector<CalibrationTrial> calibration_table(const SuperIndex& idx);

// Runs the table, requires exactly one passing member, records it in the
// global calibration and returns it; throws when the winner is not unique.
CoproductConvention calibrate_coproduct(const SuperIndex& idx = SuperIndex{1, 1});

// Basis of the matrices M with M A(g) = B(g) M for every generator.  Both
// modules must live on spaces of equal dimension with diagonal K action;
// the unknowns are restricted to weight-matching entries, which encodes the
// K conditions exactly.
std::vector<GradedOperator> solve_intertwiner(const RepModule& A,
                                              const RepModule& B);

// Braiding on E (x) E derived from the intertwiner space between the straight
// and opposite coproduct actions: the lower-triangular member (the same shape
// as the literal mixed braiding), normalized so the first mixed diagonal
// entry is 1.
struct Braiding {
  GradedOperator R;            // lower triangular in the pair-lex basis
  GradedOperator R_check;      // graded flip composed after R
  RationalScalar alpha, beta;  // (R_check - alpha)(R_check - beta) = 0
};
Braiding derive_braiding(const SuperIndex& idx);

// R12 R13 R23 = R23 R13 R12 on V (x) V (x) V with R13 conjugated by the
// middle flip.
bool check_yang_baxter(const GradedOperator& R, const GradedSpace& V);

}  // namespace glq
