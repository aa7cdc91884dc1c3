#include "glq/rmatrix.hpp"

#include <stdexcept>

namespace glq {

GradedOperator build_R_pibar_pi(const SuperIndex& idx) {
  const int d = idx.dim();
  const GradedSpace V = idx.vector_space();
  const GradedSpace VV = GradedSpace::tensor(V, V);
  GradedOperator R = GradedOperator::zero(VV, VV, 0);
  for (int a = 1; a <= d; ++a)
    for (int b = 1; b <= d; ++b) {
      const int i = (a - 1) * d + (b - 1);
      R.entries[i][i] =
          a == b ? RationalScalar::q_power(-idx.sign_exp(a)) : RationalScalar(1);
    }
  const RationalScalar hook =
      RationalScalar::q() - RationalScalar::q_power(-1);
  for (int a = 1; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b) {
      const int pa = idx.parity(a), pb = idx.parity(b);
      RationalScalar coeff = -hook;
      if ((pa + pb + pa * pb) & 1) coeff = -coeff;
      const GradedOperator unit = GradedOperator::unit(V, b - 1, a - 1);
      R = R + graded_kron(unit, unit).scaled(coeff);
    }
  return R;
}

RepModule opposite_tensor_module_with(const RepModule& A, const RepModule& B,
                                      const CoproductConvention& conv) {
  RepModule M = tensor_module_with(A, B, conv);
  const GradedOperator idA = GradedOperator::identity(A.space);
  const GradedOperator idB = GradedOperator::identity(B.space);
  auto kweight = [](const RepModule& P, int c, int power) {
    if (power > 0) return P.actK[c - 1] * P.actKinv[c];
    return P.actKinv[c - 1] * P.actK[c];
  };
  for (int c = 1; c < A.idx.dim(); ++c) {
    M.raise_op[c - 1] =
        graded_kron(kweight(A, c, conv.e_power), B.raise_op[c - 1]) +
        graded_kron(A.raise_op[c - 1], idB);
    M.lower_op[c - 1] =
        graded_kron(idA, B.lower_op[c - 1]) +
        graded_kron(A.lower_op[c - 1], kweight(B, c, conv.f_power));
  }
  M.provenance = "op(" + A.provenance + "*" + B.provenance + ")";
  return M;
}

RepModule opposite_tensor_module(const RepModule& A, const RepModule& B) {
  return opposite_tensor_module_with(A, B, Calibration::get());
}

std::vector<std::string> check_intertwiner(const GradedOperator& R,
                                           const RepModule& A,
                                           const RepModule& B) {
  std::vector<std::string> bad;
  for (const Gen& g : all_generators(A.idx))
    if (!(R * A.act(g) == B.act(g) * R)) bad.push_back(gen_str(g));
  return bad;
}

std::vector<CalibrationTrial> calibration_table(const SuperIndex& idx) {
  const GradedOperator R = build_R_pibar_pi(idx);
  const RepModule E = build_vector_rep(idx);
  std::vector<CalibrationTrial> table;
  for (const CoproductConvention& conv : coproduct_family()) {
    CalibrationTrial trial;
    trial.convention = conv;
    const RepModule Ebar = build_dual_rep_with(E, conv);
    const RepModule straight = tensor_module_with(Ebar, E, conv);
    const RepModule opposite = opposite_tensor_module_with(Ebar, E, conv);
    trial.failures = check_intertwiner(R, straight, opposite);
    trial.pass = trial.failures.empty();
    table.push_back(std::move(trial));
  }
  return table;
}

CoproductConvention calibrate_coproduct(const SuperIndex& idx) {
  const auto table = calibration_table(idx);
  const CalibrationTrial* winner = nullptr;
  int passes = 0;
  for (const CalibrationTrial& t : table)
    if (t.pass) {
      ++passes;
      winner = &t;
    }
  if (passes != 1) {
    std::string msg = "calibration found " + std::to_string(passes) +
                      " passing conventions:";
    for (const CalibrationTrial& t : table) {
      msg += "\n  " + t.convention.name + ": " +
             (t.pass ? "pass" : "fails at");
      for (const std::string& f : t.failures) msg += " " + f;
    }
    throw std::runtime_error(msg);
  }
  Calibration::set(winner->convention);
  return winner->convention;
}

std::vector<GradedOperator> solve_intertwiner(const RepModule& A,
                                              const RepModule& B) {
  if (A.dim() != B.dim() || !(A.idx == B.idx))
    throw std::logic_error("intertwiner solve needs equal-sized modules");
  const int d = A.dim();

  // Weight-matching slots; K and K^{-1} relations hold iff M is supported
  // here, because both K actions are the recorded weight diagonals.
  std::vector<std::pair<int, int>> slots;
  std::vector<std::vector<int>> slot_at(d, std::vector<int>(d, -1));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (B.weights[i] == A.weights[j]) {
        slot_at[i][j] = static_cast<int>(slots.size());
        slots.emplace_back(i, j);
      }

  Mat rows;
  auto add_conditions = [&](const GradedOperator& opA,
                            const GradedOperator& opB) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Vec row = zero_vec(static_cast<int>(slots.size()));
        bool nonzero = false;
        for (int k = 0; k < d; ++k) {
          if (slot_at[i][k] >= 0 && !opA.entries[k][j].is_zero()) {
            row[slot_at[i][k]] += opA.entries[k][j];
            nonzero = true;
          }
          if (slot_at[k][j] >= 0 && !opB.entries[i][k].is_zero()) {
            row[slot_at[k][j]] -= opB.entries[i][k];
            nonzero = true;
          }
        }
        if (nonzero) rows.push_back(std::move(row));
      }
  };
  for (int c = 0; c + 1 < A.idx.dim(); ++c) {
    add_conditions(A.raise_op[c], B.raise_op[c]);
    add_conditions(A.lower_op[c], B.lower_op[c]);
  }

  std::vector<Vec> ker;
  if (rows.empty()) {
    for (size_t s = 0; s < slots.size(); ++s) {
      Vec e = zero_vec(static_cast<int>(slots.size()));
      e[s] = RationalScalar(1);
      ker.push_back(std::move(e));
    }
  } else {
    ker = kernel(rows);
  }

  std::vector<GradedOperator> out;
  for (const Vec& x : ker) {
    GradedOperator M = GradedOperator::zero(A.space, B.space, 0);
    for (size_t s = 0; s < slots.size(); ++s)
      M.entries[slots[s].first][slots[s].second] = x[s];
    out.push_back(std::move(M));
  }
  return out;
}

Braiding derive_braiding(const SuperIndex& idx) {
  const RepModule E = build_vector_rep(idx);
  const RepModule straight = tensor_module(E, E);
  const RepModule opposite = opposite_tensor_module(E, E);
  const std::vector<GradedOperator> sols =
      solve_intertwiner(straight, opposite);
  if (sols.empty()) throw std::runtime_error("empty intertwiner space");

  const int D = straight.dim();
  const int norm_col = 1;  // pair (1,2), the first mixed diagonal entry
  auto pick = [&](bool lower) -> std::optional<Vec> {
    Mat sys;
    Vec rhs;
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) {
        if (!(lower ? i < j : i > j)) continue;
        Vec row(sols.size());
        for (size_t s = 0; s < sols.size(); ++s) row[s] = sols[s].entries[i][j];
        sys.push_back(std::move(row));
        rhs.push_back(RationalScalar(0));
      }
    Vec norm(sols.size());
    for (size_t s = 0; s < sols.size(); ++s)
      norm[s] = sols[s].entries[norm_col][norm_col];
    sys.push_back(std::move(norm));
    rhs.push_back(RationalScalar(1));

    // solve over the augmented system: here solve() wants square-ish input,
    // so run it directly on the stacked rows.
    return solve(sys, rhs);
  };

  std::optional<Vec> combo = pick(true);  // lower first, like the mixed braiding
  if (!combo) combo = pick(false);
  if (!combo)
    throw std::runtime_error("no triangular member in the intertwiner space");

  Braiding out{GradedOperator::zero(straight.space, straight.space, 0),
               GradedOperator::zero(straight.space, straight.space, 0),
               RationalScalar(0), RationalScalar(0)};
  for (size_t s = 0; s < sols.size(); ++s)
    out.R = out.R + sols[s].scaled((*combo)[s]);
  if (rank(out.R) != D) throw std::runtime_error("triangular member singular");
  out.R_check = graded_flip(E.space, E.space) * out.R;

  // Minimal quadratic: R_check^2 = s R_check + t.
  const GradedOperator sq = out.R_check * out.R_check;
  Mat sys;
  Vec rhs;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      Vec row{out.R_check.entries[i][j],
              i == j ? RationalScalar(1) : RationalScalar(0)};
      if (is_zero_vec(row) && sq.entries[i][j].is_zero()) continue;
      sys.push_back(std::move(row));
      rhs.push_back(sq.entries[i][j]);
    }
  const std::optional<Vec> st = solve(sys, rhs);
  if (!st) throw std::runtime_error("flip-braiding is not quadratic");
  const RationalScalar s = (*st)[0], t = (*st)[1];
  const RationalScalar q = RationalScalar::q(), qi = RationalScalar::q_power(-1);
  const std::vector<std::pair<RationalScalar, RationalScalar>> candidates = {
      {qi, -q}, {q, -qi}, {qi, q}, {-qi, -q}};
  for (const auto& [a, b] : candidates)
    if (a + b == s && -(a * b) == t) {
      out.alpha = a;
      out.beta = b;
      return out;
    }
  throw std::runtime_error("quadratic roots outside the expected q-powers");
}

bool check_yang_baxter(const GradedOperator& R, const GradedSpace& V) {
  const GradedOperator idV = GradedOperator::identity(V);
  const GradedOperator R12 = graded_kron(R, idV);
  const GradedOperator R23 = graded_kron(idV, R);
  const GradedOperator P23 = graded_kron(idV, graded_flip(V, V));
  const GradedOperator R13 = P23 * R12 * P23;
  return R12 * R13 * R23 == R23 * R13 * R12;
}

}  // namespace glq
