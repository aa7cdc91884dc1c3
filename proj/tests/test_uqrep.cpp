#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "glq/uqrep.hpp"

using namespace glq;

namespace {

RationalScalar qp(long e) { return RationalScalar::q_power(e); }

void use_default_convention() {
  Calibration::reset();
  Calibration::set(coproduct_family().front());
}

Weight wt(std::initializer_list<long> xs) { return Weight(xs); }

bool single_unit_entry(const GradedOperator& op, int row, int col) {
  for (int i = 0; i < op.cod.dim(); ++i)
    for (int j = 0; j < op.dom.dim(); ++j) {
      const RationalScalar want =
          (i == row && j == col) ? RationalScalar(1) : RationalScalar(0);
      if (!(op.entries[i][j] == want)) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("coproduct family is fixed and the calibration is write-once") {
  const auto& fam = coproduct_family();
  REQUIRE(fam.size() == 8);
  CHECK(fam[0].e_power == 1);
  CHECK(fam[0].f_power == -1);
  CHECK(fam[0].graded_dual);
  for (size_t i = 0; i < fam.size(); ++i)
    for (size_t j = i + 1; j < fam.size(); ++j) CHECK(!(fam[i] == fam[j]));

  Calibration::reset();
  CHECK(!Calibration::is_set());
  CHECK_THROWS_AS(Calibration::get(), StateError);
  Calibration::set(fam[1]);
  CHECK(Calibration::is_set());
  CHECK(Calibration::get() == fam[1]);
  Calibration::set(fam[1]);  // idempotent
  CHECK_THROWS_AS(Calibration::set(fam[0]), StateError);
  Calibration::reset();
}

TEST_CASE("dual and tensor constructions require a calibrated convention") {
  Calibration::reset();
  const RepModule E = build_vector_rep({1, 1});
  CHECK_THROWS_AS(build_dual_rep(E), StateError);
  CHECK_THROWS_AS(tensor_module(E, E), StateError);
  CHECK_THROWS_AS(word_module({1, 1}, 1, 1), StateError);
}

TEST_CASE("vector representation acts by matrix units and q-power diagonals") {
  use_default_convention();
  const SuperIndex idx{1, 1};
  const RepModule E = build_vector_rep(idx);
  REQUIRE(E.dim() == 2);
  CHECK(E.space.parity == std::vector<int>{0, 1});

  // K_1 v_1 = q v_1, K_1 v_2 = v_2, K_2 v_2 = q^{-1} v_2.
  CHECK(E.actK[0].entries[0][0] == qp(1));
  CHECK(E.actK[0].entries[1][1] == qp(0));
  CHECK(E.actK[1].entries[0][0] == qp(0));
  CHECK(E.actK[1].entries[1][1] == qp(-1));
  CHECK(E.actKinv[1].entries[1][1] == qp(1));

  // E_{12} v_2 = v_1, E_{12} v_1 = 0, E_{21} v_1 = v_2.
  CHECK(single_unit_entry(E.raise_op[0], 0, 1));
  CHECK(single_unit_entry(E.lower_op[0], 1, 0));
  CHECK(E.raise_op[0].parity == 1);

  CHECK(E.weights[0] == wt({1, 0}));
  CHECK(E.weights[1] == wt({0, 1}));
  CHECK(check_module(E).empty());
}

TEST_CASE("vector representation has single-entry generators for any size") {
  use_default_convention();
  for (SuperIndex idx : {SuperIndex{2, 1}, SuperIndex{1, 2}, SuperIndex{3, 2}}) {
    const RepModule E = build_vector_rep(idx);
    REQUIRE(E.dim() == idx.dim());
    for (int c = 1; c < idx.dim(); ++c) {
      CHECK(single_unit_entry(E.raise_op[c - 1], c - 1, c));
      CHECK(single_unit_entry(E.lower_op[c - 1], c, c - 1));
    }
    for (int a = 1; a <= idx.dim(); ++a) {
      Weight w(idx.dim(), 0);
      w[a - 1] = 1;
      CHECK(E.weights[a - 1] == w);
      CHECK(E.actK[a - 1].entries[a - 1][a - 1] == idx.q_a(a));
    }
    CHECK(check_module(E).empty());
  }
}

TEST_CASE("dual of the vector representation inverts weights") {
  use_default_convention();
  const SuperIndex idx{1, 1};
  const RepModule E = build_vector_rep(idx);
  const RepModule Ebar = build_dual_rep(E);

  CHECK(Ebar.weights[0] == wt({-1, 0}));
  CHECK(Ebar.weights[1] == wt({0, -1}));
  CHECK(Ebar.actK[0].entries[0][0] == qp(-1));
  CHECK(Ebar.actK[1].entries[1][1] == qp(1));
  CHECK(check_module(Ebar).empty());

  // Raising sends the lowest line up with coefficient -q^{-1}; lowering
  // returns with coefficient q.
  CHECK(Ebar.raise_op[0].entries[1][0] == -qp(-1));
  CHECK(Ebar.raise_op[0].entries[0][1].is_zero());
  CHECK(Ebar.lower_op[0].entries[0][1] == qp(1));

  const auto hw = highest_weight_vectors(Ebar);
  REQUIRE(hw.size() == 1);
  CHECK(hw[0].first == wt({0, -1}));

  const auto checks = check_module(build_dual_rep(build_vector_rep({2, 1})));
  CHECK(checks.empty());
}

TEST_CASE("tensor products multiply dimensions, add weights, keep invariants") {
  use_default_convention();
  const SuperIndex idx{1, 1};
  const RepModule E = build_vector_rep(idx);
  const RepModule T = tensor_module(E, E);
  REQUIRE(T.dim() == 4);
  CHECK(T.space.parity == std::vector<int>{0, 1, 1, 0});
  CHECK(T.weights == std::vector<Weight>{wt({2, 0}), wt({1, 1}), wt({1, 1}),
                                         wt({0, 2})});
  CHECK(T.provenance == "E*E");
  CHECK(check_module(T).empty());

  // Raising carries the weight factor on the right leg and a parity sign on
  // the second term: columns of v1(x)v2, v2(x)v1, v2(x)v2.
  CHECK(T.raise_op[0].entries[0][1] == qp(0));
  CHECK(T.raise_op[0].entries[0][2] == qp(1));
  CHECK(T.raise_op[0].entries[1][3] == qp(1));
  CHECK(T.raise_op[0].entries[2][3] == -qp(0));

  // Lowering v1(x)v1 = v2(x)v1 + q^{-1} v1(x)v2.
  CHECK(T.lower_op[0].entries[2][0] == qp(0));
  CHECK(T.lower_op[0].entries[1][0] == qp(-1));
  CHECK(T.lower_op[0].entries[3][0].is_zero());

  const RepModule big = word_module({2, 1}, 2, 1);
  CHECK(big.dim() == 27);
  CHECK(big.provenance == "E*E*Ebar");
  CHECK(check_module(big).empty());
}

TEST_CASE("tensoring is associative on the nose") {
  use_default_convention();
  for (SuperIndex idx : {SuperIndex{1, 1}, SuperIndex{2, 1}}) {
    const RepModule E = build_vector_rep(idx);
    const RepModule Ebar = build_dual_rep(E);
    const RepModule L = tensor_module(tensor_module(E, E), Ebar);
    const RepModule R = tensor_module(E, tensor_module(E, Ebar));
    REQUIRE(L.dim() == R.dim());
    for (int a = 0; a < idx.dim(); ++a) {
      CHECK(L.actK[a] == R.actK[a]);
      CHECK(L.actKinv[a] == R.actKinv[a]);
    }
    for (int c = 0; c + 1 < idx.dim(); ++c) {
      CHECK(L.raise_op[c] == R.raise_op[c]);
      CHECK(L.lower_op[c] == R.lower_op[c]);
    }
  }
}

TEST_CASE("antipode images satisfy the defining cancellations") {
  use_default_convention();
  const auto& conv = Calibration::get();
  for (SuperIndex idx : {SuperIndex{1, 1}, SuperIndex{2, 1}}) {
    const RepModule E = build_vector_rep(idx);
    for (int c = 1; c < idx.dim(); ++c) {
      const GradedOperator X = E.actK[c - 1] * E.actKinv[c];       // e_power=+1
      const GradedOperator Yinv = E.actK[c - 1] * E.actKinv[c];    // f_power=-1
      // m(S(x1) (x) x2) = eps(x): S(E)X + E = 0 and S(F) + Y^{-1}F = 0.
      const GradedOperator se = antipode_image(E, {Gen::Raise, c}, conv);
      const GradedOperator sf = antipode_image(E, {Gen::Lower, c}, conv);
      CHECK((se * X + E.raise_op[c - 1]).is_zero());
      CHECK((sf + Yinv * E.lower_op[c - 1]).is_zero());
      // m(S^{-1}(x2(x) x1) analogue: X^{-1}E + S^{-1}(E) pairs to zero too.
      const GradedOperator sie = antipode_inv_image(E, {Gen::Raise, c}, conv);
      const GradedOperator sif = antipode_inv_image(E, {Gen::Lower, c}, conv);
      const GradedOperator Xinv = E.actKinv[c - 1] * E.actK[c];
      CHECK((Xinv * E.raise_op[c - 1] + sie).is_zero());
      CHECK((E.lower_op[c - 1] * Yinv + sif).is_zero());
    }
    CHECK(antipode_image(E, {Gen::K, 1}, conv) == E.actKinv[0]);
    CHECK(antipode_inv_image(E, {Gen::Kinv, 1}, conv) == E.actK[0]);
  }
}

TEST_CASE("highest weight vectors come per weight space in decreasing order") {
  use_default_convention();
  const SuperIndex idx{1, 1};
  const RepModule E = build_vector_rep(idx);
  const auto hwE = highest_weight_vectors(E);
  REQUIRE(hwE.size() == 1);
  CHECK(hwE[0].first == wt({1, 0}));
  CHECK(hwE[0].second[0] == RationalScalar(1));
  CHECK(hwE[0].second[1].is_zero());

  const auto hwT = highest_weight_vectors(tensor_module(E, E));
  REQUIRE(hwT.size() == 2);
  CHECK(hwT[0].first == wt({2, 0}));
  CHECK(hwT[1].first == wt({1, 1}));
  // The (1,1) vector is proportional to v1(x)v2 - q^{-1} v2(x)v1.
  const Vec& v = hwT[1].second;
  CHECK(!v[2].is_zero());
  CHECK((v[1] + qp(1) * v[2]).is_zero());
  CHECK(v[0].is_zero());
  CHECK(v[3].is_zero());

  const auto hw1 = highest_weight_vectors(build_trivial_rep(idx));
  REQUIRE(hw1.size() == 1);
  CHECK(hw1[0].first == wt({0, 0}));
}

TEST_CASE("square of the vector module splits into two typical halves") {
  use_default_convention();
  const SuperIndex idx{1, 1};
  const RepModule T = tensor_module(build_vector_rep(idx), build_vector_rep(idx));
  const Decomposition dec = decompose(T);
  REQUIRE(dec.summands.size() == 2);
  CHECK(dec.summands[0].highest_weight == wt({2, 0}));
  CHECK(dec.summands[0].module.dim() == 2);
  CHECK(dec.summands[1].highest_weight == wt({1, 1}));
  CHECK(dec.summands[1].module.dim() == 2);
  CHECK(dec.residue_dim == 0);
  for (const Summand& s : dec.summands) {
    CHECK(check_module(s.module).empty());
    CHECK(highest_weight_vectors(s.module).size() == 1);
    CHECK(static_cast<int>(s.basis.size()) == s.module.dim());
  }
}

TEST_CASE("vector module and its dual are irreducible") {
  use_default_convention();
  for (SuperIndex idx : {SuperIndex{1, 1}, SuperIndex{2, 1}}) {
    const RepModule E = build_vector_rep(idx);
    const Decomposition d1 = decompose(E);
    REQUIRE(d1.summands.size() == 1);
    CHECK(d1.summands[0].module.dim() == idx.dim());
    CHECK(d1.residue_dim == 0);
    const Decomposition d2 = decompose(build_dual_rep(E));
    REQUIRE(d2.summands.size() == 1);
    CHECK(d2.residue_dim == 0);
  }
}

TEST_CASE("mixed square keeps exactly one invariant line and a residue") {
  use_default_convention();
  const SuperIndex idx{1, 1};
  const RepModule E = build_vector_rep(idx);
  const RepModule Ebar = build_dual_rep(E);
  for (const RepModule& M :
       {tensor_module(Ebar, E), tensor_module(E, Ebar)}) {
    const Decomposition dec = decompose(M);
    REQUIRE(dec.summands.size() == 1);
    CHECK(dec.summands[0].highest_weight == wt({0, 0}));
    CHECK(dec.summands[0].module.dim() == 1);
    CHECK(dec.residue_dim == 3);
  }
}

TEST_CASE("cube of the vector module decomposes with known dimensions") {
  use_default_convention();

  const Decomposition d11 = decompose(word_module({1, 1}, 3, 0));
  REQUIRE(d11.summands.size() == 4);
  CHECK(d11.residue_dim == 0);
  for (const Summand& s : d11.summands) CHECK(s.module.dim() == 2);

  const Decomposition d21 = decompose(word_module({2, 1}, 3, 0));
  CHECK(d21.residue_dim == 0);
  std::vector<int> dims;
  int total = 0;
  for (const Summand& s : d21.summands) {
    dims.push_back(s.module.dim());
    total += s.module.dim();
  }
  CHECK(total == 27);
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{4, 7, 8, 8});
}

TEST_CASE("weight parity matches the space parity on word modules") {
  use_default_convention();
  for (SuperIndex idx : {SuperIndex{1, 1}, SuperIndex{2, 1}}) {
    const RepModule M = word_module(idx, 2, 1);
    for (int i = 0; i < M.dim(); ++i) {
      long odd = 0;
      for (int a = idx.m + 1; a <= idx.dim(); ++a) odd += M.weights[i][a - 1];
      CHECK(((odd % 2 + 2) % 2) == M.space.parity[i]);
    }
  }
}

TEST_CASE("lowest weights and the dagger involution") {
  use_default_convention();
  const SuperIndex idx{1, 1};
  CHECK(lowest_weight(build_vector_rep(idx)) == wt({0, 1}));
  CHECK(lowest_weight(build_vector_rep({2, 1})) == wt({0, 0, 1}));
  CHECK(lowest_weight(build_trivial_rep(idx)) == wt({0, 0}));

  CHECK(dagger(wt({0, 0}), idx, 0) == wt({0, 0}));
  CHECK(dagger(wt({1, 0}), idx, 1) == wt({0, -1}));
  CHECK(dagger(wt({2, 0}), idx, 2) == wt({-1, -1}));
  CHECK(dagger(wt({1, 1}), idx, 2) == wt({0, -2}));
  CHECK_THROWS_AS(dagger(wt({5, 5}), idx, 1), std::domain_error);

  for (const Weight& lam :
       enumerate_lambda(idx, 3, TensorSide::contravariant)) {
    const Weight img = dagger(lam, idx, 3);
    CHECK(dagger(img, idx, 3) == lam);
  }
}

TEST_CASE("weight enumeration by tensor degree") {
  use_default_convention();
  const SuperIndex idx{1, 1};
  CHECK(enumerate_lambda(idx, 1, TensorSide::contravariant) ==
        std::vector<Weight>{wt({1, 0}), wt({0, 0})});
  CHECK(enumerate_lambda(idx, 2, TensorSide::contravariant) ==
        std::vector<Weight>{wt({2, 0}), wt({1, 1}), wt({1, 0}), wt({0, 0})});
  CHECK(enumerate_lambda(idx, 2, TensorSide::covariant) ==
        std::vector<Weight>{wt({0, 0}), wt({0, -1}), wt({0, -2}),
                            wt({-1, -1})});

  // The two lists only share the zero weight.
  std::vector<Weight> common;
  const auto lhs = enumerate_lambda(idx, 2, TensorSide::contravariant);
  const auto rhs = enumerate_lambda(idx, 2, TensorSide::covariant);
  for (const Weight& w : lhs)
    if (std::find(rhs.begin(), rhs.end(), w) != rhs.end()) common.push_back(w);
  CHECK(common == std::vector<Weight>{wt({0, 0})});

  // Dagger maps one list onto the other.
  std::vector<Weight> image;
  for (const Weight& w : lhs) image.push_back(dagger(w, idx, 2));
  std::sort(image.begin(), image.end(), std::greater<>());
  CHECK(image == rhs);
}

TEST_CASE("module cache reuses decompositions and registers classes") {
  use_default_convention();
  ModuleCache cache({1, 1});
  CHECK(cache.find_class(wt({1, 0})) == nullptr);
  const Decomposition& d = cache.decomposition(2, 0);
  CHECK(d.summands.size() == 2);
  CHECK(cache.find_class(wt({2, 0})) != nullptr);
  CHECK(cache.find_class(wt({1, 1})) != nullptr);
  CHECK(cache.find_class(wt({1, 0})) == nullptr);
  cache.decomposition(1, 0);
  REQUIRE(cache.find_class(wt({1, 0})) != nullptr);
  CHECK(cache.find_class(wt({1, 0}))->dim() == 2);
  CHECK(&cache.decomposition(2, 0) == &d);
  CHECK(cache.registered_weights().size() == 3);
}

TEST_CASE("word helpers and the decomposition report") {
  use_default_convention();
  const SuperIndex idx{1, 1};
  const Word w{{Gen::K, 1}, {Gen::Raise, 1}, {Gen::Kinv, 2}};
  CHECK(word_str(w) == "K1*E1,2*K2^-1");
  CHECK(word_str({}) == "1");
  CHECK(word_parity(idx, w) == 1);
  CHECK(!counit_is_one(w));
  CHECK(counit_is_one({{Gen::K, 1}, {Gen::Kinv, 1}}));
  CHECK(all_generators(idx).size() == 6);

  const RepModule E = build_vector_rep(idx);
  const GradedOperator img = E.act_word(w);
  // K1 E12 K2^{-1} v2 = q^2 v1 at (1,1): K2^{-1}v2 = q v2, E12 v2 = v1, K1 v1 = q v1.
  CHECK(img.entries[0][1] == qp(2));

  const std::string rep = decomposition_report_json(
      idx, "E*E", decompose(word_module(idx, 2, 0)));
  CHECK(rep.find("\"schema\": \"decomposition/v1\"") != std::string::npos);
  CHECK(rep.find("\"residue_dim\": 0") != std::string::npos);
  CHECK(rep.find("\"word\": \"E*E\"") != std::string::npos);
  CHECK(rep.find("\"dim\": 2") != std::string::npos);
  CHECK(rep.back() == '\n');
}
