#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "glq/rmatrix.hpp"

using namespace glq;

namespace {

RationalScalar qp(long e) { return RationalScalar::q_power(e); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void ensure_calibrated() {
  Calibration::reset();
  calibrate_coproduct({1, 1});
}

Vec flatten(const GradedOperator& op) {
  Vec v;
  for (const auto& row : op.entries)
    for (const auto& x : row) v.push_back(x);
  return v;
}

}  // namespace

TEST_CASE("literal mixed braiding matches its goldens and is invertible") {
  const GradedOperator R11 = build_R_pibar_pi({1, 1});
  CHECK(dump(R11) == read_file(GLQ_SOURCE_DIR "/tests/golden/r_matrix_1_1.txt"));
  CHECK(rank(R11) == 4);

  const GradedOperator R21 = build_R_pibar_pi({2, 1});
  CHECK(dump(R21) == read_file(GLQ_SOURCE_DIR "/tests/golden/r_matrix_2_1.txt"));
  CHECK(rank(R21) == 9);
}

TEST_CASE("calibration passes exactly one convention") {
  Calibration::reset();
  const auto table = calibration_table({1, 1});
  REQUIRE(table.size() == 8);
  int passes = 0;
  for (const CalibrationTrial& t : table) {
    if (t.pass) ++passes;
    if (!t.convention.graded_dual) CHECK(!t.pass);
    if (!t.pass) CHECK(!t.failures.empty());
  }
  CHECK(passes == 1);
  CHECK(table[0].pass);

  const CoproductConvention conv = calibrate_coproduct({1, 1});
  CHECK(conv == coproduct_family().front());
  CHECK(Calibration::is_set());
  CHECK(Calibration::get() == conv);

  // The same member is the unique winner at a bigger size.
  int passes21 = 0;
  for (const CalibrationTrial& t : calibration_table({2, 1})) {
    if (t.pass) ++passes21;
    if (t.pass) CHECK(t.convention == conv);
  }
  CHECK(passes21 == 1);
}

TEST_CASE("identity and same-side actions fail to intertwine") {
  ensure_calibrated();
  const SuperIndex idx{1, 1};
  const RepModule E = build_vector_rep(idx);
  const RepModule Ebar = build_dual_rep(E);
  const RepModule straight = tensor_module(Ebar, E);
  const RepModule opposite = opposite_tensor_module(Ebar, E);
  const GradedOperator R = build_R_pibar_pi(idx);

  CHECK(check_intertwiner(R, straight, opposite).empty());
  CHECK(!check_intertwiner(GradedOperator::identity(straight.space), straight,
                           opposite)
             .empty());
  CHECK(!check_intertwiner(R, straight, straight).empty());
  CHECK(!check_intertwiner(R, opposite, straight).empty());
}

TEST_CASE("derived square braiding is triangular, quadratic, Yang-Baxter") {
  ensure_calibrated();
  const SuperIndex idx{1, 1};
  const Braiding B = derive_braiding(idx);

  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) CHECK(B.R.entries[i][j].is_zero());
  CHECK(B.R.entries[0][0] == qp(-1));
  CHECK(B.R.entries[1][1] == qp(0));
  CHECK(B.R.entries[2][2] == qp(0));
  CHECK(B.R.entries[3][3] == qp(1));

  const RepModule E = build_vector_rep(idx);
  CHECK(check_intertwiner(B.R, tensor_module(E, E),
                          opposite_tensor_module(E, E))
            .empty());

  CHECK(B.alpha == qp(-1));
  CHECK(B.beta == -qp(1));
  const GradedOperator id = GradedOperator::identity(B.R.dom);
  const GradedOperator lhs = (B.R_check - id.scaled(B.alpha)) *
                             (B.R_check - id.scaled(B.beta));
  CHECK(lhs.is_zero());

  CHECK(check_yang_baxter(B.R, E.space));
}

TEST_CASE("derived braiding at a bigger size keeps the same quadratic") {
  ensure_calibrated();
  const SuperIndex idx{2, 1};
  const Braiding B = derive_braiding(idx);
  CHECK(B.alpha == qp(-1));
  CHECK(B.beta == -qp(1));
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j) CHECK(B.R.entries[i][j].is_zero());
  CHECK(rank(B.R) == 9);
  CHECK(check_yang_baxter(B.R, build_vector_rep(idx).space));
}

TEST_CASE("Yang-Baxter rejects a corrupted braiding") {
  ensure_calibrated();
  const SuperIndex idx{1, 1};
  Braiding B = derive_braiding(idx);
  B.R.entries[0][1] = B.R.entries[0][1] + RationalScalar(1);
  CHECK(!check_yang_baxter(B.R, build_vector_rep(idx).space));
}

TEST_CASE("intertwiner space of the square contains the braiding") {
  ensure_calibrated();
  const SuperIndex idx{1, 1};
  const RepModule E = build_vector_rep(idx);
  const auto sols =
      solve_intertwiner(tensor_module(E, E), opposite_tensor_module(E, E));
  CHECK(sols.size() == 2);
  SpanBasis span(16);
  for (const GradedOperator& s : sols) span.add(flatten(s));
  CHECK(span.contains(flatten(derive_braiding(idx).R)));

  const RepModule Ebar = build_dual_rep(E);
  const auto mixed =
      solve_intertwiner(tensor_module(Ebar, E), opposite_tensor_module(Ebar, E));
  CHECK(mixed.size() == 2);
  SpanBasis mspan(16);
  for (const GradedOperator& s : mixed) mspan.add(flatten(s));
  CHECK(mspan.contains(flatten(build_R_pibar_pi(idx))));
}
