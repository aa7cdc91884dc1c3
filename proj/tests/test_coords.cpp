#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "glq/coords.hpp"

using namespace glq;

namespace {

RationalScalar qp(long e) { return RationalScalar::q_power(e); }

GqContext make_ctx(int m = 1, int n = 1) {
  if (!Calibration::is_set()) calibrate_coproduct({1, 1});
  return GqContext(SuperIndex{m, n});
}

std::vector<Word> all_words(const SuperIndex& idx, int maxlen) {
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

std::set<std::string> modules_of(const GqElement& f) {
  std::set<std::string> out;
  for (const auto& [k, c] : f.terms) out.insert(k.module);
  return out;
}

}  // namespace

TEST_CASE("pairing against the vector module matches the literal matrices") {
  GqContext ctx = make_ctx();
  CHECK(ctx.pair_word(ctx.mc("E", 0, 1), {{Gen::Raise, 1}}) == qp(0));
  CHECK(ctx.pair_word(ctx.mc("E", 0, 0), {{Gen::Raise, 1}}).is_zero());
  CHECK(ctx.pair_word(ctx.mc("E", 1, 0), {{Gen::Lower, 1}}) == qp(0));
  CHECK(ctx.pair_word(ctx.mc("E", 0, 0), {{Gen::K, 1}}) == qp(1));
  CHECK(ctx.pair_word(ctx.mc("E", 1, 1), {{Gen::K, 1}}) == qp(0));
  CHECK(ctx.pair_word(ctx.mc("E", 1, 1), {{Gen::K, 2}}) == qp(-1));
  // Empty word pairs as the counit: delta on the indices.
  CHECK(ctx.pair_word(ctx.mc("E", 0, 0), {}) == qp(0));
  CHECK(ctx.pair_word(ctx.mc("E", 0, 1), {}).is_zero());
}

TEST_CASE("coproduct of a word has the declared term structure") {
  GqContext ctx = make_ctx();
  const SuperIndex idx{1, 1};
  const auto dk = coproduct_word(idx, {{Gen::K, 1}}, ctx.convention());
  REQUIRE(dk.size() == 1);
  CHECK(word_str(dk[0].left) == word_str(Word{{Gen::K, 1}}));
  CHECK(word_str(dk[0].right) == word_str(Word{{Gen::K, 1}}));

  const auto de = coproduct_word(idx, {{Gen::Raise, 1}}, ctx.convention());
  REQUIRE(de.size() == 2);
  bool saw_left = false, saw_right = false;
  for (const auto& t : de) {
    if (t.left.size() == 1 && t.left[0].kind == Gen::Raise) {
      saw_left = true;
      CHECK(t.right.size() == 2);  // the weight word K_c K_{c+1}^{-1} power
    }
    if (t.left.empty()) {
      saw_right = true;
      REQUIRE(t.right.size() == 1);
      CHECK(t.right[0].kind == Gen::Raise);
    }
  }
  CHECK(saw_left);
  CHECK(saw_right);

  const auto df = coproduct_word(idx, {{Gen::Lower, 1}}, ctx.convention());
  REQUIRE(df.size() == 2);
  bool f_left = false, f_right = false;
  for (const auto& t : df) {
    if (t.right.empty()) f_left = true;   // F (x) 1
    if (!t.left.empty() && t.left[0].kind != Gen::Lower) f_right = true;
  }
  CHECK(f_left);
  CHECK(f_right);
}

TEST_CASE("product pairing agrees with the coproduct expansion") {
  GqContext ctx = make_ctx();
  const SuperIndex idx{1, 1};

  std::vector<GqElement> mcs;
  for (const std::string& mod : {"E", "Ebar"})
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) mcs.push_back(ctx.mc(mod, i, j));

  // Deterministic word sample: everything up to length 2, every ninth word
  // of length 3.
  const std::vector<Word> len2 = all_words(idx, 2);
  std::vector<Word> words = len2;
  const std::vector<Word> len3 = all_words(idx, 3);
  for (size_t i = len2.size(); i < len3.size(); i += 9) words.push_back(len3[i]);

  for (const GqElement& f : mcs)
    for (const GqElement& g : mcs) {
      const GqElement fg = ctx.multiply(f, g);
      const int gp = *ctx.element_parity(g);
      for (const Word& w : words) {
        const auto terms = coproduct_word(idx, w, ctx.convention());
        RationalScalar rhs;
        for (const auto& t : terms) {
          RationalScalar c =
              t.coeff * ctx.pair_word(f, t.left) * ctx.pair_word(g, t.right);
          if ((gp * word_parity(idx, t.left)) & 1) c = -c;
          rhs += c;
        }
        CHECK(ctx.pair_word(fg, w) == rhs);
      }
    }
}

TEST_CASE("unit element is a two-sided identity for the product") {
  GqContext ctx = make_ctx();
  const GqElement one = ctx.unit();
  CHECK(ctx.pair_word(one, {}) == qp(0));
  for (const GqElement& f :
       {ctx.mc("E", 0, 1), ctx.mc("Ebar", 1, 0), ctx.mc("E", 1, 1)}) {
    const GqElement red = ctx.peter_weyl_reduce(f);
    CHECK(ctx.multiply(one, f) == red);
    CHECK(ctx.multiply(f, one) == red);
  }
  CHECK(ctx.multiply(one, one) == one);
}

TEST_CASE("vector coefficient products land on the two summand classes") {
  GqContext ctx = make_ctx();
  const GqElement p =
      ctx.multiply(ctx.mc("E", 0, 0), ctx.mc("E", 0, 0));
  CHECK(!p.is_zero());
  for (const std::string& mod : modules_of(p))
    CHECK((mod == "W(2,0)" || mod == "W(1,1)"));

  // All sixteen products of vector coefficients span the full coefficient
  // space of the degree-two contravariant block.
  std::vector<GqElement> prods;
  std::set<McKey> keys;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          prods.push_back(
              ctx.multiply(ctx.mc("E", i, j), ctx.mc("E", k, l)));
          for (const auto& [key, c] : prods.back().terms) keys.insert(key);
        }
  std::vector<McKey> cols(keys.begin(), keys.end());
  SpanBasis span(static_cast<int>(cols.size()));
  int rank = 0;
  for (const GqElement& p2 : prods) {
    Vec row(cols.size());
    for (size_t t = 0; t < cols.size(); ++t) {
      auto it = p2.terms.find(cols[t]);
      if (it != p2.terms.end()) row[t] = it->second;
    }
    if (span.add(row)) ++rank;
  }
  CHECK(rank == 8);
  CHECK(ctx.module_functionals("E*E").independent.size() == 8);
}

TEST_CASE("product parity is additive") {
  GqContext ctx = make_ctx();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const GqElement f = ctx.mc("E", i, j);
      const GqElement g = ctx.mc("Ebar", j, i);
      const GqElement fg = ctx.multiply(f, g);
      if (fg.is_zero()) continue;
      const auto p = ctx.element_parity(fg);
      REQUIRE(p.has_value());
      CHECK(*p == ((*ctx.element_parity(f) + *ctx.element_parity(g)) & 1));
    }
}

TEST_CASE("right translation matches the displayed coefficient formula") {
  GqContext ctx = make_ctx();
  const GqElement t01 = ctx.mc("E", 0, 1);
  const GqElement t11 = ctx.mc("E", 1, 1);
  // Torus letters scale by the column eigenvalue.
  CHECK(ctx.act_R({Gen::K, 1}, t01) == t01);
  CHECK(ctx.act_R({Gen::K, 2}, t01) == gq_scale(t01, qp(-1)));
  // The raising letter moves the column with the super sign.
  CHECK(ctx.act_R({Gen::Raise, 1}, t01) == ctx.mc("E", 0, 0));
  CHECK(ctx.act_R({Gen::Raise, 1}, t11) == gq_scale(ctx.mc("E", 1, 0), -qp(0)));
  // Empty word is the identity.
  CHECK(ctx.act_R_word({}, t01) == t01);
}

TEST_CASE("left translation scales by the inverse row eigenvalue on torus letters") {
  GqContext ctx = make_ctx();
  const GqElement t00 = ctx.mc("E", 0, 0);
  const GqElement t10 = ctx.mc("E", 1, 0);
  CHECK(ctx.act_L({Gen::K, 1}, t00) == gq_scale(t00, qp(-1)));
  CHECK(ctx.act_L({Gen::K, 1}, t10) == t10);
  CHECK(ctx.act_L_word({}, t00) == t00);
  // The raising letter acts through the inverse antipode image.
  CHECK(ctx.act_L({Gen::Raise, 1}, t00) == gq_scale(t10, -qp(-1)));
}

TEST_CASE("seeded action axiom sample runs clean") {
  GqContext ctx = make_ctx();
  const AxiomReport rep = check_action_axioms(ctx, 12345, 25);
  CHECK(rep.checked == 25);
  CHECK(rep.failed == 0);
  if (rep.failed) {
    for (const std::string& s : rep.failures) MESSAGE(s);
  }
}

TEST_CASE("canonical form preserves every pairing") {
  GqContext ctx = make_ctx();
  ctx.tensor_named("Ebar", "E");
  const std::vector<Word> words = all_words(SuperIndex{1, 1}, 2);
  for (const std::string& mod : {"E*E", "E*Ebar", "Ebar*E"}) {
    const int d = ctx.module_named(mod).dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const GqElement x = ctx.mc(mod, i, j);
        const GqElement red = ctx.peter_weyl_reduce(x);
        for (const Word& w : words)
          CHECK(ctx.pair_word(red, w) == ctx.pair_word(x, w));
      }
  }
}

TEST_CASE("canonical form is idempotent") {
  GqContext ctx = make_ctx();
  ctx.tensor_named("Ebar", "E");
  for (const std::string& mod : {"E*E", "E*Ebar", "Ebar*E"}) {
    const int d = ctx.module_named(mod).dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const GqElement red = ctx.peter_weyl_reduce(ctx.mc(mod, i, j));
        CHECK(ctx.peter_weyl_reduce(red) == red);
      }
  }
}

TEST_CASE("mixed degree block is kept whole and flagged") {
  GqContext ctx = make_ctx();
  GqElement sum;
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
          const GqElement p =
              ctx.multiply(ctx.mc("Ebar", u, v), ctx.mc("E", r, s));
          for (const std::string& mod : modules_of(p))
            CHECK((mod == "W(0,0)" || mod == "E*Ebar"));
          sum = sum + p;
        }
  CHECK(modules_of(sum).count("E*Ebar") == 1);
  CHECK(ctx.flagged().count("E*Ebar") == 1);
}

TEST_CASE("product normal form does not depend on association order") {
  GqContext ctx = make_ctx();
  const GqElement tb = ctx.mc("Ebar", 0, 0);
  const GqElement t1 = ctx.mc("E", 0, 1);
  const GqElement t2 = ctx.mc("E", 1, 0);
  CHECK(ctx.multiply(ctx.multiply(tb, t1), t2) ==
        ctx.multiply(tb, ctx.multiply(t1, t2)));

  const GqElement u1 = ctx.mc("Ebar", 0, 1);
  const GqElement u2 = ctx.mc("Ebar", 1, 1);
  CHECK(ctx.multiply(ctx.multiply(u1, u2), t1) ==
        ctx.multiply(u1, ctx.multiply(u2, t1)));

  // Four factors passing through the glued degree (2,2) block.
  const GqElement a = ctx.mc("E", 0, 0);
  const GqElement b = ctx.mc("Ebar", 1, 1);
  const GqElement ab = ctx.multiply(a, b);
  const GqElement left = ctx.multiply(ctx.multiply(ab, a), b);
  const GqElement right = ctx.multiply(a, ctx.multiply(b, ab));
  CHECK(left == right);
}

TEST_CASE("reversed tensor word coefficients rewrite exactly") {
  GqContext ctx = make_ctx();
  const std::vector<Word> words = all_words(SuperIndex{1, 1}, 2);
  for (int I = 0; I < 4; ++I)
    for (int J = 0; J < 4; ++J) {
      const GqElement rw = rewrite_mixed(ctx, 1, 1, I, J);
      const GqElement orig = ctx.mc("Ebar*E", I, J);
      for (const Word& w : words)
        CHECK(ctx.pair_word(rw, w) == ctx.pair_word(orig, w));
    }
  // Pure words need no reordering.
  CHECK(rewrite_mixed(ctx, 2, 0, 1, 2) == ctx.mc("E*E", 1, 2));
}

TEST_CASE("reversed products span the same block as standard products") {
  GqContext ctx = make_ctx();
  const MixedBlockReport r11 = mixed_block_factorization(ctx, 1, 1, 4);
  CHECK(r11.iso_certified);
  CHECK(r11.rank_reversed == r11.rank_standard);
  CHECK(r11.rank_standard == r11.rank_union);
  CHECK(r11.equal);

  const MixedBlockReport r22 = mixed_block_factorization(ctx, 2, 2, 4);
  CHECK(r22.iso_certified);
  CHECK(r22.equal);
}

TEST_CASE("class coefficients up to bidegree (2,1) are independent") {
  GqContext ctx = make_ctx();
  const IndependenceReport rep = ctx.check_independence(2, 1, 4);
  CHECK(rep.n_words == 1555);
  CHECK(!rep.classes.empty());
  CHECK(rep.full_rank);
  CHECK(rep.rank == rep.n_functionals);
  CHECK(rep.dependency.empty());
}

TEST_CASE("independence certificate holds on degenerate ranges") {
  GqContext ctx = make_ctx();
  const IndependenceReport triv = ctx.check_independence(0, 0, 2);
  CHECK(triv.full_rank);
  CHECK(triv.n_functionals == 1);
  const IndependenceReport vec = ctx.check_independence(1, 0, 3);
  CHECK(vec.full_rank);
  CHECK(vec.n_functionals == 5);
}

TEST_CASE("module maps are found exactly between realizations") {
  GqContext ctx = make_ctx();
  ctx.ensure_blocks(2);
  const RepModule& E = ctx.module_named("E");
  const RepModule& Ebar = ctx.module_named("Ebar");
  CHECK(intertwiner_basis(E, E).size() == 1);
  CHECK(intertwiner_basis(E, Ebar).empty());
  const RepModule& W11 = ctx.module_named("W(1,1)");
  CHECK(intertwiner_basis(W11, W11).size() == 1);
}

TEST_CASE("element renderings and json dumps are deterministic") {
  GqContext a = make_ctx();
  GqContext b = make_ctx();
  const auto build = [](GqContext& ctx) {
    GqElement x = ctx.multiply(ctx.mc("Ebar", 0, 0), ctx.mc("E", 0, 0));
    x = x + gq_scale(ctx.multiply(ctx.mc("E", 0, 1), ctx.mc("E", 1, 0)), qp(2));
    return ctx.dump_json(x);
  };
  const std::string ja = build(a);
  const std::string jb = build(b);
  CHECK(ja == jb);
  CHECK(ja.rfind("{\"schema\":\"gq-element-1\"", 0) == 0);
  CHECK(a.dump_json(a.unit()) ==
        "{\"schema\":\"gq-element-1\",\"terms\":[{\"module\":\"W(0,0)\","
        "\"row\":0,\"col\":0,\"coeff\":\"(1)/(1)\"}]}");
}

TEST_CASE("element arithmetic keeps normal forms") {
  GqContext ctx = make_ctx();
  const GqElement f = ctx.mc("E", 0, 1);
  CHECK((f - f).is_zero());
  CHECK(gq_scale(f, qp(0) - qp(0)).is_zero());
  CHECK((f + f) == gq_scale(f, RationalScalar(2)));
  CHECK(element_str(f - f) == "0");
  CHECK(!element_str(f).empty());
}
