#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "glq/homogeneous.hpp"

using json = nlohmann::ordered_json;
using namespace glq;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int m = 1;
  int n = 1;
  std::vector<int> theta;
  int kmax = 1;
  int lmax = 1;
  int degree = 2;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;

  SuperIndex idx() const { return SuperIndex{m, n}; }
  ParabolicSpec parabolic() const {
    ParabolicSpec P{idx(), std::set<int>(theta.begin(), theta.end())};
    if (!P.valid())
      throw UsageError("theta entries must lie in 1.." +
                       std::to_string(idx().dim() - 1));
    return P;
  }
  json echo() const {
    json c;
    c["m"] = m;
    c["n"] = n;
    c["theta"] = theta;
    c["kmax"] = kmax;
    c["lmax"] = lmax;
    c["degree"] = degree;
    c["seed"] = seed;
    return c;
  }
};

std::string tsv_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void render_tsv(const json& report, std::ostream& os) {
  for (const auto& [key, value] : report.items()) {
    if (value.is_array() && !value.empty() && value[0].is_object()) {
      os << "#" << key << "\n";
      std::string header;
      for (const auto& [col, cell] : value[0].items()) {
        if (!header.empty()) header += "\t";
        header += col;
      }
      os << header << "\n";
      for (const auto& row : value) {
        std::string line;
        for (const auto& [col, cell] : row.items()) {
          if (!line.empty()) line += "\t";
          line += tsv_scalar(cell);
        }
        os << line << "\n";
      }
    } else if (value.is_object()) {
      for (const auto& [sub, cell] : value.items())
        os << key << "." << sub << "\t" << tsv_scalar(cell) << "\n";
    } else if (value.is_array()) {
      std::string line;
      for (const auto& cell : value) {
        if (!line.empty()) line += ",";
        line += tsv_scalar(cell);
      }
      os << key << "\t" << line << "\n";
    } else {
      os << key << "\t" << tsv_scalar(value) << "\n";
    }
  }
}

void emit(const RunConfig& cfg, const json& report) {
  std::ostringstream body;
  if (cfg.format == "tsv")
    render_tsv(report, body);
  else
    body << report.dump(2) << "\n";
  if (cfg.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw UsageError("cannot open output path: " + cfg.out);
    f << body.str();
  }
}

Weight parse_weight(std::string s, int d) {
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') throw UsageError("unbalanced parentheses in weight");
    s = s.substr(1, s.size() - 2);
  }
  Weight w;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(tok, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad weight entry '" + tok + "'");
    }
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos])))
      ++pos;
    if (pos != tok.size()) throw UsageError("bad weight entry '" + tok + "'");
    w.push_back(v);
  }
  if (static_cast<int>(w.size()) != d)
    throw UsageError("weight needs " + std::to_string(d) + " entries");
  return w;
}

// Tensor-word specs: factors E, Ebar, 1 joined by '*', optional exponent
// '^k', optional trailing irrep selector '[hw=(...)]'.
RepModule parse_module_spec(const SuperIndex& idx, const std::string& spec) {
  std::string word = spec;
  std::string selector;
  const size_t sel = word.find("[hw=");
  if (sel != std::string::npos) {
    if (word.back() != ']') throw UsageError("unterminated selector in '" + spec + "'");
    selector = word.substr(sel + 4, word.size() - sel - 5);
    word = word.substr(0, sel);
  }
  if (word.empty()) throw UsageError("empty module word in '" + spec + "'");

  std::vector<RepModule> factors;
  std::stringstream ss(word);
  std::string tok;
  while (std::getline(ss, tok, '*')) {
    std::string base = tok;
    long rep = 1;
    const size_t caret = tok.find('^');
    if (caret != std::string::npos) {
      base = tok.substr(0, caret);
      try {
        rep = std::stol(tok.substr(caret + 1));
      } catch (const std::exception&) {
        throw UsageError("bad exponent in '" + tok + "'");
      }
      if (rep < 0) throw UsageError("negative exponent in '" + tok + "'");
    }
    RepModule M;
    if (base == "E") M = build_vector_rep(idx);
    else if (base == "Ebar") M = build_dual_rep(build_vector_rep(idx));
    else if (base == "1") continue;
    else
      throw UsageError("unknown factor '" + base +
                       "' (expected E, Ebar or 1) in '" + spec + "'");
    for (long i = 0; i < rep; ++i) factors.push_back(M);
  }
  RepModule out;
  if (factors.empty()) {
    out = build_trivial_rep(idx);
  } else {
    out = factors[0];
    for (size_t i = 1; i < factors.size(); ++i)
      out = tensor_module(out, factors[i]);
  }
  if (selector.empty()) return out;

  const Weight hw = parse_weight(selector, idx.dim());
  const Decomposition dec = decompose(out);
  for (const Summand& s : dec.summands)
    if (s.highest_weight == hw) return s.module;
  throw UsageError("no summand of '" + word + "' has highest weight " +
                   weight_str(hw));
}

json weight_json(const Weight& w) { return weight_str(w); }

int cmd_repcheck(const RunConfig& cfg) {
  const SuperIndex idx = cfg.idx();
  const RepModule E = build_vector_rep(idx);
  const RepModule Eb = build_dual_rep(E);
  const std::vector<std::pair<std::string, RepModule>> mods = {
      {"1", build_trivial_rep(idx)},
      {"E", E},
      {"Ebar", Eb},
      {"E*E", tensor_module(E, E)},
      {"E*Ebar", tensor_module(E, Eb)},
      {"Ebar*E", tensor_module(Eb, E)},
      {"E*E*E", tensor_module(tensor_module(E, E), E)},
  };
  json report;
  report["schema"] = "glq-repcheck-1";
  report["config"] = cfg.echo();
  json rows = json::array();
  bool ok = true;
  for (const auto& [name, M] : mods) {
    const auto failures = check_module(M);
    ok = ok && failures.empty();
    json row;
    row["module"] = name;
    row["dim"] = M.dim();
    row["failures"] = failures;
    rows.push_back(row);
  }
  report["modules"] = rows;

  const int target = (idx.dim()) * (idx.dim());
  json dec = json::array();
  for (const std::string side : {"E*E", "Ebar*Ebar"}) {
    const RepModule M = side == "E*E" ? tensor_module(E, E) : tensor_module(Eb, Eb);
    const Decomposition d = decompose(M);
    int sum = d.residue_dim;
    for (const Summand& s : d.summands) sum += s.module.dim();
    json row;
    row["module"] = side;
    row["summands"] = d.summands.size();
    row["residue_dim"] = d.residue_dim;
    row["dims_total"] = sum;
    row["expected"] = target;
    dec.push_back(row);
    ok = ok && d.residue_dim == 0 && sum == target;
  }
  report["decompositions"] = dec;
  report["pass"] = ok;
  emit(cfg, report);
  return ok ? 0 : 1;
}

int cmd_decompose(const RunConfig& cfg, const std::string& word) {
  if (word.find('[') != std::string::npos)
    throw UsageError("decompose takes a plain tensor word, no selector");
  const RepModule M = parse_module_spec(cfg.idx(), word);
  const Decomposition dec = decompose(M);
  json report;
  report["schema"] = "glq-decompose-1";
  report["config"] = cfg.echo();
  report["word"] = word;
  report["dim"] = M.dim();
  json rows = json::array();
  int sum = dec.residue_dim;
  for (const Summand& s : dec.summands) {
    json row;
    row["highest_weight"] = weight_json(s.highest_weight);
    row["dim"] = s.module.dim();
    rows.push_back(row);
    sum += s.module.dim();
  }
  report["summands"] = rows;
  report["residue_dim"] = dec.residue_dim;
  report["dims_total"] = sum;
  emit(cfg, report);
  return 0;
}

int cmd_rmatrix(const RunConfig& cfg) {
  const SuperIndex idx = cfg.idx();
  json report;
  report["schema"] = "glq-rmatrix-1";
  report["config"] = cfg.echo();

  const RepModule E = build_vector_rep(idx);
  const RepModule Eb = build_dual_rep(E);
  const GradedOperator Rmix = build_R_pibar_pi(idx);
  const auto mixed_failures = check_intertwiner(
      Rmix, tensor_module(Eb, E), opposite_tensor_module(Eb, E));

  const Braiding b = derive_braiding(idx);
  const auto ee_failures = check_intertwiner(
      b.R, tensor_module(E, E), opposite_tensor_module(E, E));
  const bool ybe = check_yang_baxter(b.R, E.space);

  report["mixed_intertwiner_failures"] = mixed_failures;
  report["ee_intertwiner_failures"] = ee_failures;
  report["yang_baxter"] = ybe;
  json mp;
  mp["alpha"] = b.alpha.str();
  mp["beta"] = b.beta.str();
  report["minimal_polynomial"] = mp;
  const bool ok = mixed_failures.empty() && ee_failures.empty() && ybe;
  report["pass"] = ok;
  emit(cfg, report);
  return ok ? 0 : 1;
}

int cmd_aq(const RunConfig& cfg) {
  GqContext ctx(cfg.idx());
  const ParabolicSpec P = cfg.parabolic();
  const auto blocks = invariants_Aq(ctx, P, cfg.kmax, cfg.lmax);
  const ClosureReport closure =
      check_aq_closure(ctx, P, cfg.kmax, cfg.lmax, cfg.seed, 20);
  json report;
  report["schema"] = "glq-aq-1";
  report["config"] = cfg.echo();
  json rows = json::array();
  for (const AqBlock& b : blocks) {
    json row;
    row["k"] = b.k;
    row["l"] = b.l;
    row["dim"] = b.basis.size();
    rows.push_back(row);
  }
  report["blocks"] = rows;
  json cl;
  cl["checked"] = closure.checked;
  cl["failed"] = closure.failed;
  report["closure"] = cl;
  report["pass"] = closure.failed == 0;
  emit(cfg, report);
  return closure.failed == 0 ? 0 : 1;
}

int cmd_induce(const RunConfig& cfg, const std::string& vspec) {
  GqContext ctx(cfg.idx());
  const ParabolicSpec P = cfg.parabolic();
  const RepModule V =
      restrict_module(parse_module_spec(cfg.idx(), vspec), P, Side::levi);
  json report;
  report["schema"] = "glq-induce-1";
  report["config"] = cfg.echo();
  report["V"] = vspec;
  report["V_dim"] = V.dim();
  json rows = json::array();
  bool ok = true;
  for (int k = 0; k <= cfg.kmax; ++k)
    for (int l = 0; l <= cfg.lmax; ++l) {
      json row;
      row["k"] = k;
      row["l"] = l;
      const auto cc = induced_dim_crosscheck(ctx, V, P, k, l);
      if (cc) {
        row["dim"] = cc->solver_dim;
        row["formula_dim"] = cc->formula_dim;
        row["formula_agrees"] = cc->equal;
        ok = ok && cc->equal;
      } else {
        row["dim"] = induced_block(ctx, V, P, k, l).dim();
        row["formula_dim"] = nullptr;
        row["formula_agrees"] = nullptr;
      }
      rows.push_back(row);
    }
  report["blocks"] = rows;
  report["pass"] = ok;
  emit(cfg, report);
  return ok ? 0 : 1;
}

int cmd_frobenius(const RunConfig& cfg, const std::string& wspec,
                  const std::string& vspec) {
  GqContext ctx(cfg.idx());
  const ParabolicSpec P = cfg.parabolic();
  const RepModule W = parse_module_spec(cfg.idx(), wspec);
  const RepModule V =
      restrict_module(parse_module_spec(cfg.idx(), vspec), P, Side::levi);
  const FrobeniusReport rep = frobenius_pair(ctx, W, V, P, cfg.degree);
  json report;
  report["schema"] = "glq-frobenius-1";
  report["config"] = cfg.echo();
  report["W"] = wspec;
  report["V"] = vspec;
  report["induced_side"] = rep.lhs;
  report["restricted_side"] = rep.rhs;
  report["degree"] = rep.degree;
  report["equal"] = rep.equal;
  // Truncation can only hide induced-side copies, so a short left side at
  // this degree is inconclusive rather than a refutation.
  std::string verdict = rep.equal ? "MATCH"
                        : rep.lhs < rep.rhs ? "INCONCLUSIVE_AT_D"
                                            : "MISMATCH";
  report["verdict"] = verdict;
  emit(cfg, report);
  return rep.equal ? 0 : rep.lhs < rep.rhs ? 3 : 1;
}

int cmd_borelweil(const RunConfig& cfg, const std::string& mu_arg) {
  if (!cfg.theta.empty())
    throw UsageError("borelweil supports the empty selection only");
  GqContext ctx(cfg.idx());
  const ParabolicSpec P = cfg.parabolic();
  const Weight mu = parse_weight(mu_arg, cfg.idx().dim());
  long wsum = 0;
  for (long x : mu) wsum += x;
  wsum = std::labs(wsum);
  // Blocks below the weight sum are empty for weight reasons, so a run with
  // wsum > degree only computes the membership prediction, and that
  // enumerates tensor splits in dimension (m+n)^wsum.
  double splits = 1;
  for (long i = 0; i < wsum; ++i) splits *= cfg.idx().dim();
  if (wsum > cfg.degree && splits > 243)
    throw UsageError(
        "weight sum " + std::to_string(wsum) + " needs blocks of degree " +
        std::to_string(wsum) +
        " and an infeasible membership enumeration; raise --degree if the "
        "deep scan is intended");
  const BorelWeilReport rep = borel_weil_report(ctx, mu, P, cfg.degree);
  json report;
  report["schema"] = "glq-borelweil-1";
  report["config"] = cfg.echo();
  report["mu"] = weight_json(mu);
  report["degree"] = rep.degree;
  json rows = json::array();
  bool mismatch = false, inconclusive = false;
  for (const BorelWeilRow& r : rep.rows) {
    json row;
    row["space"] = r.barred ? "O" : "Obar";
    row["side"] = r.sign == Side::plus ? "p+" : "p-";
    row["predicted"] = r.predicted ? weight_json(*r.predicted) : json(nullptr);
    row["predicted_dim"] = r.predicted ? json(r.predicted_dim) : json(nullptr);
    row["found_dim"] = r.found_dim;
    row["found_hw"] = r.found_hw ? weight_json(*r.found_hw) : json(nullptr);
    row["block"] = r.found_block >= 0 ? json(r.found_block) : json(nullptr);
    row["verdict"] = verdict_str(r.verdict);
    rows.push_back(row);
    mismatch = mismatch || r.verdict == Verdict::mismatch;
    inconclusive = inconclusive || r.verdict == Verdict::inconclusive;
  }
  report["rows"] = rows;
  report["pass"] = !mismatch && !inconclusive;
  emit(cfg, report);
  return mismatch ? 1 : inconclusive ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Exact tables and checks for the quantized gl(m|n) machinery"};
  app.require_subcommand(1);
  app.add_option("--m", cfg.m, "even block size")->check(CLI::Range(1, 32));
  app.add_option("--n", cfg.n, "odd block size")->check(CLI::Range(1, 32));
  app.add_option("--theta", cfg.theta, "Levi selection (simple root indices)")
      ->delimiter(',');
  app.add_option("--kmax", cfg.kmax, "max t-degree")->check(CLI::NonNegativeNumber);
  app.add_option("--lmax", cfg.lmax, "max tbar-degree")->check(CLI::NonNegativeNumber);
  app.add_option("--degree", cfg.degree, "total degree bound D")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "seed for sampled properties");
  app.add_option("--format", cfg.format, "json or tsv")
      ->check(CLI::IsMember({"json", "tsv"}));
  app.add_option("--out", cfg.out, "output path (default stdout)");

  auto* repcheck = app.add_subcommand("repcheck", "module table invariants");
  auto* decomp = app.add_subcommand("decompose", "split a tensor word");
  std::string word;
  decomp->add_option("word", word, "tensor word, e.g. E^2*Ebar")->required();
  auto* rmatrix = app.add_subcommand("rmatrix", "braiding checks");
  auto* aq = app.add_subcommand("aq", "invariant subalgebra blocks");
  auto* induce = app.add_subcommand("induce", "induced space block table");
  std::string vspec, wspec;
  induce->add_option("V", vspec, "module spec for V")->required();
  auto* frob = app.add_subcommand("frobenius", "reciprocity check");
  frob->add_option("W", wspec, "module spec for W")->required();
  frob->add_option("V", vspec, "module spec for V")->required();
  auto* bw = app.add_subcommand("borelweil", "equivariant line space report");
  std::string mu_arg;
  bw->add_option("mu", mu_arg, "weight, e.g. (1,0)")->required();
  for (auto* sub : {repcheck, decomp, rmatrix, aq, induce, frob, bw})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    calibrate_coproduct(SuperIndex{1, 1});
    if (repcheck->parsed()) return cmd_repcheck(cfg);
    if (decomp->parsed()) return cmd_decompose(cfg, word);
    if (rmatrix->parsed()) return cmd_rmatrix(cfg);
    if (aq->parsed()) return cmd_aq(cfg);
    if (induce->parsed()) return cmd_induce(cfg, vspec);
    if (frob->parsed()) return cmd_frobenius(cfg, wspec, vspec);
    if (bw->parsed()) return cmd_borelweil(cfg, mu_arg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const MathError& e) {
    std::cerr << "math failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
