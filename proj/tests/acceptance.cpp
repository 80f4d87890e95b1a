// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "awb/blockcert.hpp"
#include "awb/cli.hpp"
#include "awb/errors.hpp"
#include "awb/goodness.hpp"
#include "awb/normmodel.hpp"
#include "awb/schreier.hpp"
#include "awb/serialize.hpp"
#include "oracles.hpp"

using namespace awb;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fixture(const std::string& name) { return std::string(AWB_FIXTURES) + "/" + name; }

Json load(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

std::vector<Ordinal> alphas() {
  std::vector<Ordinal> out;
  for (const char* s : {"0", "1", "2", "3", "w", "w+1", "w*2", "w^2"}) out.push_back(Ordinal::parse(s));
  return out;
}

std::string str(std::size_t n) { return std::to_string(n); }

Result c1_oracle() {
  auto sets = oracle::power_set(1, 14);
  std::size_t bad = 0, checked = 0;
  for (const auto& a : alphas())
    for (const auto& F : sets) {
      ++checked;
      if (member(F, a) != oracle::member(F.elems(), a)) ++bad;
    }
  return {bad == 0, str(checked) + " (alpha, F) pairs, " + str(bad) + " disagreements"};
}

Result c2_hereditary_spreading() {
  auto sets = oracle::power_set(1, 12);
  std::size_t bad = 0, members = 0;
  for (const auto& a : alphas())
    for (const auto& F : sets) {
      if (!member(F, a)) continue;
      ++members;
      for (Index x : F)
        if (!member(F.minus(FinSet{x}), a)) ++bad;
      for (std::size_t i = 0; i < F.size(); ++i) {
        Index next = F[i] + 1;
        if (next > 12 || F.contains(next)) continue;
        std::vector<Index> g = F.elems();
        g[i] = next;
        if (!member(FinSet::from(g), a)) ++bad;
      }
    }
  return {bad == 0, str(members) + " members checked, " + str(bad) + " violations"};
}

Result c3_tsirelson() {
  auto T = SpaceModel::tsirelson();
  std::size_t bad = 0;
  for (Index n = 2; n <= 8; ++n)
    if (T.norm(SuppVec::indicator(FinSet::range(n, 2 * n - 1))) != Rational(n, 2)) ++bad;
  std::size_t vectors = 0;
  for (const auto& F : oracle::power_set(1, 8)) {
    SuppVec x = SuppVec::indicator(F);
    ++vectors;
    if (T.norm(x) != oracle::tsirelson_norm(x, Rational(1, 2), Ordinal::parse("1"))) ++bad;
  }
  return {bad == 0, "closed form n=2..8 and " + str(vectors) + " 0/1 vectors, " + str(bad) + " mismatches"};
}

Result c4_a1_floor() {
  auto T = SpaceModel::tsirelson();
  Budget b;
  b.max_evaluations = std::size_t{1} << 22;  // the whole search space, no sampling
  auto r = a1_search(T, 2, 10, {Rational(1, 2), Rational(1)}, b);
  if (!r.worst_ratio) return {false, "no admissible sequence"};
  bool ok = !r.partial && !r.violates_declared && *r.worst_ratio >= Rational(1, 2);
  return {ok, "worst_ratio " + r.worst_ratio->str() + " over " + str(r.vectors_evaluated) + " vectors" +
                  (r.partial ? " (partial)" : "")};
}

Result c5_find0() {
  auto S = SpaceModel::schreier(Ordinal::parse("1"));
  auto r = find_zero_eps_block(S, FinSet::range(3, 60), Rational(1, 2));
  Verdict v = verify_alpha_eps(r.cert, {}, false);
  return {v.pass() && r.verdict.pass(), "u = " + r.cert.u.str() + ", exhaustive verdict " + to_json(v).dump()};
}

Result c6_restriction() {
  std::size_t certs = 0, restrictions = 0, bad = 0;
  for (const char* f : {"average_k6.json", "find0_s1_3_60.json", "assembled_s2.json", "singleton_bad.json"}) {
    AlphaEpsCert c = cert_from_json(load(fixture(f)));
    if (c.u.size() > 12 || !verify_alpha_eps(c).pass()) continue;
    ++certs;
    for (const auto& I0 : oracle::subsets(c.u.support())) {
      if (I0.empty()) continue;
      Rational w = c.model.norm(c.u.restrict(I0));
      if (c.eps.sqrt().greater_than(w)) continue;  // |u|I0|^2 < eps
      ++restrictions;
      if (!verify_alpha_eps(restrict_cert(c, I0)).pass()) ++bad;
    }
  }
  return {certs > 0 && bad == 0,
          str(certs) + " certificates, " + str(restrictions) + " restrictions, " + str(bad) + " failures"};
}

Result c7_transcript() {
  MeasureFamily fam = family_from_json(load(fixture("family_s1_3_12.json")));
  const Ordinal alpha = Ordinal::parse("1");
  const FinSet N = FinSet::range(3, 12);
  std::string why;
  bool searched = true;
  try {
    auto tr = prop_mp_run(fam, alpha, Rational(1), EpsSeq::default_seq(), N);
    (void)tr;
  } catch (const SearchFailure& e) {
    searched = false;
    why = std::string("block search: ") + e.what() + "; ";
  }
  MPOptions opts;
  opts.diagnostic = true;
  auto tr = prop_mp_run(fam, alpha, Rational(1), EpsSeq::default_seq(), N, opts);
  bool steps = true;
  std::string failing;
  for (const auto& s : tr.steps) {
    const bool required = s.name == "eps" || s.name == "EmP2" || s.name == "EmP3" || s.name == "EmP4" ||
                          s.name == "EmP5" || s.name == "EmP6" || s.name == "EmP7";
    if (!s.holds) failing += (failing.empty() ? "" : ",") + s.name;
    if (required && !s.holds) steps = false;
  }
  bool ok = searched && tr.block_verified && steps && !tr.G_member;
  why += "eps = " + tr.eps.str() + ", D = " + tr.D.str() + ", G = " + tr.G.str() +
         (tr.G_member ? " is in S_1" : " is not in S_1") + ", failing steps: " + (failing.empty() ? "none" : failing);
  return {ok, why};
}

Result c8_tau() {
  std::size_t runs = 0, bad = 0;
  const std::vector<SpaceModel> models{SpaceModel::schreier(Ordinal::parse("1")),
                                       SpaceModel::schreier(Ordinal::parse("2")), SpaceModel::tsirelson(),
                                       SpaceModel::tsirelson(Rational(1, 3), Ordinal::parse("2"))};
  for (const auto& m : models)
    for (Index a : {1u, 3u, 5u}) {
      auto e = tau_estimate(m, FinSet::range(a, a + 17));
      ++runs;
      if (e.lower < m.a1_constant() || e.lower > Rational(1)) ++bad;
      if (!e.witness.empty()) {
        SuppVec x = SuppVec::indicator(e.witness);
        Rational exact = m.kind() == SpaceModel::Kind::Schreier ? oracle::schreier_norm(x, m.alpha())
                                                                : oracle::tsirelson_norm(x, m.theta(), m.alpha());
        if (e.witness.size() != e.witness.min() || exact < e.lower * Rational(long(e.witness.min()))) ++bad;
      }
    }
  auto s = tau_estimate(models[0], FinSet::range(3, 20));
  bool ok = bad == 0 && s.lower == Rational(1);
  return {ok, str(runs) + " runs, " + str(bad) + " bound failures; Schreier(1) on [3,20] gives " + s.lower.str()};
}

Result c9_determinism() {
  const std::vector<std::vector<std::string>> cmds{
      {"block", "verify", fixture("average_k6.json")},
      {"block", "verify", fixture("singleton_bad.json")},
      {"block", "verify", fixture("find0_s1_3_60.json")},
      {"block", "verify", fixture("assembled_s2.json")},
      {"block", "restrict", fixture("average_k6.json"), "--to", "6,7,8,9,10"},
      {"block", "find0", "--model", "schreier", "--alpha", "1", "--window", "3:60", "--eps", "1/2"},
      {"chain", "verify", fixture("chain_s1.json")},
      {"chain", "check-l4", fixture("chain_s2.json")},
      {"chain", "assemble", fixture("chain_s2.json"), "--eps", "9/10"},
      {"chain", "search", "--model", "schreier", "--alpha", "1", "--window", "2:40", "--len", "2", "--delta",
       "1/100", "--level", "1"},
      {"msep", "family", "--model", "schreier", "--alpha", "1", "--window", "3:12"},
      {"msep", "check-norming", fixture("family_s1_3_12.json"), "--window", "3:9"},
      {"msep", "run", "--family", fixture("family_s1_3_12.json"), "--alpha", "1", "--window", "3:12", "--diagnostic"},
  };
  std::size_t bad = 0;
  for (const auto& c : cmds) {
    std::ostringstream o1, e1, o2, e2;
    int r1 = cli::dispatch(c, o1, e1), r2 = cli::dispatch(c, o2, e2);
    if (r1 != r2 || o1.str() != o2.str() || e1.str() != e2.str() || o1.str().empty()) ++bad;
  }
  // Regenerated artifacts match the stored ones apart from the recorded arguments.
  struct Regen {
    const char* file;
    std::vector<std::string> args;
  };
  const std::vector<Regen> regen{
      {"find0_s1_3_60.json", {"block", "find0", "--model", "schreier", "--alpha", "1", "--window", "3:60", "--eps", "1/2"}},
      {"chain_s1.json", {"chain", "search", "--model", "schreier", "--alpha", "1", "--window", "2:40", "--len", "2",
                         "--delta", "1/100", "--level", "1"}},
      {"chain_s2.json", {"chain", "search", "--model", "schreier", "--alpha", "2", "--window", "2:40", "--len", "2",
                         "--delta", "1/100", "--level", "1"}},
      {"family_s1_3_12.json", {"msep", "family", "--model", "schreier", "--alpha", "1", "--window", "3:12"}},
  };
  for (const auto& r : regen) {
    std::ostringstream o, e;
    cli::dispatch(r.args, o, e);
    Json now = parse_json(o.str()), stored = load(fixture(r.file));
    now.erase("config");
    stored.erase("config");
    if (now != stored) ++bad;
  }
  return {bad == 0, str(cmds.size()) + " commands run twice, " + str(regen.size()) + " fixtures regenerated, " +
                        str(bad) + " differences"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no limit
    std::function<Result()> run;
  };
  const std::vector<Criterion> all{
      {1, "Schreier oracle equivalence on [1,14]", 60, c1_oracle},
      {2, "hereditary and spreading on [1,12]", 0, c2_hereditary_spreading},
      {3, "Tsirelson closed form and exhaustive recursion", 120, c3_tsirelson},
      {4, "asymptotic-l1 floor for Tsirelson on [2,10]", 0, c4_a1_floor},
      {5, "zero-level block on Schreier(1), [3,60], eps = 1/2", 120, c5_find0},
      {6, "restriction of stored certificates", 0, c6_restriction},
      {7, "measure-separation transcript on the Schreier(1) fixture", 120, c7_transcript},
      {8, "tau bounds", 0, c8_tau},
      {9, "CLI determinism over fixtures", 0, c9_determinism},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && s > c.limit_s) {
      r.pass = false;
      r.detail += "; over the time limit";
    }
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2fs", s);
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " [" << secs << "] " << r.detail
              << std::endl;
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
