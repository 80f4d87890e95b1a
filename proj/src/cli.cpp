#include "awb/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "awb/blockcert.hpp"
#include "awb/errors.hpp"
#include "awb/goodness.hpp"
#include "awb/schreier.hpp"
#include "awb/serialize.hpp"

namespace awb::cli {

namespace {

struct Opts {
  // model
  std::string model = "schreier", alpha = "1", theta = "1/2";
  // inputs
  std::string window, set, vec, eps, eps_seq, file, grid = "1/2,1", mode = "sharpened";
  std::string xi, eta, level = "1", delta = "1/8", rho = "1", family, cert, seq, to, a, b;
  std::size_t width = 4, max_n = 64, n = 1, len = 2, measure = 0;
  int depth = 2;
  bool maximal = false, no_prune = false, diagnostic = false;
  // global
  std::string budget, out;
  std::uint64_t seed = 0;
};

struct Outcome {
  Json body;
  int code = kOk;
};

std::pair<Index, Index> parse_window(const std::string& w) {
  auto c = w.find(':');
  if (c == std::string::npos) throw ParseError("window '" + w + "' must look like a:b");
  try {
    std::size_t used = 0;
    unsigned long a = std::stoul(w.substr(0, c), &used);
    if (used != c) throw ParseError("bad window '" + w + "'");
    std::string rest = w.substr(c + 1);
    unsigned long b = std::stoul(rest, &used);
    if (used != rest.size()) throw ParseError("bad window '" + w + "'");
    if (a == 0 || a > b || b > 100000) throw PreconditionError("window '" + w + "' must satisfy 1 <= a <= b");
    return {static_cast<Index>(a), static_cast<Index>(b)};
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const PreconditionError*>(&e)) throw;
    throw ParseError("bad window '" + w + "'");
  }
}

FinSet window_set(const std::string& w) {
  auto [a, b] = parse_window(w);
  return FinSet::range(a, b);
}

std::vector<Rational> parse_grid(const std::string& g) {
  std::vector<Rational> out;
  std::stringstream ss(g);
  for (std::string tok; std::getline(ss, tok, ',');) out.push_back(Rational::parse(tok));
  if (out.empty()) throw ParseError("empty coefficient grid");
  return out;
}

Budget parse_budget(const std::string& text, std::uint64_t seed) {
  Budget b;
  b.seed = seed;
  std::stringstream ss(text);
  for (std::string kv; std::getline(ss, kv, ',');) {
    if (kv.empty()) continue;
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("budget entry '" + kv + "' must be key=value");
    std::string key = kv.substr(0, eq);
    unsigned long long v;
    try {
      std::size_t used = 0;
      v = std::stoull(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ParseError("budget entry '" + kv + "' needs a non-negative integer");
    }
    if (key == "max_window") b.max_window = v;
    else if (key == "max_results") b.max_results = v;
    else if (key == "max_support") b.max_support = v;
    else if (key == "max_evaluations") b.max_evaluations = v;
    else if (key == "threads") b.threads = static_cast<unsigned>(std::max(1ULL, v));
    else throw ParseError("unknown budget key '" + key + "'");
  }
  return b;
}

SpaceModel make_model(const Opts& o) {
  Ordinal a = Ordinal::parse(o.alpha);
  if (o.model == "schreier") return SpaceModel::schreier(a);
  if (o.model == "tsirelson") return SpaceModel::tsirelson(Rational::parse(o.theta), a);
  throw ParseError("unknown model '" + o.model + "' (schreier or tsirelson)");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_atomic(const std::string& path, const std::string& data) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ResourceError("cannot write '" + tmp + "'");
    f << data;
    f.flush();
    if (!f) throw ResourceError("write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ResourceError("cannot move '" + tmp + "' to '" + path + "'");
  }
}

Json verdict_body(const Verdict& v) { return Json{{"verdict", to_json(v)}}; }

// ---------------------------------------------------------------------------
// Handlers

using Handler = std::function<Outcome(const Opts&, const Budget&)>;

Outcome ordinal_classify(const Opts& o, const Budget&) {
  Ordinal a = Ordinal::parse(o.alpha);
  const char* k = a.kind() == Ordinal::Kind::Zero ? "zero" : a.kind() == Ordinal::Kind::Successor ? "successor" : "limit";
  return {Json{{"alpha", a.str()}, {"kind", k}, {"depth", a.depth()}}};
}

Outcome ordinal_assoc(const Opts& o, const Budget&) {
  Ordinal a = Ordinal::parse(o.alpha);
  Json j{{"alpha", a.str()}, {"n", o.n}, {"assoc", a.assoc(o.n).str()}, {"assoc_base", a.assoc_base(o.n).str()}};
  if (a.kind() == Ordinal::Kind::Limit) j["fundamental"] = a.fundamental(o.n).str();
  return {j};
}

Outcome ordinal_compare(const Opts& o, const Budget&) {
  Ordinal x = Ordinal::parse(o.a), y = Ordinal::parse(o.b);
  auto c = x <=> y;
  const char* r = c < 0 ? "<" : (c > 0 ? ">" : "=");
  return {Json{{"a", x.str()}, {"b", y.str()}, {"order", r}}};
}

Outcome schreier_member(const Opts& o, const Budget&) {
  Ordinal a = Ordinal::parse(o.alpha);
  FinSet F = FinSet::parse(o.set);
  return {Json{{"alpha", a.str()}, {"set", to_json(F)}, {"member", member(F, a)}}};
}

Outcome schreier_enum(const Opts& o, const Budget& b) {
  Ordinal a = Ordinal::parse(o.alpha);
  auto [lo, hi] = parse_window(o.window);
  auto sets = enumerate(a, lo, hi, o.maximal ? EnumMode::MaximalInWindow : EnumMode::All, b);
  Json arr = Json::array();
  for (const auto& F : sets) arr.push_back(to_json(F));
  return {Json{{"alpha", a.str()}, {"window", {lo, hi}}, {"maximal_only", o.maximal}, {"count", sets.size()}, {"sets", arr}}};
}

Outcome schreier_threshold(const Opts& o, const Budget& b) {
  Ordinal x = Ordinal::parse(o.xi), y = Ordinal::parse(o.eta);
  auto r = threshold(x, y, static_cast<Index>(o.width), static_cast<Index>(o.max_n), b);
  return {Json{{"xi", x.str()}, {"eta", y.str()}, {"n", r.n}, {"verified_up_to", r.verified_up_to}}};
}

Outcome schreier_restrict(const Opts& o, const Budget& b) {
  Ordinal a = Ordinal::parse(o.alpha);
  auto w = parse_window(o.window);
  FinSet M = FinSet::parse(o.to);
  auto fam = restrict_family(SchreierFamily{a, w}, M, b);
  Json arr = Json::array();
  for (const auto& F : fam.sets()) arr.push_back(to_json(F));
  return {Json{{"alpha", a.str()}, {"to", to_json(M)}, {"count", fam.sets().size()}, {"sets", arr}}};
}

Outcome norm_eval(const Opts& o, const Budget&) {
  SpaceModel m = make_model(o);
  SuppVec x = SuppVec::parse(o.vec);
  return {Json{{"model", to_json(m)}, {"vec", to_json(x)}, {"norm", m.norm(x).str()},
               {"norming_point", x.empty() ? Json(nullptr) : to_json(m.norming_point(x))}}};
}

Outcome norm_a1(const Opts& o, const Budget& b) {
  SpaceModel m = make_model(o);
  auto [lo, hi] = parse_window(o.window);
  auto r = a1_search(m, lo, hi, parse_grid(o.grid), b);
  Json wit = Json::array();
  for (const auto& u : r.witness) wit.push_back(to_json(u));
  Json j{{"model", to_json(m)},
         {"declared_constant", m.a1_constant().str()},
         {"worst_ratio", r.worst_ratio ? Json(r.worst_ratio->str()) : Json(nullptr)},
         {"witness", wit},
         {"vectors_evaluated", r.vectors_evaluated},
         {"partial", r.partial},
         {"violates_declared", r.violates_declared}};
  return {j, r.violates_declared ? kMathFail : kOk};
}

Outcome norm_kpoints(const Opts& o, const Budget& b) {
  SpaceModel m = make_model(o);
  auto [lo, hi] = parse_window(o.window);
  auto pts = kpoints(m, lo, hi, o.depth, b);
  Json arr = Json::array();
  for (const auto& t : pts) arr.push_back(t.encoding());
  return {Json{{"model", to_json(m)}, {"count", pts.size()}, {"points", arr}}};
}

Outcome block_find0(const Opts& o, const Budget& b) {
  SpaceModel m = make_model(o);
  Rational eps = Rational::parse(o.eps);
  Find0Mode mode;
  if (o.mode == "sharpened") mode = Find0Mode::Sharpened;
  else if (o.mode == "strict") mode = Find0Mode::Strict;
  else throw ParseError("mode must be sharpened or strict");
  auto r = find_zero_eps_block(m, window_set(o.window), eps, mode, b);
  Json j = to_json(r.cert, r.verdict.pass());
  j["construction"] = Json{{"mode", o.mode},   {"tau", to_json(r.tau)}, {"delta", r.delta.str()},
                           {"eps0", r.eps0.str()}, {"D", r.D.str()},      {"m", r.m},
                           {"m0", r.m0},         {"count", r.count}};
  return {j};
}

Outcome block_verify(const Opts& o, const Budget& b) {
  AlphaEpsCert c = cert_from_json(read_json_file(o.file));
  Verdict v = verify_alpha_eps(c, b, !o.no_prune);
  Json j = verdict_body(v);
  j["certificate"] = to_json(c, v.pass());
  return {j, v.pass() ? kOk : kMathFail};
}

Outcome block_restrict(const Opts& o, const Budget& b) {
  AlphaEpsCert c = cert_from_json(read_json_file(o.file));
  AlphaEpsCert r = restrict_cert(c, FinSet::parse(o.to));
  Verdict v = verify_alpha_eps(r, b);
  Json j = to_json(r, v.pass());
  j["verdict"] = to_json(v);
  return {j, v.pass() ? kOk : kMathFail};
}

Outcome block_tau(const Opts& o, const Budget& b) {
  SpaceModel m = make_model(o);
  auto t = tau_estimate(m, window_set(o.window), b);
  Json j = to_json(t);
  j["model"] = to_json(m);
  j["declared_constant"] = m.a1_constant().str();
  return {j};
}

Outcome chain_search(const Opts& o, const Budget& b) {
  SpaceModel m = make_model(o);
  EpsSeq eps = EpsSeq::parse(o.eps_seq.empty() ? "desk" : o.eps_seq);
  auto cs = dominated_chain_search(m, window_set(o.window), Rational::parse(o.delta), o.len,
                                   Ordinal::parse(o.level), eps, b);
  return {to_json(cs), cs.verdict.pass() ? kOk : kMathFail};
}

Outcome chain_verify(const Opts& o, const Budget& b) {
  ChainCert c = chain_from_json(read_json_file(o.file));
  Verdict v = verify_chain(c, b);
  return {verdict_body(v), v.pass() ? kOk : kMathFail};
}

Outcome chain_check_l3(const Opts& o, const Budget& b) {
  ChainSearch cs = chain_search_from_json(read_json_file(o.file));
  FinSet J = FinSet::parse(o.set);
  auto r = chain_inequality_check(cs.cert, cs.points, cs.tau, cs.delta, J, b);
  return {Json{{"J", to_json(J)}, {"lhs", r.lhs.str()}, {"rhs", r.rhs.str()}, {"holds", r.holds}},
          r.holds ? kOk : kMathFail};
}

Outcome chain_check_l4(const Opts& o, const Budget& b) {
  ChainSearch cs = chain_search_from_json(read_json_file(o.file));
  Verdict v = verify_chain(cs.cert, b);
  bool dom = dominates(cs);
  return {Json{{"chain_verdict", to_json(v)}, {"dominates", dom}}, v.pass() && dom ? kOk : kMathFail};
}

Outcome chain_assemble(const Opts& o, const Budget& b) {
  ChainSearch cs = chain_search_from_json(read_json_file(o.file));
  auto a = assemble_block(cs, Rational::parse(o.eps), b);
  Json j = to_json(a.cert, a.verdict.pass());
  j["eps0"] = a.eps0.str();
  j["verdict"] = to_json(a.verdict);
  return {j, a.verdict.pass() ? kOk : kMathFail};
}

Outcome msep_run(const Opts& o, const Budget& b) {
  MeasureFamily fam = family_from_json(read_json_file(o.family));
  if (!o.model.empty() && o.model != (fam.model.kind() == SpaceModel::Kind::Schreier ? "schreier" : "tsirelson"))
    throw PreconditionError("--model does not match the family's model " + fam.model.key());
  MPOptions opts;
  opts.budget = b;
  opts.diagnostic = o.diagnostic;
  if (!o.cert.empty()) opts.block = cert_from_json(read_json_file(o.cert));
  EpsSeq eps = EpsSeq::parse(o.eps_seq.empty() ? "default" : o.eps_seq);
  auto tr = prop_mp_run(fam, Ordinal::parse(o.alpha), Rational::parse(o.rho), eps, window_set(o.window), opts);
  return {to_json(tr), tr.ok() ? kOk : kMathFail};
}

Outcome msep_check_norming(const Opts& o, const Budget& b) {
  MeasureFamily fam = family_from_json(read_json_file(o.file));
  auto [lo, hi] = parse_window(o.window);
  auto r = rho_norms_check(fam, lo, hi, parse_grid(o.grid), Rational::parse(o.rho), b);
  Json j{{"pass", r.pass},         {"worst", r.worst.str()}, {"witness", to_json(r.witness)},
         {"vectors", r.vectors},   {"partial", r.partial},   {"rho", Rational::parse(o.rho).str()},
         {"soundness", "grid only"}};
  return {j, r.pass ? kOk : kMathFail};
}

Outcome msep_good(const Opts& o, const Budget&) {
  MeasureFamily fam = family_from_json(read_json_file(o.family));
  if (o.measure >= fam.members.size()) throw PreconditionError("--measure is out of range");
  auto L = IntSeq::parse(o.seq).take(2 * o.n);
  EpsSeq eps = EpsSeq::parse(o.eps_seq.empty() ? "default" : o.eps_seq);
  bool good = is_good(fam.members[o.measure], L, o.n, Rational::parse(o.rho), eps);
  return {Json{{"good", good}, {"measure", o.measure}, {"n", o.n}, {"prefix", L}}};
}

Outcome msep_family(const Opts& o, const Budget& b) {
  SpaceModel m = make_model(o);
  auto [lo, hi] = parse_window(o.window);
  return {to_json(MeasureFamily::maximal_point_masses(m, lo, hi, b))};
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Opts o;
  CLI::App app{"Exact computations with Schreier families, asymptotic-l1 model spaces and block certificates", "awb"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--budget", o.budget, "Resource limits, e.g. max_support=20,max_evaluations=4096,threads=2");
  app.add_option("--seed", o.seed, "Seed for randomized search order (0 = deterministic order)");
  app.add_option("--out", o.out, "Write the artifact here (atomically) instead of stdout");

  std::vector<std::pair<CLI::App*, Handler>> leaves;
  auto group = [&](const char* name, const char* help) {
    auto* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };
  auto leaf = [&](CLI::App* g, const char* name, const char* help, Handler h) {
    auto* s = g->add_subcommand(name, help);
    leaves.emplace_back(s, std::move(h));
    return s;
  };
  auto model_opts = [&](CLI::App* s) {
    s->add_option("--model", o.model, "schreier or tsirelson")->capture_default_str();
    s->add_option("--alpha", o.alpha, "Model ordinal")->capture_default_str();
    s->add_option("--theta", o.theta, "Tsirelson parameter")->capture_default_str();
  };

  auto* ord = group("ordinal", "Ordinal arithmetic");
  leaf(ord, "classify", "Zero, successor or limit", ordinal_classify)->add_option("--alpha", o.alpha)->required();
  {
    auto* s = leaf(ord, "assoc", "Associated successor sequence term", ordinal_assoc);
    s->add_option("--alpha", o.alpha)->required();
    s->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
  }
  {
    auto* s = leaf(ord, "compare", "Compare two ordinals", ordinal_compare);
    s->add_option("--a", o.a)->required();
    s->add_option("--b", o.b)->required();
  }

  auto* sch = group("schreier", "Schreier families");
  {
    auto* s = leaf(sch, "member", "Membership of a finite set", schreier_member);
    s->add_option("--alpha", o.alpha)->required();
    s->add_option("--set", o.set)->required();
  }
  {
    auto* s = leaf(sch, "enum", "Enumerate the family inside a window", schreier_enum);
    s->add_option("--alpha", o.alpha)->required();
    s->add_option("--window", o.window, "a:b")->required();
    s->add_flag("--maximal", o.maximal, "Only sets maximal in the window");
  }
  {
    auto* s = leaf(sch, "threshold", "Least n with S_xi inside S_eta above n, checked on a window", schreier_threshold);
    s->add_option("--xi", o.xi)->required();
    s->add_option("--eta", o.eta)->required();
    s->add_option("--width", o.width)->capture_default_str();
    s->add_option("--max-n", o.max_n)->capture_default_str();
  }
  {
    auto* s = leaf(sch, "restrict", "Traces of the windowed family on a set", schreier_restrict);
    s->add_option("--alpha", o.alpha)->required();
    s->add_option("--window", o.window)->required();
    s->add_option("--to", o.to)->required();
  }

  auto* nrm = group("norm", "Model space norms");
  {
    auto* s = leaf(nrm, "eval", "Norm of a finitely supported vector", norm_eval);
    model_opts(s);
    s->add_option("--vec", o.vec, "e.g. 3:1,4:1/2")->required();
  }
  {
    auto* s = leaf(nrm, "a1-search", "Worst asymptotic-l1 ratio over a coefficient grid", norm_a1);
    model_opts(s);
    s->add_option("--window", o.window)->required();
    s->add_option("--grid", o.grid)->capture_default_str();
  }
  {
    auto* s = leaf(nrm, "kpoints", "Points of K supported in a window", norm_kpoints);
    model_opts(s);
    s->add_option("--window", o.window)->required();
    s->add_option("--depth", o.depth)->capture_default_str();
  }

  auto* blk = group("block", "(alpha, eps) blocks");
  {
    auto* s = leaf(blk, "find0", "Construct and verify a (0, eps) block", block_find0);
    model_opts(s);
    s->add_option("--window", o.window)->required();
    s->add_option("--eps", o.eps)->required();
    s->add_option("--mode", o.mode, "sharpened or strict")->capture_default_str();
  }
  {
    auto* s = leaf(blk, "verify", "Exhaustively verify a certificate", block_verify);
    s->add_option("file", o.file)->required();
    s->add_flag("--no-prune", o.no_prune, "Scan every subset for condition 1");
  }
  {
    auto* s = leaf(blk, "restrict", "Restrict a certificate to a subset of its support", block_restrict);
    s->add_option("file", o.file)->required();
    s->add_option("--to", o.to)->required();
  }
  {
    auto* s = leaf(blk, "tau", "Lower estimate of the modulus tau on a window", block_tau);
    model_opts(s);
    s->add_option("--window", o.window)->required();
  }

  auto* chn = group("chain", "alpha-chains");
  {
    auto* s = leaf(chn, "search", "Search a chain with a dominating point", chain_search);
    model_opts(s);
    s->add_option("--window", o.window)->default_val("2:40");
    s->add_option("--len", o.len)->capture_default_str();
    s->add_option("--delta", o.delta)->capture_default_str();
    s->add_option("--level", o.level, "Chain ordinal")->capture_default_str();
    s->add_option("--eps-seq", o.eps_seq, "default, desk or explicit (defaults to desk)");
  }
  {
    auto* s = leaf(chn, "verify", "Verify a chain certificate", chain_verify);
    s->add_option("file", o.file)->required();
  }
  {
    auto* s = leaf(chn, "check-l3", "Evaluate the chain inequality on a set J", chain_check_l3);
    s->add_option("file", o.file)->required();
    s->add_option("--set", o.set)->required();
  }
  {
    auto* s = leaf(chn, "check-l4", "Re-check domination of the chain's points", chain_check_l4);
    s->add_option("file", o.file)->required();
  }
  {
    auto* s = leaf(chn, "assemble", "Assemble a chain into a block and verify it", chain_assemble);
    s->add_option("file", o.file)->required();
    s->add_option("--eps", o.eps)->required();
  }

  auto* ms = group("msep", "Measure separation");
  {
    auto* s = leaf(ms, "run", "Full measure-separation run with transcript", msep_run);
    s->add_option("--family", o.family)->required();
    s->add_option("--model", o.model, "Optional check against the family's model");
    s->add_option("--alpha", o.alpha, "Target ordinal")->capture_default_str();
    s->add_option("--rho", o.rho)->capture_default_str();
    s->add_option("--window", o.window, "Even-length window N")->required();
    s->add_option("--eps-seq", o.eps_seq, "default, desk or explicit");
    s->add_option("--cert", o.cert, "Use this block certificate");
    s->add_flag("--diagnostic", o.diagnostic, "Continue with an unverified block if none is found");
  }
  {
    auto* s = leaf(ms, "check-norming", "rho-norming check on a coefficient grid", msep_check_norming);
    s->add_option("file", o.file)->required();
    s->add_option("--window", o.window)->required();
    s->add_option("--grid", o.grid)->default_val("1");
    s->add_option("--rho", o.rho)->capture_default_str();
  }
  {
    auto* s = leaf(ms, "good", "Goodness of one measure for a prefix", msep_good);
    s->add_option("--family", o.family)->required();
    s->add_option("--measure", o.measure)->capture_default_str();
    s->add_option("--seq", o.seq, "l_1,l_2,... (continues by +1)")->required();
    s->add_option("--n", o.n)->capture_default_str();
    s->add_option("--rho", o.rho)->capture_default_str();
    s->add_option("--eps-seq", o.eps_seq);
  }
  {
    auto* s = leaf(ms, "family", "Point masses at the maximal sets of a window", msep_family);
    model_opts(s);
    s->add_option("--window", o.window)->required();
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  std::string command;
  const Handler* handler = nullptr;
  for (const auto& [sub, h] : leaves)
    if (sub->parsed()) {
      command = sub->get_parent()->get_name() + " " + sub->get_name();
      handler = &h;
    }
  if (!handler) {
    err << "usage error: no command given\n";
    return kUsage;
  }

  try {
    Budget budget = parse_budget(o.budget, o.seed);
    Outcome res = (*handler)(o, budget);
    Json art = res.body.is_object() ? res.body : Json{{"result", res.body}};
    art["schema"] = kSchema;
    art["command"] = command;
    art["config"] = Json{{"args", args},
                         {"subcommand", command},
                         {"seed", o.seed},
                         {"out", o.out.empty() ? Json(nullptr) : Json(o.out)},
                         {"budget", Json{{"max_window", budget.max_window},
                                         {"max_results", budget.max_results},
                                         {"max_support", budget.max_support},
                                         {"max_evaluations", budget.max_evaluations},
                                         {"threads", budget.threads}}}};
    art["exit_code"] = res.code;
    std::string text = art.dump(2) + "\n";
    if (o.out.empty())
      out << text;
    else
      write_atomic(o.out, text);
    return res.code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const SearchFailure& e) {
    err << "search failed: " << e.what() << "\n";
    return kResource;
  }
}

}  // namespace awb::cli
