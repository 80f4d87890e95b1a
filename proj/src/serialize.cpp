#include "awb/serialize.hpp"

#include "awb/errors.hpp"

namespace awb {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string text(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  } catch (const PreconditionError& e) {
    if (dynamic_cast<const ParseError*>(&e)) throw;
    throw ParseError(std::string("invalid artifact: ") + e.what());
  }
}

}  // namespace

Json to_json(const Rational& x) { return x.str(); }

Json to_json(const FinSet& F) {
  Json a = Json::array();
  for (Index n : F) a.push_back(n);
  return a;
}

Json to_json(const SuppVec& x) { return x.str(); }

Json to_json(const SpaceModel& m) {
  Json j{{"alpha", m.alpha().str()}};
  if (m.kind() == SpaceModel::Kind::Schreier) {
    j["kind"] = "schreier";
  } else {
    j["kind"] = "tsirelson";
    j["theta"] = m.theta().str();
  }
  return j;
}

Json to_json(const KPoint& t) {
  if (t.is_set()) return Json{{"set", to_json(t.set())}};
  return Json{{"tree", t.tree().encoding()}};
}

Json to_json(const Verdict& v) {
  Json j{{"result", v.label()}, {"pass", v.pass()}};
  if (!v.pass()) {
    j["witness"] = to_json(v.witness);
    j["detail"] = v.detail;
  }
  return j;
}

Json to_json(const AlphaEpsCert& c, std::optional<bool> verified) {
  Json j{{"type", "alpha_eps"},
         {"model", to_json(c.model)},
         {"alpha", c.alpha.str()},
         {"eps", c.eps.str()},
         {"u", to_json(c.u)},
         {"t0", to_json(c.t0)},
         {"verifier_version", kVerifierVersion}};
  if (verified) j["verified"] = *verified;
  return j;
}

Json to_json(const ChainCert& c) {
  Json blocks = Json::array(), subs = Json::array();
  for (const auto& b : c.blocks) blocks.push_back(to_json(b));
  for (const auto& s : c.sub_certs) subs.push_back(to_json(s));
  return Json{{"type", "chain"},
              {"model", to_json(c.model)},
              {"alpha", c.alpha.str()},
              {"eps_seq", c.eps.str()},
              {"blocks", blocks},
              {"d", c.d()},
              {"sub_certs", subs},
              {"verifier_version", kVerifierVersion}};
}

Json to_json(const ChainSearch& cs) {
  Json j = to_json(cs.cert);
  Json pts = Json::array();
  for (const auto& p : cs.points) pts.push_back(to_json(p));
  j["t0"] = to_json(cs.t0);
  j["points"] = pts;
  j["tau"] = cs.tau.str();
  j["delta"] = cs.delta.str();
  j["verdict"] = to_json(cs.verdict);
  j["dominates"] = dominates(cs);
  return j;
}

Json to_json(const TauEstimate& t) {
  return Json{{"lower", t.lower.str()},
              {"witness", to_json(t.witness)},
              {"evaluations", t.evaluations},
              {"partial", t.partial}};
}

Json to_json(const Measure& mu) {
  Json w = Json::array();
  for (const auto& a : mu.atoms()) w.push_back(Json{{"point", to_json(a.point)}, {"mass", a.mass.str()}});
  return Json{{"weights", w}};
}

Json to_json(const MeasureFamily& fam) {
  Json ms = Json::array();
  for (const auto& m : fam.members) ms.push_back(to_json(m));
  return Json{{"type", "measure_family"}, {"model", to_json(fam.model)}, {"measures", ms}};
}

Json to_json(const MPTranscript& tr) {
  Json rows = Json::array();
  for (const auto& r : tr.rows) {
    Json jr{{"i", r.i},
            {"n", r.n},
            {"pred", r.pred},
            {"a", r.a.str()},
            {"eps_pred", r.eps_pred.str()},
            {"delta", r.delta.str()},
            {"level_mass", r.level_mass.str()},
            {"in_I0", r.in_I0},
            {"in_I", r.in_I}};
    jr["phi_mass"] = r.phi_mass ? Json(r.phi_mass->str()) : Json(nullptr);
    rows.push_back(jr);
  }
  Json steps = Json::array();
  for (const auto& s : tr.steps) {
    Json vals = Json::array();
    for (const auto& v : s.values) vals.push_back(v.str());
    steps.push_back(Json{{"name", s.name}, {"values", vals}, {"holds", s.holds}, {"note", s.note}});
  }
  return Json{{"type", "mp_transcript"},
              {"rho", tr.rho.str()},
              {"eps", tr.eps.str()},
              {"D", tr.D.str()},
              {"alpha", tr.alpha.str()},
              {"window", to_json(tr.window)},
              {"eps_seq", tr.eps_seq},
              {"block", to_json(tr.block, tr.block_verified)},
              {"mu_index", tr.mu_index},
              {"mu", to_json(tr.mu)},
              {"rows", rows},
              {"I", to_json(tr.I)},
              {"G", to_json(tr.G)},
              {"G_in_S_alpha", tr.G_member},
              {"steps", steps},
              {"failed_step", tr.failed_step},
              {"ok", tr.ok()},
              {"soundness", "the norming hypothesis is only checked on finite grids; a transcript certifies the "
                            "arithmetic of this run, not the hypothesis"}};
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw ParseError("rational must be a \"p/q\" string");
  return Rational::parse(j.get<std::string>());
}

FinSet finset_from_json(const Json& j) {
  return guarded([&] {
    if (j.is_string()) return FinSet::parse(j.get<std::string>());
    if (!j.is_array()) throw ParseError("set must be an array of indices");
    std::vector<Index> v;
    for (const auto& x : j) {
      if (!x.is_number_unsigned()) throw ParseError("set elements must be positive integers");
      v.push_back(x.get<Index>());
    }
    FinSet F = FinSet::from(v);
    if (F.size() != v.size()) throw ParseError("set has repeated elements");
    return F;
  });
}

SuppVec vec_from_json(const Json& j) {
  if (!j.is_string()) throw ParseError("vector must be a \"n:c,...\" string");
  return SuppVec::parse(j.get<std::string>());
}

SpaceModel model_from_json(const Json& j) {
  return guarded([&] {
    std::string kind = text(j, "kind");
    Ordinal alpha = Ordinal::parse(text(j, "alpha"));
    if (kind == "schreier") return SpaceModel::schreier(alpha);
    if (kind == "tsirelson") return SpaceModel::tsirelson(rational_from_json(field(j, "theta")), alpha);
    throw ParseError("unknown model kind '" + kind + "'");
  });
}

KPoint point_from_json(const SpaceModel& m, const Json& j) {
  return guarded([&] {
    if (j.is_object() && j.contains("set")) return KPoint::from_set(m, finset_from_json(j.at("set")));
    if (j.is_object() && j.contains("tree")) return KPoint::from_tree(m, KTree::parse(text(j, "tree")));
    throw ParseError("point needs a 'set' or a 'tree'");
  });
}

AlphaEpsCert cert_from_json(const Json& j) {
  return guarded([&] {
    if (j.contains("type") && j.at("type") != "alpha_eps") throw ParseError("not an alpha_eps certificate");
    SpaceModel m = model_from_json(field(j, "model"));
    return AlphaEpsCert{m, vec_from_json(field(j, "u")), Ordinal::parse(text(j, "alpha")),
                        RootParam::parse(text(j, "eps")), point_from_json(m, field(j, "t0"))};
  });
}

ChainCert chain_from_json(const Json& j) {
  return guarded([&] {
    if (j.contains("type") && j.at("type") != "chain") throw ParseError("not a chain certificate");
    SpaceModel m = model_from_json(field(j, "model"));
    BlockSeq blocks;
    for (const auto& b : field(j, "blocks")) blocks.push_back(vec_from_json(b));
    std::vector<AlphaEpsCert> subs;
    for (const auto& s : field(j, "sub_certs")) subs.push_back(cert_from_json(s));
    return ChainCert{m, Ordinal::parse(text(j, "alpha")), EpsSeq::parse(text(j, "eps_seq")), blocks, subs};
  });
}

ChainSearch chain_search_from_json(const Json& j) {
  return guarded([&] {
    ChainCert c = chain_from_json(j);
    std::vector<KPoint> pts;
    for (const auto& p : field(j, "points")) pts.push_back(point_from_json(c.model, p));
    KPoint t0 = point_from_json(c.model, field(j, "t0"));
    Rational tau = rational_from_json(field(j, "tau")), delta = rational_from_json(field(j, "delta"));
    ChainSearch cs{c, t0, pts, tau, delta, {}};
    return cs;
  });
}

Measure measure_from_json(const SpaceModel& m, const Json& j) {
  return guarded([&] {
    std::vector<Measure::Atom> atoms;
    for (const auto& w : field(j, "weights"))
      atoms.push_back({point_from_json(m, field(w, "point")), rational_from_json(field(w, "mass"))});
    return Measure::make(m, std::move(atoms));
  });
}

MeasureFamily family_from_json(const Json& j) {
  return guarded([&] {
    SpaceModel m = model_from_json(field(j, "model"));
    std::vector<Measure> ms;
    for (const auto& mj : field(j, "measures")) ms.push_back(measure_from_json(m, mj));
    return MeasureFamily::make(std::move(ms));
  });
}

Json parse_json(const std::string& s) {
  try {
    return Json::parse(s);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("not valid JSON: ") + e.what());
  }
}

}  // namespace awb
