#include "awb/goodness.hpp"

#include <algorithm>
#include <numeric>

#include "awb/errors.hpp"
#include "awb/schreier.hpp"

namespace awb {

// ---------------------------------------------------------------------------
// Measures

Measure Measure::make(const SpaceModel& model, std::vector<Atom> atoms) {
  Measure mu(model);
  std::map<std::string, Atom> merged;
  for (auto& a : atoms) {
    if (a.mass.sign() < 0) throw PreconditionError("negative mass " + a.mass.str());
    // Rebuild the point on this model so foreign points are rejected.
    KPoint t = a.point.is_set() ? KPoint::from_set(model, a.point.set()) : KPoint::from_tree(model, a.point.tree());
    std::string key = t.encoding();
    auto it = merged.find(key);
    if (it == merged.end())
      merged.emplace(key, Atom{std::move(t), a.mass});
    else
      it->second.mass += a.mass;
  }
  for (auto& [k, a] : merged)
    if (!a.mass.is_zero()) mu.atoms_.push_back(std::move(a));
  if (mu.total() > Rational(1)) throw PreconditionError("total mass " + mu.total().str() + " exceeds 1");
  return mu;
}

Measure Measure::point_mass(const SpaceModel& model, const KPoint& t, const Rational& mass) {
  return make(model, {Atom{t, mass}});
}

Rational Measure::total() const {
  Rational s;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

Rational Measure::integral_f(Index n) const {
  Rational s;
  for (const auto& a : atoms_) s += a.mass * a.point.eval_f(n);
  return s;
}

Rational Measure::integral(const SuppVec& x) const {
  Rational s;
  for (const auto& a : atoms_) s += a.mass * pairing(x, a.point);
  return s;
}

Rational Measure::level_mass(Index n, const Rational& c) const {
  Rational s;
  for (const auto& a : atoms_)
    if (a.point.eval_f(n) >= c) s += a.mass;
  return s;
}

bool operator==(const Measure& a, const Measure& b) {
  if (!(a.model_ == b.model_) || a.atoms_.size() != b.atoms_.size()) return false;
  for (std::size_t i = 0; i < a.atoms_.size(); ++i)
    if (!(a.atoms_[i].point == b.atoms_[i].point) || a.atoms_[i].mass != b.atoms_[i].mass) return false;
  return true;
}

MeasureFamily MeasureFamily::make(std::vector<Measure> members) {
  if (members.empty()) throw PreconditionError("measure family is empty");
  for (const auto& m : members)
    if (!(m.model() == members.front().model()))
      throw PreconditionError("measures of one family must live on the same model");
  SpaceModel model = members.front().model();
  return MeasureFamily{std::move(model), std::move(members)};
}

MeasureFamily MeasureFamily::maximal_point_masses(const SpaceModel& model, Index a, Index b, const Budget& budget) {
  if (model.kind() != SpaceModel::Kind::Schreier)
    throw PreconditionError("maximal-set point masses are defined for Schreier models");
  std::vector<Measure> ms;
  for (const auto& F : enumerate(model.alpha(), a, b, EnumMode::MaximalInWindow, budget))
    ms.push_back(Measure::point_mass(model, KPoint::from_set(model, F)));
  return make(std::move(ms));
}

// ---------------------------------------------------------------------------
// Finite combinatorics

EvenPart even_part(const FinSet& A) {
  if (A.size() % 2) throw PreconditionError("set " + A.str() + " has odd cardinality");
  EvenPart ep;
  std::vector<Index> a2;
  const auto& e = A.elems();
  for (std::size_t k = 1; k < e.size(); k += 2) {
    a2.push_back(e[k]);
    ep.pred[e[k]] = e[k - 1];
  }
  ep.a2 = FinSet::from(std::move(a2));
  return ep;
}

FinSet minus_part(const FinSet& F, const EvenPart& ep) {
  std::vector<Index> out;
  for (Index m : F) {
    auto it = ep.pred.find(m);
    if (it == ep.pred.end()) throw PreconditionError(std::to_string(m) + " is not an even-position element");
    out.push_back(it->second);
  }
  return FinSet::from(std::move(out));
}

IntSeq::IntSeq(std::vector<Index> head) : head_(std::move(head)) {
  if (head_.empty()) throw PreconditionError("sequence needs a first term");
  for (std::size_t i = 0; i < head_.size(); ++i) {
    if (head_[i] == 0) throw PreconditionError("sequence terms must be positive");
    if (i && head_[i] <= head_[i - 1]) throw PreconditionError("sequence must be strictly increasing");
  }
}

IntSeq IntSeq::parse(std::string_view text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  while (!t.empty() && (t.back() == '.' || t.back() == ',')) t.pop_back();
  if (t.empty()) throw ParseError("empty sequence");
  std::vector<Index> head;
  std::size_t pos = 0;
  try {
    while (pos <= t.size()) {
      std::size_t q = t.find(',', pos);
      std::string tok = t.substr(pos, q == std::string::npos ? std::string::npos : q - pos);
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("sequence '" + std::string(text) + "': bad term '" + tok + "'");
      head.push_back(static_cast<Index>(std::stoul(tok)));
      if (q == std::string::npos) break;
      pos = q + 1;
    }
    return IntSeq(std::move(head));
  } catch (const std::out_of_range&) {
    throw ParseError("sequence '" + std::string(text) + "': term out of range");
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("sequence '") + std::string(text) + "': " + e.what());
  }
}

Index IntSeq::at(std::size_t j) const {
  if (j == 0) throw PreconditionError("sequences are indexed from 1");
  if (j <= head_.size()) return head_[j - 1];
  return head_.back() + static_cast<Index>(j - head_.size());
}

IntSeq IntSeq::drop(std::size_t count) const {
  if (count < head_.size()) return IntSeq(std::vector<Index>(head_.begin() + static_cast<long>(count), head_.end()));
  return IntSeq({at(count + 1)});
}

std::vector<Index> IntSeq::take(std::size_t count) const {
  std::vector<Index> out;
  for (std::size_t j = 1; j <= count; ++j) out.push_back(at(j));
  return out;
}

std::string IntSeq::str() const {
  std::string s;
  for (Index x : head_) s += std::to_string(x) + ",";
  return s + "...";
}

std::vector<Index> Splice::take(std::size_t count) const {
  std::vector<Index> out(core.begin(), core.end());
  if (out.size() > count) out.resize(count);
  auto rest = tail.take(count - out.size());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::string Splice::str() const { return core.str() + " u {" + tail.str() + "}"; }

Splice splice(const FinSet& F, const FinSet& A, const IntSeq& L) {
  if (A.size() % 2) throw PreconditionError("|A| must be even");
  EvenPart ep = even_part(A);
  if (!F.subset_of(ep.a2)) throw PreconditionError("F must lie in A^(2) = " + ep.a2.str());
  if (!A.empty() && A.max() >= L.at(1))
    throw PreconditionError("max A = " + std::to_string(A.max()) + " is not below l_1 = " + std::to_string(L.at(1)));
  return Splice{F.unite(minus_part(F, ep)), L.drop(2)};
}

bool is_appropriate(const FinSet& F1, const FinSet& F2) {
  return F2.size() % 2 == 0 && F1.subset_of(even_part(F2).a2);
}

bool is_good(const Measure& mu, const std::vector<Index>& L, std::size_t n, const Rational& rho, const EpsSeq& eps) {
  if (L.size() < 2 * n) throw PreconditionError("goodness at n needs 2n indices");
  for (std::size_t i = 1; i <= n; ++i)
    if (mu.level_mass(L[2 * i - 1], eps.at(L[2 * i - 2])) < rho) return false;
  return true;
}

bool admissible_window(const MeasureFamily& fam, const FinSet& F1, const FinSet& F2, const IntSeq& L,
                       std::size_t n_max, const Rational& rho, const EpsSeq& eps, const EpsSeq& deltas) {
  if (!is_appropriate(F1, F2)) throw PreconditionError("(F1, F2) is not appropriate");
  if (!F2.empty() && F2.max() >= L.at(1)) throw PreconditionError("max F2 must be below l_1");
  EvenPart ep = even_part(F2);
  FinSet small = ep.a2.minus(F1);
  Splice sp = splice(F1, F2, L);
  auto quiet = [&](const Measure& nu) {
    for (Index m : small)
      if (!(nu.integral_f(m) < deltas.at(ep.pred.at(m)))) return false;
    return nu.integral_f(L.at(2)) < deltas.at(L.at(1));
  };
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto seq = sp.take(2 * n);
    for (const auto& mu : fam.members) {
      if (!is_good(mu, seq, n, rho, eps)) continue;
      bool found = std::any_of(fam.members.begin(), fam.members.end(),
                               [&](const Measure& nu) { return is_good(nu, seq, n, rho, eps) && quiet(nu); });
      if (!found) return false;
    }
  }
  return true;
}

NormingCheck rho_norms_check(const MeasureFamily& fam, Index a, Index b, const std::vector<Rational>& grid,
                             const Rational& rho, const Budget& budget) {
  if (grid.empty()) throw PreconditionError("coefficient grid is empty");
  if (a == 0 || a > b) throw PreconditionError("bad window");
  for (const auto& g : grid)
    if (g.is_zero()) throw PreconditionError("grid values must be nonzero (0 is always included)");
  const std::size_t w = b - a + 1;
  std::vector<std::size_t> digit(w, 0);  // 0 means coefficient 0, k means grid[k-1]
  NormingCheck out;
  bool have = false;
  while (true) {
    std::size_t p = 0;
    while (p < w && digit[p] == grid.size()) digit[p++] = 0;
    if (p == w) break;
    ++digit[p];
    if (out.vectors >= budget.max_evaluations) {
      out.partial = true;
      break;
    }
    SuppVec f;
    for (std::size_t q = 0; q < w; ++q)
      if (digit[q]) f.set(a + static_cast<Index>(q), grid[digit[q] - 1]);
    ++out.vectors;
    Rational nf = fam.model.norm(f);
    Rational best;
    for (const auto& mu : fam.members) best = max(best, mu.integral(f).abs());
    Rational ratio = best / nf;
    if (!have || ratio < out.worst) {
      have = true;
      out.worst = ratio;
      out.witness = f;
    }
  }
  out.pass = have && !out.partial && out.worst >= rho;
  return out;
}

std::optional<Rational> chebyshev_mass(const Measure& mu, Index n, const Rational& D, const Rational& delta) {
  if (D.sign() <= 0) throw PreconditionError("D must be positive");
  if (delta.is_zero()) return std::nullopt;
  return mu.level_mass(n, D * delta);
}

std::optional<Rational> choose_eps(const Rational& rho) {
  if (rho.sign() <= 0) throw PreconditionError("rho must be positive");
  const Rational half = rho / Rational(2), target = rho * rho / Rational(5);
  for (long q = 1; q <= 64; ++q)
    for (long p = 1;; ++p) {
      Rational e(p, q);
      if (e >= half) break;
      if (std::gcd(p, q) != 1) continue;
      Rational r = (rho - e * Rational(2)) / (Rational(2) + e);
      if (r * r > e * e + target) return e;
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// The measure-separation computation

namespace {

MPStep chain_step(std::string name, std::vector<Rational> v, std::string note = {}) {
  bool ok = true;
  for (std::size_t i = 1; i < v.size(); ++i) ok = ok && v[i - 1] <= v[i];
  return MPStep{std::move(name), std::move(v), ok, std::move(note)};
}

}  // namespace

MPTranscript compute_mp_transcript(const MeasureFamily& fam, std::size_t mu_index, const AlphaEpsCert& block,
                                   bool block_verified, const Ordinal& alpha, const Rational& rho,
                                   const Rational& eps, const EpsSeq& eps_seq, const FinSet& N) {
  if (mu_index >= fam.members.size()) throw PreconditionError("measure index out of range");
  const Measure& mu = fam.members[mu_index];
  const SpaceModel& model = fam.model;
  MPTranscript tr(block, mu);
  tr.rho = rho;
  tr.eps = eps;
  tr.alpha = alpha;
  tr.window = N;
  tr.eps_seq = eps_seq.str();
  tr.block_verified = block_verified;
  tr.mu_index = mu_index;
  const Rational one(1), two(2);
  tr.D = (two + eps) / (rho - two * eps);
  const Rational& D = tr.D;
  const Rational q = (rho - two * eps) / (two + eps);
  const Rational q2 = q * q;
  const SuppVec& u = block.u;
  EvenPart ep = even_part(N);

  // Rows.
  std::size_t pos = 0;
  for (Index n : ep.a2) {
    MPRow r;
    r.i = ++pos;
    r.n = n;
    r.pred = ep.pred.at(n);
    r.a = u.at(n);
    r.eps_pred = eps_seq.at(r.pred);
    r.delta = mu.integral_f(n);
    r.level_mass = mu.level_mass(n, r.eps_pred);
    r.in_I0 = r.a.sign() > 0 && r.delta.sign() > 0;
    if (r.in_I0) r.phi_mass = chebyshev_mass(mu, n, D, r.delta);
    r.in_I = r.a.sign() > 0 && r.level_mass >= rho * rho / Rational(5);
    tr.rows.push_back(r);
  }
  std::vector<Index> I, G;
  for (const auto& r : tr.rows)
    if (r.in_I) {
      I.push_back(static_cast<Index>(r.i));
      G.push_back(r.n);
    }
  tr.I = FinSet::from(I);
  tr.G = FinSet::from(G);
  tr.G_member = member(tr.G, alpha);

  auto& S = tr.steps;
  {
    MPStep s{"eps", {q2, eps * eps + rho * rho / Rational(5)}, false, "strict, left > right; 0 < eps < rho/2"};
    s.holds = eps.sign() > 0 && eps < rho / two && q2 > s.values[1];
    S.push_back(s);
  }
  {
    Rational tail;
    for (const auto& r : tr.rows) tail += r.eps_pred;
    MPStep s{"eps-tail", {tail, eps}, tail < eps, "strict"};
    S.push_back(s);
  }
  {
    bool ok = block_verified && block.alpha == alpha && block.eps == RootParam(eps) && block.model == model &&
              u.support().subset_of(ep.a2) && !u.empty();
    S.push_back(MPStep{"block", {}, ok, block_verified ? "" : "block certificate did not verify"});
  }
  // P = int u dmu.
  Rational P;
  for (const auto& r : tr.rows) P += r.a * r.delta;
  S.push_back(chain_step("norming", {rho, P}));
  {
    Rational worst;
    for (const auto& r : tr.rows)
      if (r.phi_mass) worst = max(worst, *r.phi_mass);
    S.push_back(chain_step("EmP2", {worst, one / D}, "largest phi mass against 1/D"));
  }

  // phi_i(t) = [f_{n_i}(t) >= D delta_i] on I0; A, B and the integral of |sum a_i phi_i(t) f_{n_i}|.
  Rational A, B, Nint, NK1, NoutK1;
  std::vector<Rational> phiK1(tr.rows.size());
  for (const auto& atom : mu.atoms()) {
    SuppVec v;
    Rational lin;
    std::vector<std::size_t> on;
    for (std::size_t k = 0; k < tr.rows.size(); ++k) {
      const auto& r = tr.rows[k];
      if (!r.in_I0) continue;
      Rational f = atom.point.eval_f(r.n);
      if (f >= D * r.delta) {
        v.set(r.n, r.a);
        lin += r.a * f;
        on.push_back(k);
      } else {
        B += r.a * atom.mass * f;
      }
    }
    A += atom.mass * lin;
    Rational nv = model.norm(v);
    Nint += atom.mass * nv;
    if (nv >= eps) {
      NK1 += atom.mass * nv;
      for (auto k : on) phiK1[k] += atom.mass;
    } else {
      NoutK1 += atom.mass * nv;
    }
  }
  {
    MPStep s{"EmP3", {P, A + B, Nint + B}, P == A + B && A <= Nint, "P = A + B exactly, A <= integral of the norm"};
    S.push_back(s);
  }
  {
    Rational at0, at0K1;
    for (std::size_t k = 0; k < tr.rows.size(); ++k) {
      const auto& r = tr.rows[k];
      if (!r.in_I0) continue;
      Rational ft = block.t0.eval_f(r.n);
      at0 += r.a * ft;
      at0K1 += r.a * ft * phiK1[k];
    }
    S.push_back(chain_step("EmP4", {NK1, (one + eps) * at0K1, (one + eps) / D * at0, (one + eps) / D}));
  }
  {
    MPStep s = chain_step("EmP5", {Nint, eps + (one + eps) / D});
    s.holds = s.holds && NoutK1 <= eps;
    s.note = "off K1 the integral is " + NoutK1.str();
    S.push_back(s);
  }
  Rational S7, split, bound_terms, eps_terms;
  for (const auto& r : tr.rows) {
    S7 += r.a * r.delta * r.level_mass;
    if (!r.in_I0) continue;
    Rational mid, low;
    for (const auto& atom : mu.atoms()) {
      Rational f = atom.point.eval_f(r.n);
      if (f >= r.eps_pred && f < D * r.delta) mid += atom.mass * f;
      if (f < r.eps_pred) low += atom.mass * f;
    }
    split += r.a * (mid + low);
    bound_terms += r.a * D * r.delta * r.level_mass;
    eps_terms += r.a * r.eps_pred;
  }
  const Rational base = eps + (one + eps) / D;
  S.push_back(chain_step("EmP6", {rho, P, base + B, base + split, base + bound_terms + eps_terms,
                                  eps + base + D * S7}));
  {
    Rational lhs = rho - two * eps - (one + eps) / D, rhs = D * q2;
    S.push_back(MPStep{"identity", {lhs, rhs}, lhs == rhs, "equality"});
  }
  S.push_back(chain_step("EmP7", {q2, S7}));
  {
    Rational inI, outI, uI;
    SuppVec uI_vec;
    for (const auto& r : tr.rows) {
      if (r.in_I) {
        inI += r.a * r.delta * r.level_mass;
        uI += r.a * r.delta;
      } else {
        outI += r.a * r.delta * r.level_mass;
      }
    }
    MPStep s{"I", {inI, outI, uI}, !tr.G_member,
             "{n_2i : i in I} = " + tr.G.str() + (tr.G_member ? " is in S_" : " is not in S_") + alpha.str()};
    S.push_back(s);
  }
  for (const auto& s : S)
    if (!s.holds) {
      tr.failed_step = s.name;
      break;
    }
  return tr;
}

MPTranscript prop_mp_run(const MeasureFamily& fam, const Ordinal& alpha, const Rational& rho, const EpsSeq& eps_seq,
                         const FinSet& N, const MPOptions& opts) {
  if (rho.sign() <= 0 || rho > Rational(1)) throw PreconditionError("rho must lie in (0,1]");
  if (N.empty() || N.size() % 2) throw PreconditionError("window N must have even, nonzero length");
  auto eps = choose_eps(rho);
  if (!eps) throw PreconditionError("no eps on the grid q <= 64 satisfies the feasibility inequality for rho = " + rho.str());
  EvenPart ep = even_part(N);
  Rational tail;
  for (Index m : ep.a2) tail += eps_seq.at(ep.pred.at(m));
  if (!(tail < *eps))
    throw PreconditionError("sum of eps_{n_(2i-1)} over the window is " + tail.str() + ", not below eps = " + eps->str());
  const SpaceModel& model = fam.model;

  std::optional<AlphaEpsCert> block = opts.block;
  bool verified = false;
  if (block) {
    try {
      verified = verify_alpha_eps(*block, opts.budget).pass();
    } catch (const ResourceError&) {
      verified = false;
    }
  } else {
    try {
      block = find_block(model, alpha, *eps, ep.a2, eps_seq, opts.budget);
      verified = true;
    } catch (const std::runtime_error& e) {
      if (!opts.diagnostic)
        throw SearchFailure("no (" + alpha.str() + ", " + eps->str() + ") block on N^(2) = " + ep.a2.str() + ": " +
                            e.what());
      SuppVec v = SuppVec::indicator(ep.a2);
      v = v.scaled(Rational(1) / model.norm(v));
      block = AlphaEpsCert{model, v, alpha, RootParam(*eps), model.norming_point(v)};
      try {
        verified = verify_alpha_eps(*block, opts.budget).pass();
      } catch (const ResourceError&) {
        verified = false;
      }
    }
  }

  // Select mu: the first measure with |int sum a_i sigma_i e_{n_i} dmu| >= rho, signs read off a
  // point norming u. Without one, the measure with the largest pairing is reported.
  const SuppVec& u = block->u;
  KPoint t1 = model.norming_point(u);
  SuppVec signed_u;
  for (const auto& [n, a] : u.coeffs()) signed_u.set(n, t1.value(n).sign() < 0 ? -a : a);
  std::optional<std::size_t> pick;
  std::size_t best = 0;
  Rational best_val(-1);
  for (std::size_t k = 0; k < fam.members.size(); ++k) {
    Rational v = fam.members[k].integral(signed_u).abs();
    if (v >= rho) {
      pick = k;
      break;
    }
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  return compute_mp_transcript(fam, pick.value_or(best), *block, verified, alpha, rho, *eps, eps_seq, N);
}

}  // namespace awb
