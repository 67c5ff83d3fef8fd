#include "hb/selmer.hpp"

#include <algorithm>
#include <set>

#include "hb/errors.hpp"
#include "hb/numeric.hpp"

namespace hb {

std::string to_string(LocalLabel l) {
  switch (l) {
    case LocalLabel::kummer: return "kummer";
    case LocalLabel::transverse: return "transverse";
    case LocalLabel::full: return "full";
    case LocalLabel::zero: return "zero";
    case LocalLabel::stringent: return "stringent";
    case LocalLabel::relaxed: return "relaxed";
  }
  return "?";
}

std::pair<int, int> LocalCondition::exponents(int m) const {
  if (t < 0 || t > m) throw ValidationError("local condition parameter out of range");
  switch (label) {
    case LocalLabel::kummer: return {0, m};
    case LocalLabel::transverse: return {m, 0};
    case LocalLabel::full: return {0, 0};
    case LocalLabel::zero: return {m, m};
    case LocalLabel::stringent: return {t, m};
    case LocalLabel::relaxed: return {0, m - t};
  }
  throw InternalError("unknown local label");
}

std::string LocalCondition::to_string() const {
  if (label == LocalLabel::stringent || label == LocalLabel::relaxed)
    return hb::to_string(label) + "(" + std::to_string(t) + ")";
  return hb::to_string(label);
}

bool same_condition(const LocalCondition& a, const LocalCondition& b, int m) {
  return a.exponents(m) == b.exponents(m);
}

bool condition_contained(const LocalCondition& a, const LocalCondition& b, int m) {
  auto [ia, ja] = a.exponents(m);
  auto [ib, jb] = b.exponents(m);
  return ia >= ib && ja >= jb;
}

LocalCondition dual_condition(const LocalCondition& c, int m) {
  switch (c.label) {
    case LocalLabel::kummer: return LocalCondition::kummer();
    case LocalLabel::transverse: return LocalCondition::transverse();
    case LocalLabel::full: return LocalCondition::zero();
    case LocalLabel::zero: return LocalCondition::full();
    case LocalLabel::stringent: static_cast<void>(c.exponents(m)); return LocalCondition::relaxed(c.t);
    case LocalLabel::relaxed: static_cast<void>(c.exponents(m)); return LocalCondition::stringent(c.t);
  }
  throw InternalError("unknown local label");
}

std::string SelmerStructureSpec::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < places.size(); ++i) s += (i ? ", " : "") + places[i].to_string();
  return s + "]";
}

std::int64_t pairing(const ZmodRing& R, const ZVec& x, const ZVec& y) {
  if (x.size() != y.size() || x.size() % 2 != 0) throw ValidationError("pairing: dimension mismatch");
  std::int64_t s = 0;
  for (std::size_t v = 0; v < x.size(); v += 2) s = R.add(s, R.sub(R.mul(x[v], y[v + 1]), R.mul(x[v + 1], y[v])));
  return s;
}

namespace {

void check_structure(const SyntheticDualityModel& model, const SelmerStructureSpec& F) {
  if (static_cast<int>(F.places.size()) != model.places) throw ValidationError("structure has the wrong number of places");
  for (const auto& c : F.places) static_cast<void>(c.exponents(model.ring.m));
}

// Generators of the coordinate submodule sum_v F_v.
ZMat local_module(const ZmodRing& R, const SelmerStructureSpec& F) {
  const std::size_t dim = 2 * F.places.size();
  ZMat out;
  for (std::size_t v = 0; v < F.places.size(); ++v) {
    auto [i, j] = F.places[v].exponents(R.m);
    for (auto [coord, e] : {std::pair{2 * v, i}, std::pair{2 * v + 1, j}}) {
      if (e >= R.m) continue;
      ZVec row(dim, 0);
      row[coord] = R.power_of_p(e);
      out.push_back(std::move(row));
    }
  }
  return out;
}

ZMat selmer_generators(const SyntheticDualityModel& model, const ZMat& L, const SelmerStructureSpec& F) {
  const ZmodRing& R = model.ring;
  const std::size_t dim = model.dim();
  // x_k in p^a R  <=>  p^{m-a} x_k = 0
  ZMat scaled = L;
  for (std::size_t v = 0; v < F.places.size(); ++v) {
    auto [i, j] = F.places[v].exponents(R.m);
    const std::int64_t fe = R.power_of_p(R.m - i), ff = R.power_of_p(R.m - j);
    for (auto& row : scaled) {
      row[2 * v] = R.mul(row[2 * v], fe);
      row[2 * v + 1] = R.mul(row[2 * v + 1], ff);
    }
  }
  ZMat out;
  for (const ZVec& k : left_kernel(R, scaled, dim)) {
    ZVec x(dim, 0);
    for (std::size_t r = 0; r < L.size(); ++r)
      for (std::size_t c = 0; c < dim; ++c) x[c] = R.add(x[c], R.mul(k[r], L[r][c]));
    out.push_back(std::move(x));
  }
  return canonical_basis(R, out, dim);
}

ZMat orthogonal_complement(const ZmodRing& R, const ZMat& gens, std::size_t dim) {
  // y with pairing(g, y) = 0: y . Jg = 0, (Jg)_{2v} = -g_{2v+1}, (Jg)_{2v+1} = g_{2v}
  ZMat A(dim, ZVec(gens.size(), 0));
  for (std::size_t c = 0; c < gens.size(); ++c)
    for (std::size_t v = 0; v < dim; v += 2) {
      A[v][c] = R.reduce(-gens[c][v + 1]);
      A[v + 1][c] = R.reduce(gens[c][v]);
    }
  if (gens.empty()) {
    ZMat I(dim, ZVec(dim, 0));
    for (std::size_t i = 0; i < dim; ++i) I[i][i] = 1;
    return I;
  }
  return left_kernel(R, A, gens.size());
}

ZVec apply_transvection(const ZmodRing& R, const ZVec& x, const ZVec& v, std::int64_t lambda) {
  const std::int64_t c = R.mul(lambda, pairing(R, x, v));
  ZVec out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = R.add(out[i], R.mul(c, v[i]));
  return out;
}

ZVec random_vector(const ZmodRing& R, std::size_t dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> dist(0, R.q - 1);
  ZVec v(dim);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Random element of GL_n(R) as a product of elementary matrices, with its
// inverse.
std::pair<ZMat, ZMat> random_gl(const ZmodRing& R, std::size_t n, std::mt19937_64& rng) {
  ZMat A(n, ZVec(n, 0)), Ainv(n, ZVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) A[i][i] = Ainv[i][i] = 1;
  if (n < 2) return {A, Ainv};
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<std::int64_t> val(1, R.q - 1);
  for (std::size_t step = 0; step < 4 * n * n; ++step) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    const std::int64_t lam = val(rng);
    // A <- A (I + lam e_ij): column j += lam column i
    for (auto& row : A) row[j] = R.add(row[j], R.mul(lam, row[i]));
    // Ainv <- (I - lam e_ij) Ainv: row i -= lam row j
    for (std::size_t c = 0; c < n; ++c) Ainv[i][c] = R.sub(Ainv[i][c], R.mul(lam, Ainv[j][c]));
  }
  return {A, Ainv};
}

// (x_e, x_f) -> (x_e A, x_f A^{-T}) on rows with interleaved coordinates.
ZMat apply_kummer_preserving(const ZmodRing& R, const ZMat& rows, const ZMat& A, const ZMat& Ainv) {
  const std::size_t n = A.size();
  ZMat out;
  for (const ZVec& x : rows) {
    ZVec y(2 * n, 0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        y[2 * j] = R.add(y[2 * j], R.mul(x[2 * k], A[k][j]));
        // (A^{-T})[k][j] = Ainv[j][k]
        y[2 * j + 1] = R.add(y[2 * j + 1], R.mul(x[2 * k + 1], Ainv[j][k]));
      }
    out.push_back(std::move(y));
  }
  return out;
}

ZMat symmetric_graph(const ZmodRing& R, std::size_t n, std::size_t first, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> dist(0, R.q - 1);
  ZMat S(n, ZVec(n, 0));
  for (std::size_t i = first; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) S[i][j] = S[j][i] = dist(rng);
  ZMat rows;
  for (std::size_t i = first; i < n; ++i) {
    ZVec r(2 * n, 0);
    r[2 * i + 1] = 1;
    for (std::size_t j = first; j < n; ++j) r[2 * j] = S[i][j];
    rows.push_back(std::move(r));
  }
  return rows;
}

int cokernel_length(const ZmodRing& R, const ZMat& sup, const ZMat& sub, std::size_t dim) {
  if (!contains(R, sup, sub, dim)) throw InternalError("lozenge: expected inclusion fails");
  if (quotient_rank(R, sup, sub, dim) > 1) throw ComputationError("lozenge: non-cyclic cokernel");
  return length(R, sup, dim) - length(R, sub, dim);
}

InvariantSeq positive_sorted(std::initializer_list<int> xs) {
  InvariantSeq out;
  for (int x : xs)
    if (x > 0) out.push_back(x);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

void validate_model(const SyntheticDualityModel& model) {
  const ZmodRing& R = model.ring;
  const std::size_t dim = model.dim();
  for (const ZMat& L : model.L) {
    for (const auto& row : L)
      if (row.size() != dim) throw ValidationError("model: generator has the wrong dimension");
    for (std::size_t i = 0; i < L.size(); ++i)
      for (std::size_t j = i + 1; j < L.size(); ++j)
        if (pairing(R, L[i], L[j]) != 0) throw ValidationError("model: L is not isotropic");
    if (length(R, L, dim) != R.m * model.places) throw ValidationError("model: L is not maximal isotropic");
  }
}

ZMat random_lagrangian(const ZmodRing& R, int places, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(places);
  const std::size_t dim = 2 * n;
  std::uniform_int_distribution<int> expo(0, R.m);
  ZMat L;
  for (std::size_t i = 0; i < n; ++i) {
    const int a = expo(rng);
    ZVec e(dim, 0), f(dim, 0);
    e[2 * i] = R.power_of_p(a);
    f[2 * i + 1] = R.power_of_p(R.m - a);
    L.push_back(e);
    L.push_back(f);
  }
  std::uniform_int_distribution<std::int64_t> lam(1, R.q - 1);
  for (std::size_t step = 0; step < 4 * dim; ++step) {
    const ZVec v = random_vector(R, dim, rng);
    const std::int64_t l = lam(rng);
    for (auto& row : L) row = apply_transvection(R, row, v, l);
  }
  return canonical_basis(R, L, dim);
}

std::vector<ZMat> all_lagrangians(const ZmodRing& R, int places) {
  if (R.m != 1) throw ValidationError("all_lagrangians: only for m = 1");
  const std::size_t dim = 2 * static_cast<std::size_t>(places);
  std::set<ZMat> layer{ZMat{}};
  for (int step = 0; step < places; ++step) {
    std::set<ZMat> next;
    for (const ZMat& W : layer) {
      const ZMat perp = orthogonal_complement(R, W, dim);
      // every vector of W^perp
      const ZMat basis = canonical_basis(R, perp, dim);
      std::vector<std::int64_t> coeff(basis.size(), 0);
      while (true) {
        ZVec v(dim, 0);
        for (std::size_t b = 0; b < basis.size(); ++b)
          for (std::size_t c = 0; c < dim; ++c) v[c] = R.add(v[c], R.mul(coeff[b], basis[b][c]));
        ZMat ext = W;
        ext.push_back(v);
        if (length(R, ext, dim) == step + 1) next.insert(canonical_basis(R, ext, dim));
        std::size_t k = 0;
        while (k < coeff.size() && ++coeff[k] == R.q) coeff[k++] = 0;
        if (k == coeff.size()) break;
      }
    }
    layer = std::move(next);
  }
  return {layer.begin(), layer.end()};
}

SyntheticDualityModel random_model(std::uint64_t p, int m, int places, std::mt19937_64& rng) {
  SyntheticDualityModel model{ZmodRing(p, m), places, {}};
  model.L[kPlus] = random_lagrangian(model.ring, places, rng);
  model.L[kMinus] = random_lagrangian(model.ring, places, rng);
  return model;
}

SyntheticDualityModel core_vertex_model(std::uint64_t p, int m, int places, Eigen s, std::mt19937_64& rng) {
  if (places < 1) throw ValidationError("core vertex model needs a place");
  SyntheticDualityModel model{ZmodRing(p, m), places, {}};
  const ZmodRing& R = model.ring;
  const auto n = static_cast<std::size_t>(places);
  ZMat core = symmetric_graph(R, n, 1, rng);
  ZVec e1(2 * n, 0);
  e1[0] = 1;
  core.insert(core.begin(), e1);
  ZMat other = symmetric_graph(R, n, 0, rng);
  auto [A, Ainv] = random_gl(R, n, rng);
  model.L[s] = canonical_basis(R, apply_kummer_preserving(R, core, A, Ainv), model.dim());
  auto [B, Binv] = random_gl(R, n, rng);
  model.L[1 - s] = canonical_basis(R, apply_kummer_preserving(R, other, B, Binv), model.dim());
  return model;
}

SelmerStructureSpec uniform_structure(int places, LocalCondition c) {
  return {std::vector<LocalCondition>(static_cast<std::size_t>(places), c)};
}

SelmerStructureSpec dual_structure(const SyntheticDualityModel& model, const SelmerStructureSpec& F) {
  check_structure(model, F);
  SelmerStructureSpec out;
  for (const auto& c : F.places) out.places.push_back(dual_condition(c, model.ring.m));
  return out;
}

SelmerStructureSpec modify_structure(const SelmerStructureSpec& F, const std::vector<int>& a,
                                     const std::vector<int>& b, const std::vector<int>& c) {
  std::set<int> seen;
  SelmerStructureSpec out = F;
  auto mark = [&](const std::vector<int>& xs, LocalCondition cond) {
    for (int v : xs) {
      if (v < 0 || v >= static_cast<int>(F.places.size())) throw ValidationError("modify_structure: bad place");
      if (!seen.insert(v).second) throw ValidationError("modify_structure: place sets overlap");
      out.places[static_cast<std::size_t>(v)] = cond;
    }
  };
  mark(c, LocalCondition::transverse());
  mark(a, LocalCondition::full());
  mark(b, LocalCondition::zero());
  return out;
}

bool is_nested(const SelmerStructureSpec& F, const SelmerStructureSpec& G, int m) {
  if (F.places.size() != G.places.size()) return false;
  for (std::size_t v = 0; v < F.places.size(); ++v)
    if (!condition_contained(F.places[v], G.places[v], m)) return false;
  return true;
}

int SelmerModule::length(Eigen s) const {
  int total = 0;
  for (int e : invariants[s]) total += e;
  return total;
}

SelmerModule selmer_module(const SyntheticDualityModel& model, const SelmerStructureSpec& F) {
  check_structure(model, F);
  SelmerModule h;
  for (int s : {kPlus, kMinus}) {
    h.generators[s] = selmer_generators(model, model.L[s], F);
    h.invariants[s] = invariants(model.ring, h.generators[s], model.dim());
  }
  return h;
}

DualityRecord check_global_duality(const SyntheticDualityModel& model, const SelmerStructureSpec& F,
                                   const SelmerStructureSpec& G) {
  check_structure(model, F);
  check_structure(model, G);
  const ZmodRing& R = model.ring;
  if (!is_nested(F, G, R.m)) throw ValidationError("check_global_duality: F is not contained in G");
  const std::size_t dim = model.dim();
  const SelmerStructureSpec Fd = dual_structure(model, F), Gd = dual_structure(model, G);
  const SelmerModule hF = selmer_module(model, F), hG = selmer_module(model, G);
  const SelmerModule hFd = selmer_module(model, Fd), hGd = selmer_module(model, Gd);
  const ZMat locF = local_module(R, F), locG = local_module(R, G), locGd = local_module(R, Gd);

  DualityRecord rec;
  for (int s : {kPlus, kMinus}) {
    rec.image_g[s] = hG.length(Eigen(s)) - hF.length(Eigen(s));
    rec.image_f_dual[s] = hFd.length(Eigen(s)) - hGd.length(Eigen(s));
    rec.local_quotient[s] = length(R, locG, dim) - length(R, locF, dim);
    const ZMat w1 = concat(hG.generators[s], locF);
    const ZMat w2 = concat(hFd.generators[s], locGd);
    bool orthogonal = true;
    for (const auto& x : w1)
      for (const auto& y : w2)
        if (pairing(R, x, y) != 0) orthogonal = false;
    rec.pass[s] = orthogonal && same_span(R, orthogonal_complement(R, w1, dim), w2, dim) &&
                  rec.image_g[s] + rec.image_f_dual[s] == rec.local_quotient[s];
  }
  return rec;
}

bool LozengeReport::passed() const {
  for (int s : {kPlus, kMinus})
    if (!(bounds[s] && sums[s] && complementary[s] && inequalities[s] && intersections[s])) return false;
  return true;
}

LozengeReport lozenge(const SyntheticDualityModel& model, const SelmerStructureSpec& F, const std::vector<int>& c,
                      int ell) {
  check_structure(model, F);
  const ZmodRing& R = model.ring;
  const int m = R.m;
  if (ell < 0 || ell >= model.places) throw ValidationError("lozenge: bad place");
  if (std::find(c.begin(), c.end(), ell) != c.end()) throw ValidationError("lozenge: l lies in c");
  if (!same_condition(F.places[static_cast<std::size_t>(ell)], LocalCondition::kummer(), m))
    throw ValidationError("lozenge: F must be kummer at l");
  std::vector<int> cl = c;
  cl.push_back(ell);

  const SelmerStructureSpec Fc = modify_structure(F, {}, {}, c);
  const SelmerStructureSpec Fcl = modify_structure(F, {}, {}, cl);
  const SelmerStructureSpec Fup = modify_structure(F, {ell}, {}, c);
  const SelmerStructureSpec Fdown = modify_structure(F, {}, {ell}, c);
  const SelmerModule hc = selmer_module(model, Fc), hcl = selmer_module(model, Fcl);
  const SelmerModule hup = selmer_module(model, Fup), hdown = selmer_module(model, Fdown);
  const SelmerModule dc = selmer_module(model, dual_structure(model, Fc));
  const SelmerModule dcl = selmer_module(model, dual_structure(model, Fcl));
  const SelmerModule dup = selmer_module(model, dual_structure(model, Fup));
  const SelmerModule ddown = selmer_module(model, dual_structure(model, Fdown));
  const std::size_t dim = model.dim();

  LozengeReport rep;
  for (int s : {kPlus, kMinus}) {
    LozengeLengths& x = rep.lengths[s];
    x.a = cokernel_length(R, hup.generators[s], hc.generators[s], dim);
    x.b = cokernel_length(R, hup.generators[s], hcl.generators[s], dim);
    x.c = cokernel_length(R, hc.generators[s], hdown.generators[s], dim);
    x.d = cokernel_length(R, hcl.generators[s], hdown.generators[s], dim);
    LozengeLengths& y = rep.dual_lengths[s];
    y.a = cokernel_length(R, dc.generators[s], dup.generators[s], dim);
    y.b = cokernel_length(R, dcl.generators[s], dup.generators[s], dim);
    y.c = cokernel_length(R, ddown.generators[s], dc.generators[s], dim);
    y.d = cokernel_length(R, ddown.generators[s], dcl.generators[s], dim);

    auto in_range = [m](const LozengeLengths& l) {
      return std::min({l.a, l.b, l.c, l.d}) >= 0 && std::max({l.a, l.b, l.c, l.d}) <= m;
    };
    rep.bounds[s] = in_range(x) && in_range(y);
    rep.sums[s] = x.a + x.c == x.b + x.d && y.a + y.c == y.b + y.d;
    rep.complementary[s] = x.a + y.a == m && x.b + y.b == m && x.c + y.c == m && x.d + y.d == m;
    rep.inequalities[s] = x.a >= x.d && x.b >= x.c && y.c >= y.b && y.d >= y.a;
    rep.intersections[s] =
        same_span(R, intersection(R, hc.generators[s], hcl.generators[s], dim), hdown.generators[s], dim) &&
        same_span(R, intersection(R, dc.generators[s], dcl.generators[s], dim), dup.generators[s], dim);
  }
  return rep;
}

StringentReplay replay_stringent_duality(const SyntheticDualityModel& model, Eigen eps, int v, int t) {
  const int m = model.ring.m;
  if (t < 0 || t >= m) throw ValidationError("replay: need 0 <= t < m");
  if (v < 0 || v >= model.places) throw ValidationError("replay: bad place");
  const Eigen other = eps == kPlus ? kMinus : kPlus;
  const SelmerStructureSpec F = uniform_structure(model.places, LocalCondition::kummer());
  const SelmerModule h = selmer_module(model, F);
  if (h.invariants[eps] != InvariantSeq{m} || !h.invariants[other].empty())
    throw ValidationError("replay: model is not a core vertex for the given sign");

  SelmerStructureSpec F0 = F;
  F0.places[static_cast<std::size_t>(v)] = LocalCondition::stringent(t);
  const SelmerModule h0 = selmer_module(model, F0);
  if (h0.invariants[eps].size() > 1 || !h0.invariants[other].empty())
    throw InternalError("replay: stringent Selmer module is not a submodule of a cyclic one");

  StringentReplay r;
  r.eps = eps;
  r.m = m;
  r.t = t;
  r.m_prime = h0.length(eps);
  r.expected_eps = positive_sorted({m, t + r.m_prime - m});
  r.expected_other = positive_sorted({t});
  const SelmerModule hd = selmer_module(model, dual_structure(model, F0));
  r.observed_eps = hd.invariants[eps];
  r.observed_other = hd.invariants[other];
  return r;
}

}  // namespace hb

namespace hb {

namespace {

std::pair<std::uint64_t, int> split_prime_power(std::uint64_t pm) {
  for (std::uint64_t p = 3; p <= pm; p += 2) {
    if (pm % p != 0) continue;
    int m = 0;
    std::uint64_t r = pm;
    while (r % p == 0) {
      r /= p;
      ++m;
    }
    if (r != 1 || !is_prime(p)) break;
    return {p, m};
  }
  throw ValidationError("selmer lab: modulus must be a power of an odd prime");
}

const std::vector<LocalCondition>& basic_labels() {
  static const std::vector<LocalCondition> labels{LocalCondition::kummer(), LocalCondition::transverse(),
                                                  LocalCondition::full(), LocalCondition::zero()};
  return labels;
}

LocalCondition random_condition(int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 5), par(0, m);
  switch (kind(rng)) {
    case 0: return LocalCondition::kummer();
    case 1: return LocalCondition::transverse();
    case 2: return LocalCondition::full();
    case 3: return LocalCondition::zero();
    case 4: return LocalCondition::stringent(par(rng));
    default: return LocalCondition::relaxed(par(rng));
  }
}

// Random G containing F: each place keeps F_v or is enlarged.
LocalCondition random_enlargement(const LocalCondition& c, int m, std::mt19937_64& rng) {
  for (int tries = 0; tries < 16; ++tries) {
    LocalCondition g = random_condition(m, rng);
    if (condition_contained(c, g, m)) return g;
  }
  return LocalCondition::full();
}

void note_failure(SelmerLabResult& r, const std::string& what) {
  if (r.failures.size() < 20) r.failures.push_back(what);
}

void run_duality(SelmerLabResult& r, const SyntheticDualityModel& model, const SelmerStructureSpec& F,
                 const SelmerStructureSpec& G) {
  ++r.duality_checks;
  if (!check_global_duality(model, F, G).passed()) {
    ++r.duality_failures;
    note_failure(r, "duality F=" + F.to_string() + " G=" + G.to_string());
  }
}

void run_lozenge(SelmerLabResult& r, const SyntheticDualityModel& model, const SelmerStructureSpec& F,
                 const std::vector<int>& c, int ell) {
  ++r.lozenge_checks;
  bool ok = false;
  try {
    ok = lozenge(model, F, c, ell).passed();
  } catch (const ComputationError&) {
    ok = false;
  }
  if (!ok) {
    ++r.lozenge_failures;
    note_failure(r, "lozenge F=" + F.to_string() + " l=" + std::to_string(ell));
  }
}

}  // namespace

SelmerLabResult run_selmer_lab(std::uint64_t pm, int places, long trials, std::uint64_t seed) {
  if (places < 2) throw ValidationError("selmer lab: need at least two places");
  if (trials < 0) throw ValidationError("selmer lab: trials must be nonnegative");
  auto [p, m] = split_prime_power(pm);
  SelmerLabResult r;
  r.p = p;
  r.m = m;
  r.places = places;
  r.seed = seed;
  r.exhaustive = m == 1 && places == 2;
  std::mt19937_64 rng(seed);
  const ZmodRing R(p, m);

  if (r.exhaustive) {
    const auto lag = all_lagrangians(R, places);
    const auto& labels = basic_labels();
    for (const ZMat& Lp : lag)
      for (const ZMat& Lm : lag) {
        const SyntheticDualityModel model{R, places, {Lp, Lm}};
        ++r.models;
        std::vector<SelmerStructureSpec> all;
        for (const auto& a : labels)
          for (const auto& b : labels) all.push_back({{a, b}});
        for (const auto& F : all)
          for (const auto& G : all)
            if (is_nested(F, G, m)) run_duality(r, model, F, G);
        for (const auto& F : all)
          for (int ell = 0; ell < places; ++ell) {
            if (!same_condition(F.places[static_cast<std::size_t>(ell)], LocalCondition::kummer(), m)) continue;
            run_lozenge(r, model, F, {}, ell);
            run_lozenge(r, model, F, {1 - ell}, ell);
          }
      }
  } else {
    std::uniform_int_distribution<int> place(0, places - 1);
    for (long trial = 0; trial < trials; ++trial) {
      const SyntheticDualityModel model = random_model(p, m, places, rng);
      ++r.models;
      SelmerStructureSpec F, G;
      for (int v = 0; v < places; ++v) {
        F.places.push_back(random_condition(m, rng));
        G.places.push_back(random_enlargement(F.places.back(), m, rng));
      }
      run_duality(r, model, F, G);
      // lozenge: kummer at l, random elsewhere, c a random subset of the rest
      SelmerStructureSpec K;
      for (int v = 0; v < places; ++v) K.places.push_back(random_condition(m, rng));
      const int ell = place(rng);
      K.places[static_cast<std::size_t>(ell)] = LocalCondition::kummer();
      std::vector<int> c;
      for (int v = 0; v < places; ++v)
        if (v != ell && (rng() & 1U)) c.push_back(v);
      run_lozenge(r, model, K, c, ell);
    }
  }

  std::uniform_int_distribution<int> place(0, places - 1), tdist(0, m - 1);
  for (long trial = 0; trial < trials; ++trial) {
    const Eigen eps = (rng() & 1U) ? kMinus : kPlus;
    const SyntheticDualityModel model = core_vertex_model(p, m, places, eps, rng);
    const int v = place(rng), t = tdist(rng);
    ++r.replay_checks;
    const StringentReplay rep = replay_stringent_duality(model, eps, v, t);
    if (!rep.matches()) {
      ++r.replay_failures;
      note_failure(r, "replay v=" + std::to_string(v) + " t=" + std::to_string(t));
    }
  }
  return r;
}

}  // namespace hb
