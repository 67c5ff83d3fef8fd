#include "hb/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hb/errors.hpp"
#include "hb/finite_model.hpp"
#include "hb/forms.hpp"
#include "hb/galois_image.hpp"
#include "hb/heegner.hpp"
#include "hb/height.hpp"
#include "hb/numeric.hpp"

namespace hb {

using nlohmann::json;

namespace {

BigInt json_integer(const json& v, const char* what) {
  if (v.is_number_integer()) return BigInt(v.get<long>());
  if (v.is_string()) {
    BigInt out;
    if (out.set_str(v.get<std::string>(), 10) == 0) return out;
  }
  throw ValidationError(std::string("expected an integer for ") + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

CurveRecord parse_curve_record(const std::string& json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("record must be a JSON object");
  if (!j.contains("label") || !j["label"].is_string()) throw ValidationError("missing string field \"label\"");
  if (!j.contains("a") || !j["a"].is_array() || j["a"].size() != 5)
    throw ValidationError("field \"a\" must hold five integers [a1, a2, a3, a4, a6]");

  CurveRecord r;
  r.label = j["label"].get<std::string>();
  const auto& a = j["a"];
  r.a = {json_integer(a[0], "a1"), json_integer(a[1], "a2"), json_integer(a[2], "a3"), json_integer(a[3], "a4"),
         json_integer(a[4], "a6")};
  const EllipticCurveQ e(r.a, r.label);

  if (j.contains("generator") && !j["generator"].is_null()) {
    const auto& g = j["generator"];
    if (!g.is_array() || g.size() != 4) throw ValidationError("generator must be [x_num, x_den, y_num, y_den]");
    const BigInt xd = json_integer(g[1], "x_den"), yd = json_integer(g[3], "y_den");
    if (xd == 0 || yd == 0) throw ValidationError("generator has a zero denominator");
    auto pt = RationalPoint::affine(make_rational(json_integer(g[0], "x_num"), xd),
                                    make_rational(json_integer(g[2], "y_num"), yd));
    if (!e.contains(pt)) throw ValidationError("generator " + pt.to_string() + " is not on " + r.label);
    r.generator = std::move(pt);
  }
  if (j.contains("notes") && j["notes"].is_string()) r.notes = j["notes"].get<std::string>();
  return r;
}

IngestResult parse_curves(std::istream& in) {
  IngestResult out;
  std::set<std::string> seen;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (trim(line).empty()) continue;
    try {
      CurveRecord r = parse_curve_record(line);
      if (!seen.insert(r.label).second) throw ValidationError("duplicate label " + r.label);
      r.line = n;
      out.records.push_back(std::move(r));
    } catch (const std::exception& e) {
      out.errors.push_back("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

IngestResult ingest_curves(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read curve file " + path.string());
  return parse_curves(in);
}

const CurveRecord& find_record(const IngestResult& table, const std::string& label) {
  for (const auto& r : table.records)
    if (r.label == label) return r;
  throw ValidationError("label " + label + " not found in the curve table");
}

RationalPoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ValidationError("point must be written x,y");
  try {
    return RationalPoint::affine(parse_rational(trim(text.substr(0, comma))),
                                 parse_rational(trim(text.substr(comma + 1))));
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError("cannot parse point \"" + text + "\": " + e.what());
  }
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (!in || !(in >> std::ws).eof()) throw ValidationError("config: bad value \"" + value + "\" for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError("config: bad boolean \"" + value + "\" for " + key);
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  if (key == "precision_digits") {
    precision_digits = parse_number<int>(key, value);
    if (precision_digits < 30) throw ValidationError("config: precision_digits must be at least 30");
  } else if (key == "qseries_max_terms") {
    qseries_max_terms = parse_number<long>(key, value);
    if (qseries_max_terms < 0) throw ValidationError("config: qseries_max_terms must be nonnegative");
  } else if (key == "sieve_bound") {
    sieve_bound = parse_number<std::uint64_t>(key, value);
  } else if (key == "search_height_bound") {
    search_height_bound = parse_number<long>(key, value);
    if (search_height_bound < 1) throw ValidationError("config: search_height_bound must be positive");
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "allow_unverified_hypothesis") {
    allow_unverified_hypothesis = parse_bool(key, value);
  } else if (key == "image_sample_bound") {
    image_sample_bound = parse_number<std::uint64_t>(key, value);
  } else if (key == "workers") {
    workers = parse_number<unsigned>(key, value);
    if (workers == 0) throw ValidationError("config: workers must be positive");
  } else {
    throw ValidationError("config: unknown key " + key);
  }
}

std::map<std::string, std::string> Config::entries() const {
  return {{"allow_unverified_hypothesis", allow_unverified_hypothesis ? "true" : "false"},
          {"image_sample_bound", std::to_string(image_sample_bound)},
          {"precision_digits", std::to_string(precision_digits)},
          {"qseries_max_terms", std::to_string(qseries_max_terms)},
          {"search_height_bound", std::to_string(search_height_bound)},
          {"seed", std::to_string(seed)},
          {"sieve_bound", std::to_string(sieve_bound)}};
}

Config load_config(const std::filesystem::path& path, Config base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path.string() + ":" + std::to_string(n) + ": expected key = value");
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

double AnalysisTiming::total() const {
  double t = 0;
  for (const auto& [name, s] : stages) t += s;
  return t;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return 2;
  if (dynamic_cast<const ComputationError*>(&e)) return 3;
  if (dynamic_cast<const HypothesisError*>(&e)) return 4;
  return 1;
}

std::vector<std::int64_t> candidate_discriminants(const EllipticCurveQ& e, std::uint64_t p, std::int64_t bound) {
  std::vector<std::int64_t> out;
  for (std::int64_t D : heegner_discriminants(e.conductor().get_ui(), bound))
    if (D > 4 && D % static_cast<std::int64_t>(p) != 0) out.push_back(D);
  return out;
}


namespace {

std::string dec(const Real& x, int sig) { return x.to_string(sig); }

std::vector<std::string> coefficient_strings(const Coefficients& a) {
  return {to_string(a.a1), to_string(a.a2), to_string(a.a3), to_string(a.a4), to_string(a.a6)};
}

std::optional<std::int64_t> reduce_mod(const BigRational& v, std::uint64_t q) {
  const BigInt qq(static_cast<unsigned long>(q));
  BigInt den = v.get_den() % qq;
  if (den == 0) return std::nullopt;
  BigInt num = v.get_num() % qq;
  if (num < 0) num += qq;
  if (den < 0) den += qq;
  const auto m = static_cast<std::int64_t>(q);
  return mulmod(num.get_si(), invmod(den.get_si(), m), m);
}

// A good prime q != p with p || #E(F_q) and (#E(F_q) / p) P != O mod q; such
// a q shows P is not in p E(Q).
std::optional<std::uint64_t> saturation_witness(const EllipticCurveQ& e, const RationalPoint& pt, std::uint64_t p,
                                                std::uint32_t bound) {
  for (std::uint32_t q : primes_up_to(bound)) {
    if (q == p || q == 2 || !e.is_good(q)) continue;
    const std::uint64_t n = count_points_mod(e, q);
    if (n % p != 0 || (n / p) % p == 0) continue;
    const auto x = reduce_mod(pt.x, q), y = reduce_mod(pt.y, q);
    if (!x || !y) continue;
    const ReducedCurve red(e, q);
    const FinitePoint pq{false, {*x, 0}, {*y, 0}};
    if (!red.mul(pq, BigInt(static_cast<unsigned long>(n / p))).infinity) return q;
  }
  return std::nullopt;
}

class StageClock {
 public:
  explicit StageClock(AnalysisTiming* t) : t_(t), start_(std::chrono::steady_clock::now()) {}
  void lap(const char* name) {
    const auto now = std::chrono::steady_clock::now();
    if (t_) t_->stages.emplace_back(name, std::chrono::duration<double>(now - start_).count());
    start_ = now;
  }

 private:
  AnalysisTiming* t_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

AnalysisReport analyze(const CurveRecord& record, std::int64_t D, std::uint64_t p, const Config& config,
                       AnalysisTiming* timing) {
  StageClock clock(timing);
  const EllipticCurveQ e(record.a, record.label);
  const int digits = config.precision_digits;

  if (p < 3 || !is_prime(p)) throw ValidationError("p must be an odd prime");
  if (e.conductor() % BigInt(static_cast<unsigned long>(p)) == 0)
    throw ValidationError("p = " + std::to_string(p) + " divides the conductor " + to_string(e.conductor()));
  if (D % static_cast<std::int64_t>(p) == 0) throw ValidationError("p divides D");
  const HeegnerSetup setup = make_heegner_setup(e, D);

  AnalysisReport rep;
  rep.label = record.label;
  rep.coefficients = coefficient_strings(e.coefficients());
  rep.conductor = to_string(e.conductor());
  rep.discriminant = to_string(e.discriminant());
  rep.D = D;
  rep.beta = setup.beta;
  rep.p = p;
  rep.precision_digits = digits;
  rep.config = config.entries();
  clock.lap("validation");

  const ImageVerdict verdict = mod_p_image_surjective(e, p, config.image_sample_bound);
  rep.hypothesis_star = {to_string(verdict.status), verdict.sample_bound, verdict.witnesses, verdict.missing};
  if (verdict.status != ImageStatus::surjective) {
    std::string open;
    for (const auto& m : verdict.missing) open += (open.empty() ? "" : ", ") + m;
    if (!config.allow_unverified_hypothesis)
      throw HypothesisError("mod-" + std::to_string(p) + " image not certified surjective (open: " + open + ")");
    rep.caveats.push_back("mod-p image not certified surjective (open: " + open +
                          "); bounds reported under allow_unverified_hypothesis");
  }
  clock.lap("galois_image");

  const HeegnerPointResult hp = heegner_point(setup, digits, config.workers);
  if (config.qseries_max_terms > 0 && hp.max_terms > config.qseries_max_terms)
    throw ComputationError("q-series needs " + std::to_string(hp.max_terms) + " terms, above qseries_max_terms = " +
                           std::to_string(config.qseries_max_terms));
  if (!hp.recognized) throw ComputationError("Heegner point not recognized: " + hp.failure);
  const EllipticCurveQ& pc = *hp.point_curve;
  if (!pc.contains(hp.point)) throw InternalError("recognized point is not on its curve");
  if (is_torsion(pc, hp.point)) throw ComputationError("Heegner point is torsion; E(K) has analytic rank above one");
  rep.heegner.sign = hp.sign;
  rep.heegner.form_count = hp.form_count;
  rep.heegner.max_terms = hp.max_terms;
  rep.heegner.on_twist = hp.on_twist;
  rep.heegner.twist_d = to_string(hp.twist_d);
  rep.heegner.point_curve = coefficient_strings(pc.coefficients());
  rep.heegner.x = to_string(hp.point.x);
  rep.heegner.y = to_string(hp.point.y);
  rep.heegner.residual = dec(hp.residual, 6);
  rep.heegner.height = dec(hp.height, 30);
  rep.heegner.analytic_height = dec(hp.analytic_height, 30);
  clock.lap("heegner_point");

  RationalPoint gen;
  if (!hp.on_twist && record.generator) {
    gen = *record.generator;
    rep.generator.provenance = "record";
  } else {
    auto found = search_generator(pc, config.search_height_bound);
    if (!found)
      throw ComputationError("no generator found on " + pc.to_string() + " with search_height_bound = " +
                             std::to_string(config.search_height_bound));
    gen = *found;
    rep.generator.provenance = "search";
  }
  if (!pc.contains(gen)) throw ValidationError("generator " + gen.to_string() + " is not on " + pc.to_string());
  if (is_torsion(pc, gen)) throw ValidationError("generator " + gen.to_string() + " is torsion");
  const auto witness = saturation_witness(pc, gen, p, 100000);
  if (!witness)
    throw ComputationError("generator " + gen.to_string() + " could not be shown p-saturated; it may lie in " +
                           std::to_string(p) + " E(Q)");
  rep.generator.x = to_string(gen.x);
  rep.generator.y = to_string(gen.y);
  rep.generator.height = dec(canonical_height(pc, gen, digits), 30);
  rep.caveats.push_back(rep.generator.provenance == "record"
                            ? "generator taken from the curve record; p-saturation certified by reduction mod " +
                                  std::to_string(*witness)
                            : "generator found by naive search; p-saturation certified by reduction mod " +
                                  std::to_string(*witness));
  clock.lap("generator");

  const IndexResult idx = heegner_index(pc, hp.point, gen, p);
  rep.m0 = idx.m0;
  rep.index.n = to_string(idx.n);
  rep.index.ratio = dec(idx.ratio, 30);
  rep.index.deviation = dec(idx.deviation, 6);
  rep.index.heegner_p_division_depth =
      p_division_depth(pc, hp.point_lattice, hp.log_on_curve, p, digits, idx.m0 + 1);
  if (rep.index.heegner_p_division_depth != idx.m0)
    throw ComputationError("p-division depth of the Heegner point disagrees with m0 from heights");
  clock.lap("index");

  for (const LocalData& ld : e.bad_primes())
    rep.local_data.push_back({ld.q, ld.kodaira.to_string(), to_string(ld.reduction), ld.tamagawa, ld.disc_valuation,
                              ld.conductor_exponent, ord(static_cast<std::int64_t>(ld.tamagawa), p)});
  const BoundReport b = sha_bounds(idx.m0, e.bad_primes(), p);
  rep.bounds = {b.m_max, b.exponent_kolyvagin, b.exponent_improved, b.exponent_bsd, b.m_infinity_lower, 0};
  for (const auto& [q, v] : b.tamagawa_valuations) rep.bounds.conjectured_m_infinity += v;
  clock.lap("bounds");

  rep.kolyvagin_bound = config.sieve_bound;
  const auto primes = find_kolyvagin_primes(e, D, p, config.sieve_bound);
  for (const auto& kp : primes) rep.kolyvagin_primes.emplace_back(kp.ell, kp.M);
  clock.lap("kolyvagin_sieve");

  if (!primes.empty()) {
    const DistributionCheck dc = verify_distribution(setup, primes.front().ell, digits, config.workers);
    DistributionSummary ds;
    ds.ell = dc.ell;
    ds.a_ell = dc.a_ell;
    ds.forms = dc.forms_level_ell;
    ds.digits = digits;
    ds.residual = dec(dc.residual, 6);
    ds.passed = dc.residual < ten_pow_neg(digits / 2, digits);
    if (!ds.passed) throw ComputationError("distribution relation residual " + ds.residual + " at l = " +
                                           std::to_string(dc.ell));
    rep.distribution = ds;
  } else {
    rep.caveats.push_back("no Kolyvagin prime below sieve_bound; distribution relation not checked");
  }
  clock.lap("distribution");

  rep.caveats.push_back("surjectivity test is one-sided: \"inconclusive\" does not prove a smaller image");
  rep.caveats.push_back("m_infinity is not computed; only the lower bound m_infinity >= m_max is reported");
  rep.caveats.push_back("conjectured_m_infinity = ord_p(prod c_q) is a conjecture, not a result");
  if (hp.on_twist)
    rep.caveats.push_back("y_K lies in the minus eigenspace; index computed on the twist by " +
                          to_string(hp.twist_d));
  return rep;
}

AnalysisReport analyze_first_discriminant(const CurveRecord& record, std::uint64_t p, const Config& config,
                                          std::int64_t bound, int attempts, AnalysisTiming* timing) {
  const EllipticCurveQ e(record.a, record.label);
  std::string last;
  int tried = 0;
  for (std::int64_t D : candidate_discriminants(e, p, bound)) {
    if (tried++ == attempts) break;
    try {
      if (timing) timing->stages.clear();
      return analyze(record, D, p, config, timing);
    } catch (const ComputationError& err) {
      last = "D = " + std::to_string(D) + ": " + err.what();
    }
  }
  throw ComputationError("no usable Heegner discriminant for " + record.label +
                         (last.empty() ? std::string(" below ") + std::to_string(bound) : "; last failure " + last));
}

}  // namespace hb
