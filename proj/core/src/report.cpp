#include "hb/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hb/errors.hpp"

namespace hb {

using nlohmann::json;

namespace {

json heegner_json(const HeegnerSummary& h) {
  return {{"sign", h.sign},
          {"form_count", h.form_count},
          {"max_terms", h.max_terms},
          {"on_twist", h.on_twist},
          {"twist_d", h.twist_d},
          {"point_curve", h.point_curve},
          {"x", h.x},
          {"y", h.y},
          {"residual", h.residual},
          {"height", h.height},
          {"analytic_height", h.analytic_height}};
}

HeegnerSummary heegner_from(const json& j) {
  HeegnerSummary h;
  j.at("sign").get_to(h.sign);
  j.at("form_count").get_to(h.form_count);
  j.at("max_terms").get_to(h.max_terms);
  j.at("on_twist").get_to(h.on_twist);
  j.at("twist_d").get_to(h.twist_d);
  j.at("point_curve").get_to(h.point_curve);
  j.at("x").get_to(h.x);
  j.at("y").get_to(h.y);
  j.at("residual").get_to(h.residual);
  j.at("height").get_to(h.height);
  j.at("analytic_height").get_to(h.analytic_height);
  return h;
}

json local_json(const LocalSummary& l) {
  return {{"q", l.q},
          {"kodaira", l.kodaira},
          {"reduction", l.reduction},
          {"tamagawa", l.tamagawa},
          {"disc_valuation", l.disc_valuation},
          {"conductor_exponent", l.conductor_exponent},
          {"ord_p_tamagawa", l.ord_p_tamagawa}};
}

LocalSummary local_from(const json& j) {
  LocalSummary l;
  j.at("q").get_to(l.q);
  j.at("kodaira").get_to(l.kodaira);
  j.at("reduction").get_to(l.reduction);
  j.at("tamagawa").get_to(l.tamagawa);
  j.at("disc_valuation").get_to(l.disc_valuation);
  j.at("conductor_exponent").get_to(l.conductor_exponent);
  j.at("ord_p_tamagawa").get_to(l.ord_p_tamagawa);
  return l;
}

json report_json(const AnalysisReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["label"] = r.label;
  j["coefficients"] = r.coefficients;
  j["conductor"] = r.conductor;
  j["discriminant"] = r.discriminant;
  j["D"] = r.D;
  j["beta"] = r.beta;
  j["p"] = r.p;
  j["hypothesis_star"] = {{"status", r.hypothesis_star.status},
                          {"sample_bound", r.hypothesis_star.sample_bound},
                          {"witnesses", r.hypothesis_star.witnesses},
                          {"missing", r.hypothesis_star.missing}};
  j["heegner"] = heegner_json(r.heegner);
  j["generator"] = {{"x", r.generator.x},
                    {"y", r.generator.y},
                    {"provenance", r.generator.provenance},
                    {"height", r.generator.height}};
  j["m0"] = r.m0;
  j["index"] = {{"n", r.index.n},
                {"ratio", r.index.ratio},
                {"deviation", r.index.deviation},
                {"heegner_p_division_depth", r.index.heegner_p_division_depth}};
  j["local_data"] = json::array();
  for (const auto& l : r.local_data) j["local_data"].push_back(local_json(l));
  j["bounds"] = {{"m_max", r.bounds.m_max},
                 {"exponent_kolyvagin", r.bounds.exponent_kolyvagin},
                 {"exponent_improved", r.bounds.exponent_improved},
                 {"exponent_bsd", r.bounds.exponent_bsd},
                 {"m_infinity_lower", r.bounds.m_infinity_lower},
                 {"conjectured_m_infinity", r.bounds.conjectured_m_infinity}};
  j["kolyvagin_bound"] = r.kolyvagin_bound;
  j["kolyvagin_primes"] = json::array();
  for (const auto& [ell, M] : r.kolyvagin_primes) j["kolyvagin_primes"].push_back({{"ell", ell}, {"M", M}});
  if (r.distribution) {
    const auto& d = *r.distribution;
    j["distribution"] = {{"ell", d.ell},         {"a_ell", d.a_ell},       {"forms", d.forms},
                         {"digits", d.digits},   {"residual", d.residual}, {"passed", d.passed}};
  } else {
    j["distribution"] = nullptr;
  }
  j["precision_digits"] = r.precision_digits;
  j["config"] = r.config;
  j["caveats"] = r.caveats;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ComputationError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw ComputationError("write failed for " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ComputationError("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

std::string to_json(const AnalysisReport& r) { return report_json(r).dump(2) + "\n"; }

AnalysisReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    AnalysisReport r;
    j.at("schema_version").get_to(r.schema_version);
    if (r.schema_version != kReportSchemaVersion)
      throw ValidationError("unsupported schema_version " + std::to_string(r.schema_version));
    j.at("label").get_to(r.label);
    j.at("coefficients").get_to(r.coefficients);
    j.at("conductor").get_to(r.conductor);
    j.at("discriminant").get_to(r.discriminant);
    j.at("D").get_to(r.D);
    j.at("beta").get_to(r.beta);
    j.at("p").get_to(r.p);
    const auto& hs = j.at("hypothesis_star");
    hs.at("status").get_to(r.hypothesis_star.status);
    hs.at("sample_bound").get_to(r.hypothesis_star.sample_bound);
    hs.at("witnesses").get_to(r.hypothesis_star.witnesses);
    hs.at("missing").get_to(r.hypothesis_star.missing);
    r.heegner = heegner_from(j.at("heegner"));
    const auto& g = j.at("generator");
    g.at("x").get_to(r.generator.x);
    g.at("y").get_to(r.generator.y);
    g.at("provenance").get_to(r.generator.provenance);
    g.at("height").get_to(r.generator.height);
    j.at("m0").get_to(r.m0);
    const auto& ix = j.at("index");
    ix.at("n").get_to(r.index.n);
    ix.at("ratio").get_to(r.index.ratio);
    ix.at("deviation").get_to(r.index.deviation);
    ix.at("heegner_p_division_depth").get_to(r.index.heegner_p_division_depth);
    for (const auto& l : j.at("local_data")) r.local_data.push_back(local_from(l));
    const auto& b = j.at("bounds");
    b.at("m_max").get_to(r.bounds.m_max);
    b.at("exponent_kolyvagin").get_to(r.bounds.exponent_kolyvagin);
    b.at("exponent_improved").get_to(r.bounds.exponent_improved);
    b.at("exponent_bsd").get_to(r.bounds.exponent_bsd);
    b.at("m_infinity_lower").get_to(r.bounds.m_infinity_lower);
    b.at("conjectured_m_infinity").get_to(r.bounds.conjectured_m_infinity);
    j.at("kolyvagin_bound").get_to(r.kolyvagin_bound);
    for (const auto& k : j.at("kolyvagin_primes"))
      r.kolyvagin_primes.emplace_back(k.at("ell").get<std::uint64_t>(), k.at("M").get<int>());
    if (const auto& d = j.at("distribution"); !d.is_null()) {
      DistributionSummary ds;
      d.at("ell").get_to(ds.ell);
      d.at("a_ell").get_to(ds.a_ell);
      d.at("forms").get_to(ds.forms);
      d.at("digits").get_to(ds.digits);
      d.at("residual").get_to(ds.residual);
      d.at("passed").get_to(ds.passed);
      r.distribution = ds;
    }
    j.at("precision_digits").get_to(r.precision_digits);
    j.at("config").get_to(r.config);
    j.at("caveats").get_to(r.caveats);
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
}

std::string to_markdown(const AnalysisReport& r) {
  std::ostringstream o;
  o << "# " << r.label << ", D = " << r.D << ", p = " << r.p << "\n\n";
  o << "Model [" << r.coefficients[0];
  for (std::size_t i = 1; i < r.coefficients.size(); ++i) o << ", " << r.coefficients[i];
  o << "], conductor " << r.conductor << ", beta = " << r.beta << ".\n\n";
  o << "Mod-p image: " << r.hypothesis_star.status << " (primes up to " << r.hypothesis_star.sample_bound
    << ").\n\n";
  o << "Heegner point (sign " << (r.heegner.sign > 0 ? "+" : "-") << ", " << r.heegner.form_count
    << " forms): (" << r.heegner.x << ", " << r.heegner.y << ")";
  if (r.heegner.on_twist) o << " on the twist by " << r.heegner.twist_d;
  o << ", height " << r.heegner.height << ".\n\n";
  o << "Generator (" << r.generator.provenance << "): (" << r.generator.x << ", " << r.generator.y
    << "), index n = " << r.index.n << ", m0 = " << r.m0 << ".\n\n";
  o << "| q | Kodaira | reduction | c_q | ord_p c_q |\n|---|---|---|---|---|\n";
  for (const auto& l : r.local_data)
    o << "| " << l.q << " | " << l.kodaira << " | " << l.reduction << " | " << l.tamagawa << " | "
      << l.ord_p_tamagawa << " |\n";
  o << "\n## Bounds\n\n| bound | exponent of p |\n|---|---|\n";
  o << "| Kolyvagin, 2 m0 | " << r.bounds.exponent_kolyvagin << " |\n";
  o << "| improved, 2 m0 - 2 m_max | " << r.bounds.exponent_improved << " |\n";
  o << "| BSD prediction, 2 (m0 - sum ord_p c_q) | " << r.bounds.exponent_bsd << " |\n\n";
  o << "m_infinity >= m_max = " << r.bounds.m_infinity_lower
    << "; conjecturally m_infinity = " << r.bounds.conjectured_m_infinity << ".\n\n";
  o << "Kolyvagin primes up to " << r.kolyvagin_bound << ": " << r.kolyvagin_primes.size();
  if (!r.kolyvagin_primes.empty()) o << ", smallest " << r.kolyvagin_primes.front().first;
  o << ".\n";
  if (r.distribution)
    o << "Distribution relation at l = " << r.distribution->ell << ": residual " << r.distribution->residual
      << ".\n";
  o << "\n## Caveats\n\n";
  for (const auto& c : r.caveats) o << "- " << c << "\n";
  return o.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string report_key(const AnalysisReport& r) {
  json in = {{"label", r.label}, {"coefficients", r.coefficients}, {"D", r.D}, {"p", r.p}, {"config", r.config}};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(in.dump())));
  return buf;
}

std::filesystem::path emit_report(const AnalysisReport& r, ReportFormat format, const std::filesystem::path& dir) {
  ensure_dir(dir);
  const auto path = dir / (report_key(r) + (format == ReportFormat::json ? ".json" : ".md"));
  write_file(path, format == ReportFormat::json ? to_json(r) : to_markdown(r));
  return path;
}

std::filesystem::path emit_timing(const AnalysisReport& r, const AnalysisTiming& t, const std::filesystem::path& dir) {
  ensure_dir(dir);
  json j;
  j["key"] = report_key(r);
  json stages = json::object();
  char buf[32];
  for (const auto& [name, s] : t.stages) {
    std::snprintf(buf, sizeof buf, "%.3f", s);
    stages[name] = buf;
  }
  j["stages_seconds"] = stages;
  std::snprintf(buf, sizeof buf, "%.3f", t.total());
  j["total_seconds"] = buf;
  const auto path = dir / (report_key(r) + ".timing.json");
  write_file(path, j.dump(2) + "\n");
  return path;
}

}  // namespace hb
