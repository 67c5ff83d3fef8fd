// heegner-bound: command-line front end for the analysis pipeline.

#include <algorithm>
#include <atomic>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hb/errors.hpp"
#include "hb/finite_model.hpp"
#include "hb/galois_image.hpp"
#include "hb/heegner.hpp"
#include "hb/kolyvagin.hpp"
#include "hb/pipeline.hpp"
#include "hb/report.hpp"
#include "hb/selmer.hpp"

using nlohmann::json;

namespace {

struct Common {
  std::string curve_file = "data/curves.jsonl";
  std::string label;
  std::string config_file;
  std::optional<int> precision;
  std::optional<std::uint64_t> sieve_bound, seed, image_sample_bound;
  std::optional<long> search_height_bound, qseries_max_terms;
  std::optional<unsigned> workers;
  bool allow_unverified = false;
};

void add_curve_options(CLI::App* app, Common& c, bool need_label = true) {
  app->add_option("--curve-file", c.curve_file, "JSON-lines curve table")->capture_default_str();
  if (need_label) app->add_option("--label", c.label, "Curve label in the table")->required();
}

void add_config_options(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_file, "key = value configuration file");
  app->add_option("--precision", c.precision, "Working precision in decimal digits");
  app->add_option("--sieve-bound", c.sieve_bound, "Search bound for Kolyvagin primes");
  app->add_option("--search-height-bound", c.search_height_bound, "Naive height bound for generator search");
  app->add_option("--qseries-max-terms", c.qseries_max_terms, "Refuse q-series longer than this (0: no cap)");
  app->add_option("--image-sample-bound", c.image_sample_bound, "Frobenius sampling bound for the image test");
  app->add_option("--seed", c.seed, "Seed for randomized steps");
  app->add_option("--workers", c.workers, "Worker threads");
  app->add_flag("--allow-unverified-hypothesis", c.allow_unverified,
                "Continue when the mod-p image is not certified surjective");
}

hb::Config make_config(const Common& c) {
  hb::Config cfg;
  if (!c.config_file.empty()) cfg = hb::load_config(c.config_file);
  if (c.precision) cfg.set("precision_digits", std::to_string(*c.precision));
  if (c.sieve_bound) cfg.sieve_bound = *c.sieve_bound;
  if (c.search_height_bound) cfg.set("search_height_bound", std::to_string(*c.search_height_bound));
  if (c.qseries_max_terms) cfg.set("qseries_max_terms", std::to_string(*c.qseries_max_terms));
  if (c.image_sample_bound) cfg.image_sample_bound = *c.image_sample_bound;
  if (c.seed) cfg.seed = *c.seed;
  if (c.workers) cfg.set("workers", std::to_string(*c.workers));
  if (c.allow_unverified) cfg.allow_unverified_hypothesis = true;
  return cfg;
}

hb::IngestResult load_table(const Common& c) {
  hb::IngestResult t = hb::ingest_curves(c.curve_file);
  for (const auto& err : t.errors) std::cerr << c.curve_file << ": " << err << "\n";
  return t;
}

hb::EllipticCurveQ load_curve(const Common& c) {
  const auto t = load_table(c);
  const auto& r = hb::find_record(t, c.label);
  return hb::EllipticCurveQ(r.a, r.label);
}

std::string dec(const hb::Real& x, int sig) { return x.to_string(sig); }

json point_json(const hb::RationalPoint& pt) {
  if (pt.infinity) return "infinity";
  return {{"x", hb::to_string(pt.x)}, {"y", hb::to_string(pt.y)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heegner points, Kolyvagin primes and p-primary Sha bounds for rank-one curves"};
  app.require_subcommand(1);
  Common common;

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Full analysis of (E, D, p); writes a report");
  std::int64_t D = 0;
  std::uint64_t p = 0;
  std::string generator_text, out_dir = "reports", format = "json";
  bool auto_d = false;
  add_curve_options(analyze, common);
  add_config_options(analyze, common);
  analyze->add_option("-D", D, "Heegner discriminant (positive D for K = Q(sqrt(-D)))");
  analyze->add_flag("--auto-D", auto_d, "Pick the first usable Heegner discriminant");
  analyze->add_option("-p", p, "Odd prime of good reduction")->required();
  analyze->add_option("--generator", generator_text, "Generator x_n/x_d,y_n/y_d overriding the table");
  analyze->add_option("--out", out_dir, "Output directory")->capture_default_str();
  analyze->add_option("--format", format, "json, markdown or both")
      ->check(CLI::IsMember({"json", "markdown", "both"}))
      ->capture_default_str();

  // sieve
  auto* sieve = app.add_subcommand("sieve", "List Kolyvagin primes for (E, D, p)");
  std::uint64_t bound = 1000;
  add_curve_options(sieve, common);
  sieve->add_option("-D", D)->required();
  sieve->add_option("-p", p)->required();
  sieve->add_option("--bound", bound)->capture_default_str();

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Sha exponents from m0 and Tamagawa data");
  int m0 = 0;
  add_curve_options(bounds, common);
  bounds->add_option("-p", p)->required();
  bounds->add_option("--m0", m0, "ord_p of the Heegner index")->required();

  // heegner-point
  auto* hpoint = app.add_subcommand("heegner-point", "Compute and recognize y_K");
  add_curve_options(hpoint, common);
  add_config_options(hpoint, common);
  hpoint->add_option("-D", D)->required();

  // verify-distribution
  auto* vdist = app.add_subcommand("verify-distribution", "Check the trace relation at a prime l");
  std::uint64_t ell = 0;
  add_curve_options(vdist, common);
  add_config_options(vdist, common);
  vdist->add_option("-D", D)->required();
  vdist->add_option("--ell", ell)->required();

  // chi-ell
  auto* chi = app.add_subcommand("chi-ell", "Verify chi_l for every Kolyvagin prime up to a bound");
  add_curve_options(chi, common);
  chi->add_option("-D", D)->required();
  chi->add_option("-p", p)->required();
  chi->add_option("--bound", bound)->capture_default_str();

  // galois-image
  auto* gimage = app.add_subcommand("galois-image", "One-sided surjectivity test for the mod-p image");
  std::uint64_t sample_bound = 2000;
  add_curve_options(gimage, common);
  gimage->add_option("-p", p)->required();
  gimage->add_option("--sample-bound", sample_bound)->capture_default_str();

  // selmer-lab
  auto* lab = app.add_subcommand("selmer-lab", "Duality, lozenge and stringent-replay checks on synthetic models");
  std::uint64_t pm = 3, lab_seed = 1;
  int places = 2;
  long trials = 1000;
  lab->add_option("--pm", pm, "p^m with p odd")->capture_default_str();
  lab->add_option("--places", places)->capture_default_str();
  lab->add_option("--trials", trials)->capture_default_str();
  lab->add_option("--seed", lab_seed)->capture_default_str();

  // batch
  auto* batch = app.add_subcommand("batch", "Analyze many (curve, p) pairs in parallel");
  std::vector<std::uint64_t> primes;
  std::vector<std::string> labels;
  add_curve_options(batch, common, false);
  add_config_options(batch, common);
  batch->add_option("--primes", primes, "Primes p to try for each curve")->required();
  batch->add_option("--labels", labels, "Restrict to these labels");
  batch->add_option("--out", out_dir, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      const hb::Config cfg = make_config(common);
      const auto table = load_table(common);
      hb::CurveRecord rec = hb::find_record(table, common.label);
      if (!generator_text.empty()) {
        rec.generator = hb::parse_point(generator_text);
        if (!hb::EllipticCurveQ(rec.a).contains(*rec.generator))
          throw hb::ValidationError("--generator is not on " + rec.label);
      }
      if (!auto_d && D == 0) throw hb::ValidationError("give -D or --auto-D");
      hb::AnalysisTiming timing;
      const hb::AnalysisReport rep =
          auto_d ? hb::analyze_first_discriminant(rec, p, cfg, 300, 6, &timing) : hb::analyze(rec, D, p, cfg, &timing);
      if (format != "markdown") std::cout << hb::emit_report(rep, hb::ReportFormat::json, out_dir).string() << "\n";
      if (format != "json") std::cout << hb::emit_report(rep, hb::ReportFormat::markdown, out_dir).string() << "\n";
      hb::emit_timing(rep, timing, out_dir);
      std::cerr << rep.label << " D=" << rep.D << " p=" << rep.p << ": m0=" << rep.m0
                << " exponents kolyvagin/improved/bsd = " << rep.bounds.exponent_kolyvagin << "/"
                << rep.bounds.exponent_improved << "/" << rep.bounds.exponent_bsd << " (" << timing.total()
                << " s)\n";
    } else if (*sieve) {
      const auto e = load_curve(common);
      json out = json::array();
      for (const auto& k : hb::find_kolyvagin_primes(e, D, p, bound))
        out.push_back({{"ell", k.ell}, {"a_ell", k.a_ell}, {"M", k.M}});
      std::cout << out.dump(2) << "\n";
    } else if (*bounds) {
      const auto e = load_curve(common);
      const auto b = hb::sha_bounds(m0, e.bad_primes(), p);
      json tv = json::object();
      for (const auto& [q, v] : b.tamagawa_valuations) tv[std::to_string(q)] = v;
      std::cout << json{{"p", b.p},
                        {"m0", b.m0},
                        {"tamagawa_valuations", tv},
                        {"m_max", b.m_max},
                        {"exponent_kolyvagin", b.exponent_kolyvagin},
                        {"exponent_improved", b.exponent_improved},
                        {"exponent_bsd", b.exponent_bsd},
                        {"m_infinity_lower", b.m_infinity_lower}}
                       .dump(2)
                << "\n";
    } else if (*hpoint) {
      const hb::Config cfg = make_config(common);
      const auto e = load_curve(common);
      const auto r = hb::heegner_point(hb::make_heegner_setup(e, D), cfg.precision_digits, cfg.workers);
      json out{{"D", r.D},
               {"beta", r.beta},
               {"forms", r.form_count},
               {"max_terms", r.max_terms},
               {"sign", r.sign},
               {"recognized", r.recognized}};
      if (r.recognized) {
        out["on_twist"] = r.on_twist;
        out["twist_d"] = hb::to_string(r.twist_d);
        out["point_curve"] = r.point_curve->to_string();
        out["point"] = point_json(r.point);
        out["height"] = dec(r.height, 30);
        out["residual"] = dec(r.residual, 6);
      } else {
        out["failure"] = r.failure;
      }
      std::cout << out.dump(2) << "\n";
      if (!r.recognized) return 3;
    } else if (*vdist) {
      const hb::Config cfg = make_config(common);
      const auto e = load_curve(common);
      const auto c = hb::verify_distribution(hb::make_heegner_setup(e, D), ell, cfg.precision_digits, cfg.workers);
      const bool ok = c.residual < hb::ten_pow_neg(cfg.precision_digits / 2, cfg.precision_digits);
      std::cout << json{{"ell", c.ell},
                        {"a_ell", c.a_ell},
                        {"forms_level_ell", c.forms_level_ell},
                        {"max_terms", c.max_terms},
                        {"residual", dec(c.residual, 6)},
                        {"passed", ok}}
                       .dump(2)
                << "\n";
      if (!ok) return 3;
    } else if (*chi) {
      const auto e = load_curve(common);
      json out = json::array();
      bool all = true;
      for (const auto& k : hb::find_kolyvagin_primes(e, D, p, bound)) {
        const auto v = hb::verify_chi_ell(e, k.ell, p);
        all = all && v.passed();
        out.push_back({{"ell", v.ell},
                       {"M", v.M},
                       {"exhaustive", v.exhaustive},
                       {"plus_order", hb::to_string(v.split.plus_order)},
                       {"minus_order", hb::to_string(v.split.minus_order)},
                       {"kernel_matches", v.kernel_matches},
                       {"passed", v.passed()}});
      }
      std::cout << out.dump(2) << "\n";
      if (!all) return 3;
    } else if (*gimage) {
      const auto e = load_curve(common);
      const auto v = hb::mod_p_image_surjective(e, p, sample_bound);
      std::cout << json{{"p", v.p},
                        {"status", hb::to_string(v.status)},
                        {"sample_bound", v.sample_bound},
                        {"witnesses", v.witnesses},
                        {"missing", v.missing}}
                       .dump(2)
                << "\n";
      if (v.status != hb::ImageStatus::surjective) return 4;
    } else if (*lab) {
      const auto r = hb::run_selmer_lab(pm, places, trials, lab_seed);
      std::cout << json{{"p", r.p},
                        {"m", r.m},
                        {"places", r.places},
                        {"exhaustive", r.exhaustive},
                        {"seed", r.seed},
                        {"models", r.models},
                        {"duality", {{"checks", r.duality_checks}, {"failures", r.duality_failures}}},
                        {"lozenge", {{"checks", r.lozenge_checks}, {"failures", r.lozenge_failures}}},
                        {"replay", {{"checks", r.replay_checks}, {"failures", r.replay_failures}}},
                        {"failure_samples", r.failures},
                        {"passed", r.passed()}}
                       .dump(2)
                << "\n";
      if (!r.passed()) return 3;
    } else if (*batch) {
      const hb::Config cfg = make_config(common);
      const auto table = load_table(common);
      std::vector<const hb::CurveRecord*> recs;
      for (const auto& r : table.records)
        if (labels.empty() || std::find(labels.begin(), labels.end(), r.label) != labels.end()) recs.push_back(&r);
      struct Task {
        const hb::CurveRecord* rec;
        std::uint64_t p;
      };
      std::vector<Task> tasks;
      for (const auto* r : recs)
        for (auto q : primes) tasks.push_back({r, q});
      std::vector<std::string> lines(tasks.size());
      std::vector<int> codes(tasks.size(), 0);
      std::atomic<std::size_t> next{0};
      hb::Config task_cfg = cfg;
      task_cfg.workers = 1;
      auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
          const auto& t = tasks[i];
          std::string head = t.rec->label + " p=" + std::to_string(t.p);
          try {
            const auto rep = hb::analyze_first_discriminant(*t.rec, t.p, task_cfg);
            const auto path = hb::emit_report(rep, hb::ReportFormat::json, out_dir);
            lines[i] = head + " D=" + std::to_string(rep.D) + " m0=" + std::to_string(rep.m0) +
                       " exponents=" + std::to_string(rep.bounds.exponent_kolyvagin) + "/" +
                       std::to_string(rep.bounds.exponent_improved) + "/" + std::to_string(rep.bounds.exponent_bsd) +
                       " " + path.string();
          } catch (const std::exception& e) {
            codes[i] = hb::exit_code_for(e);
            lines[i] = head + " error(" + std::to_string(codes[i]) + "): " + e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < std::max(1U, cfg.workers); ++w) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
      for (const auto& l : lines) std::cout << l << "\n";
      for (int c : codes)
        if (c == 2 || c == 1) return c;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hb::exit_code_for(e);
  }
  return 0;
}
