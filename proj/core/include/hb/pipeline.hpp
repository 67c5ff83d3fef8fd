#pragma once

// Curve-table ingestion, configuration and the end-to-end analysis that
// turns (E, D, p) into an AnalysisReport.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hb/curve.hpp"
#include "hb/kolyvagin.hpp"

namespace hb {

struct CurveRecord {
  std::string label;
  Coefficients a;
  std::optional<RationalPoint> generator;
  std::string notes;
  std::size_t line = 0;
};

struct IngestResult {
  std::vector<CurveRecord> records;
  std::vector<std::string> errors;  // "line N: message"
};

/// One JSON object per line: {"label", "a": [a1..a6], "generator":
/// [x_num, x_den, y_num, y_den], "notes"}. Blank lines are skipped.
CurveRecord parse_curve_record(const std::string& json_line);
IngestResult parse_curves(std::istream& in);
/// Throws ValidationError if the file cannot be read.
IngestResult ingest_curves(const std::filesystem::path& path);
/// Looks a label up; throws ValidationError if absent.
const CurveRecord& find_record(const IngestResult& table, const std::string& label);

/// "x_num/x_den,y_num/y_den" or "x,y".
RationalPoint parse_point(const std::string& text);

struct Config {
  int precision_digits = 80;
  long qseries_max_terms = 0;  // 0: no cap
  std::uint64_t sieve_bound = 100000;
  long search_height_bound = 60;
  std::uint64_t seed = 1;
  bool allow_unverified_hypothesis = false;
  std::uint64_t image_sample_bound = 2000;
  unsigned workers = 1;

  /// Applies one "key = value" setting; throws ValidationError on unknown keys
  /// or malformed values.
  void set(const std::string& key, const std::string& value);
  /// Key-value view of every setting that influences report content.
  [[nodiscard]] std::map<std::string, std::string> entries() const;
};

/// Reads "key = value" lines; '#' starts a comment.
Config load_config(const std::filesystem::path& path, Config base = {});

struct HeegnerSummary {
  int sign = 0;
  std::size_t form_count = 0;
  long max_terms = 0;
  bool on_twist = false;
  std::string twist_d = "1";
  std::vector<std::string> point_curve;  // a1..a6 of the curve holding the point
  std::string x, y;
  std::string residual, height, analytic_height;
  friend bool operator==(const HeegnerSummary&, const HeegnerSummary&) = default;
};

struct GeneratorSummary {
  std::string x, y;
  std::string provenance;  // "record" or "search"
  std::string height;
  friend bool operator==(const GeneratorSummary&, const GeneratorSummary&) = default;
};

struct IndexSummary {
  std::string n, ratio, deviation;
  int heegner_p_division_depth = 0;  // analytic cross-check of m0
  friend bool operator==(const IndexSummary&, const IndexSummary&) = default;
};

struct LocalSummary {
  std::uint64_t q = 0;
  std::string kodaira, reduction;
  int tamagawa = 1, disc_valuation = 0, conductor_exponent = 0, ord_p_tamagawa = 0;
  friend bool operator==(const LocalSummary&, const LocalSummary&) = default;
};

struct DistributionSummary {
  std::uint64_t ell = 0;
  std::int64_t a_ell = 0;
  std::size_t forms = 0;
  int digits = 0;
  std::string residual;
  bool passed = false;
  friend bool operator==(const DistributionSummary&, const DistributionSummary&) = default;
};

struct ImageSummary {
  std::string status;
  std::uint64_t sample_bound = 0;
  std::map<std::string, std::uint64_t> witnesses;
  std::vector<std::string> missing;
  friend bool operator==(const ImageSummary&, const ImageSummary&) = default;
};

struct BoundsSummary {
  int m_max = 0, exponent_kolyvagin = 0, exponent_improved = 0, exponent_bsd = 0, m_infinity_lower = 0;
  /// Conjectured value of m_infinity, ord_p of the product of the c_q.
  int conjectured_m_infinity = 0;
  friend bool operator==(const BoundsSummary&, const BoundsSummary&) = default;
};

inline constexpr int kReportSchemaVersion = 1;

struct AnalysisReport {
  int schema_version = kReportSchemaVersion;
  std::string label;
  std::vector<std::string> coefficients;
  std::string conductor, discriminant;
  std::int64_t D = 0, beta = 0;
  std::uint64_t p = 0;
  ImageSummary hypothesis_star;
  HeegnerSummary heegner;
  GeneratorSummary generator;
  int m0 = 0;
  IndexSummary index;
  std::vector<LocalSummary> local_data;
  BoundsSummary bounds;
  std::uint64_t kolyvagin_bound = 0;
  std::vector<std::pair<std::uint64_t, int>> kolyvagin_primes;  // (l, M(l))
  std::optional<DistributionSummary> distribution;
  int precision_digits = 0;
  std::map<std::string, std::string> config;
  std::vector<std::string> caveats;
  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

/// Wall-clock seconds per stage; kept out of the report so reports stay
/// byte-stable.
struct AnalysisTiming {
  std::vector<std::pair<std::string, double>> stages;
  [[nodiscard]] double total() const;
};

/// Full analysis. Throws ValidationError for bad inputs (non-Heegner D,
/// p | N D, ...), ComputationError when recognition or the index check fails,
/// HypothesisError when the mod-p image is not certified surjective and the
/// config does not allow it.
AnalysisReport analyze(const CurveRecord& record, std::int64_t D, std::uint64_t p, const Config& config,
                       AnalysisTiming* timing = nullptr);

/// Heegner discriminants D > 4 for N, prime to p, ascending, up to bound.
std::vector<std::int64_t> candidate_discriminants(const EllipticCurveQ& e, std::uint64_t p, std::int64_t bound);

/// Runs analyze on candidate_discriminants(bound) in order and returns the
/// first success. Validation and hypothesis errors propagate at once;
/// computation errors (torsion Heegner point, failed recognition) move on to
/// the next D, up to `attempts` of them.
AnalysisReport analyze_first_discriminant(const CurveRecord& record, std::uint64_t p, const Config& config,
                                          std::int64_t bound = 300, int attempts = 6,
                                          AnalysisTiming* timing = nullptr);

/// 0 success, 2 validation, 3 computation, 4 hypothesis, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace hb
