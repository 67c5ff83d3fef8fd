#pragma once

// Stable JSON and markdown renderings of AnalysisReport and their
// persistence under a content-hashed file name.

#include <cstdint>
#include <filesystem>
#include <string>

#include "hb/pipeline.hpp"

namespace hb {

enum class ReportFormat { json, markdown };

/// Sorted keys, two-space indent, reals as decimal strings, trailing newline.
std::string to_json(const AnalysisReport& r);
/// Inverse of to_json; throws ValidationError on schema mismatch.
AnalysisReport report_from_json(const std::string& text);
std::string to_markdown(const AnalysisReport& r);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);
/// 16 hex digits hashing the inputs that determine the report: model, label,
/// D, p and the content-relevant config entries.
std::string report_key(const AnalysisReport& r);

/// Writes <dir>/<key>.json or <dir>/<key>.md, creating dir. Returns the path;
/// throws ComputationError with the path on I/O failure.
std::filesystem::path emit_report(const AnalysisReport& r, ReportFormat format, const std::filesystem::path& dir);
/// Writes <dir>/<key>.timing.json next to the report.
std::filesystem::path emit_timing(const AnalysisReport& r, const AnalysisTiming& t, const std::filesystem::path& dir);

}  // namespace hb
