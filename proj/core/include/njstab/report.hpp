#pragma once

#include <iosfwd>
#include <string>

#include "njstab/scenario.hpp"

namespace njstab {

enum class ReportFormat { Json, CsvTables, TextSummary };

ReportFormat report_format_from_string(const std::string& tag);

/// JSON is the canonical lossless format: parse_report(render(r)) == r.
/// Infinite values are serialized as the string "inf" (documented in
/// docs/report-schema.md). Key order is alphabetical and floats use
/// shortest round-trip notation, so identical reports render to identical
/// bytes.
std::string render_report(const Report& report, ReportFormat format);
Report parse_report(const std::string& json_text);

/// Writes to `path` ("-" means stdout). IoError carries the path.
void emit_report(const Report& report, ReportFormat format,
                 const std::string& path);

std::string render_defect_stats(const DefectStats& stats, ReportFormat format);
std::string render_correct_only(const CorrectOnly& result, ReportFormat format);

/// Serialized form of a config (used for the report echo).
std::string render_config(const ScenarioConfig& config);

}  // namespace njstab
