#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "service_rag/eval.hpp"

namespace service_rag {

enum class ReportFormat { csv, markdown, json };

/// "csv", "md", "json".
std::string_view file_extension(ReportFormat format);

// Column order follows the published tables. Similarities and distances use
// two decimals, retrieval proportions whole percents. CSV is RFC 4180 with
// "\n" line endings; JSON keeps full precision.

/// Incident | # Words Original | # Errors | # Words Final | # Errors Removed
std::string render_report(const CorrectionReport& report, ReportFormat format);

/// One row per incident: CS <target>..., Min <target>..., Words <target>...
/// for every target present (ascending).
std::string render_report(const SummaryReport& report, ReportFormat format);

/// One row per k: Number of Chunks in Vector Search | Average Proportion of
/// Relevant Chunks.
std::string render_report(std::span<const RetrievalEvalReport> reports, ReportFormat format);

/// Rows are incidents, columns are queries.
std::string render_report(const AnswerDistanceMatrix& matrix, ReportFormat format);

/// Writes `<stem>.csv`, `<stem>.md` and `<stem>.json` into `out_dir`, each
/// atomically. All three are rendered before anything is written.
template <typename Report>
void write_report_files(const std::filesystem::path& out_dir, std::string_view stem, const Report& report);

void write_rendered_reports(const std::filesystem::path& out_dir, std::string_view stem, const std::string& csv,
                            const std::string& markdown, const std::string& json);

template <typename Report>
void write_report_files(const std::filesystem::path& out_dir, std::string_view stem, const Report& report) {
    write_rendered_reports(out_dir, stem, render_report(report, ReportFormat::csv),
                           render_report(report, ReportFormat::markdown), render_report(report, ReportFormat::json));
}

/// RFC 4180 field quoting.
std::string csv_escape(std::string_view field);

/// Fixed two decimals, never "-0.00".
std::string format_2dp(double v);

/// Whole percent, e.g. 0.95 -> "95%".
std::string format_percent(double proportion);

}  // namespace service_rag
