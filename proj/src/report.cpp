#include "service_rag/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "service_rag/fs_util.hpp"

namespace service_rag {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view file_extension(ReportFormat format) {
    switch (format) {
        case ReportFormat::csv: return "csv";
        case ReportFormat::markdown: return "md";
        case ReportFormat::json: return "json";
    }
    return "txt";
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_2dp(double v) {
    if (std::isnan(v)) return "n/a";
    auto s = fmt::format("{:.2f}", v);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string format_percent(double proportion) { return fmt::format("{}%", std::lround(proportion * 100.0)); }

namespace {

using Row = std::vector<std::string>;

std::string markdown_escape(std::string_view cell) {
    std::string out;
    for (char c : cell) {
        if (c == '|') out += '\\';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out;
}

std::string render_table(const Row& header, const std::vector<Row>& rows, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::csv) {
        auto line = [&](const Row& r) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i > 0) out += ',';
                out += csv_escape(r[i]);
            }
            out += '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return out;
    }
    auto line = [&](const Row& r) {
        out += '|';
        for (const auto& cell : r) out += ' ' + markdown_escape(cell) + " |";
        out += '\n';
    };
    line(header);
    out += '|';
    for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
    out += '\n';
    for (const auto& r : rows) line(r);
    return out;
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

void write_rendered_reports(const std::filesystem::path& out_dir, std::string_view stem, const std::string& csv,
                            const std::string& markdown, const std::string& json_text) {
    const std::string base(stem);
    write_file_atomic(out_dir / (base + ".csv"), csv);
    write_file_atomic(out_dir / (base + ".md"), markdown);
    write_file_atomic(out_dir / (base + ".json"), json_text);
}

std::string render_report(const CorrectionReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : report.rows) {
            rows.push_back({{"incident_id", r.incident_id},
                            {"words_original", r.words_original},
                            {"errors_injected", r.errors_injected},
                            {"words_final", r.words_final},
                            {"errors_removed", r.errors_removed}});
        }
        return dump({{"rows", rows}});
    }
    const Row header = {"Incident", "# Words Original", "# Errors", "# Words Final", "# Errors Removed"};
    std::vector<Row> rows;
    for (const auto& r : report.rows) {
        rows.push_back({r.incident_id, std::to_string(r.words_original), std::to_string(r.errors_injected),
                        std::to_string(r.words_final), std::to_string(r.errors_removed)});
    }
    return render_table(header, rows, format);
}

std::string render_report(const SummaryReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : report.rows) {
            rows.push_back({{"incident_id", r.incident_id},
                            {"target_words", r.target_words},
                            {"summary_words", r.summary_words},
                            {"cs", number_or_null(r.cs)},
                            {"time_saved_min", number_or_null(r.time_saved_min)}});
        }
        return dump({{"rows", rows}});
    }

    std::set<std::size_t> target_set;
    std::vector<std::string> incidents;
    for (const auto& r : report.rows) {
        target_set.insert(r.target_words);
        if (std::find(incidents.begin(), incidents.end(), r.incident_id) == incidents.end()) {
            incidents.push_back(r.incident_id);
        }
    }
    const std::vector<std::size_t> targets(target_set.begin(), target_set.end());

    Row header = {"Incident"};
    for (auto t : targets) header.push_back(fmt::format("CS {}", t));
    for (auto t : targets) header.push_back(fmt::format("Min {}", t));
    for (auto t : targets) header.push_back(fmt::format("Words {}", t));

    std::vector<Row> rows;
    for (const auto& inc : incidents) {
        Row row(1 + 3 * targets.size());
        row[0] = inc;
        for (const auto& r : report.rows) {
            if (r.incident_id != inc) continue;
            const auto col = static_cast<std::size_t>(std::find(targets.begin(), targets.end(), r.target_words) -
                                                      targets.begin());
            row[1 + col] = format_2dp(r.cs);
            row[1 + targets.size() + col] = format_2dp(r.time_saved_min);
            row[1 + 2 * targets.size() + col] = std::to_string(r.summary_words);
        }
        rows.push_back(std::move(row));
    }
    return render_table(header, rows, format);
}

std::string render_report(std::span<const RetrievalEvalReport> reports, ReportFormat format) {
    if (format == ReportFormat::json) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : reports) {
            rows.push_back({{"k", r.k},
                            {"average_proportion", r.average_proportion},
                            {"per_query_relevant_fraction", r.per_query_relevant_fraction}});
        }
        return dump({{"rows", rows}});
    }
    const Row header = {"Number of Chunks in Vector Search", "Average Proportion of Relevant Chunks"};
    std::vector<Row> rows;
    for (const auto& r : reports) rows.push_back({std::to_string(r.k), format_percent(r.average_proportion)});
    return render_table(header, rows, format);
}

std::string render_report(const AnswerDistanceMatrix& m, ReportFormat format) {
    if (format == ReportFormat::json) {
        ordered_json cells = ordered_json::array();
        for (const auto& row : m.cells) {
            ordered_json r = ordered_json::array();
            for (double v : row) r.push_back(number_or_null(v));
            cells.push_back(std::move(r));
        }
        return dump({{"incident_ids", m.incident_ids},
                     {"query_ids", m.query_ids},
                     {"truth_incident_ids", m.truth_incident_ids},
                     {"cells", cells},
                     {"diagonal_mean", number_or_null(m.diagonal_mean)},
                     {"nearest_offdiagonal_mean", number_or_null(m.nearest_offdiagonal_mean)}});
    }
    Row header = {"Original Request"};
    header.insert(header.end(), m.query_ids.begin(), m.query_ids.end());
    std::vector<Row> rows;
    for (std::size_t r = 0; r < m.incident_ids.size(); ++r) {
        Row row = {m.incident_ids[r]};
        for (double v : m.cells[r]) row.push_back(format_2dp(v));
        rows.push_back(std::move(row));
    }
    auto out = render_table(header, rows, format);
    if (format == ReportFormat::markdown) {
        out += "\nDiagonal mean: " + format_2dp(m.diagonal_mean) + "\n";
        out += "Nearest off-diagonal mean: " + format_2dp(m.nearest_offdiagonal_mean) + "\n";
    }
    return out;
}

}  // namespace service_rag
