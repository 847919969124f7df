#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "service_rag/report.hpp"

using namespace service_rag;
namespace fx = service_rag::testing;

namespace {

template <typename Report>
void expect_golden(const Report& report, const std::string& stem) {
    for (auto format : {ReportFormat::csv, ReportFormat::markdown, ReportFormat::json}) {
        const auto name = stem + "." + std::string(file_extension(format));
        EXPECT_EQ(render_report(report, format), fx::read_golden(name)) << name;
    }
}

}  // namespace

TEST(ReportGolden, Correction) { expect_golden(fx::sample_correction_report(), "correction"); }
TEST(ReportGolden, Summaries) { expect_golden(fx::sample_summary_report(), "summaries"); }
TEST(ReportGolden, Retrieval) {
    const auto reports = fx::sample_retrieval_reports();
    expect_golden(std::span<const RetrievalEvalReport>(reports), "retrieval");
}
TEST(ReportGolden, AnswerMatrix) { expect_golden(fx::sample_answer_matrix(), "answers_matrix"); }

TEST(Report, RetrievalRowIsWholePercent) {
    const std::vector<RetrievalEvalReport> r{{2, {}, 0.95}};
    const auto md = render_report(std::span<const RetrievalEvalReport>(r), ReportFormat::markdown);
    EXPECT_NE(md.find("| 2 | 95% |\n"), std::string::npos);
}

TEST(Report, EmptyCorrectionIsHeaderOnly) {
    EXPECT_EQ(render_report(CorrectionReport{}, ReportFormat::csv),
              "Incident,# Words Original,# Errors,# Words Final,# Errors Removed\n");
}

TEST(Report, MatrixCsvShape) {
    const auto csv = render_report(fx::sample_answer_matrix(), ReportFormat::csv);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Report, NanRendersAsNull) {
    auto m = fx::sample_answer_matrix();
    m.nearest_offdiagonal_mean = std::nan("");
    EXPECT_NE(render_report(m, ReportFormat::json).find("\"nearest_offdiagonal_mean\": null"), std::string::npos);
    EXPECT_NE(render_report(m, ReportFormat::markdown).find("Nearest off-diagonal mean: n/a"), std::string::npos);
}

TEST(Report, DistinctReportsRenderDistinctly) {
    auto a = fx::sample_correction_report();
    auto b = a;
    b.rows[1].errors_removed = 13;
    for (auto f : {ReportFormat::csv, ReportFormat::markdown, ReportFormat::json}) {
        EXPECT_NE(render_report(a, f), render_report(b, f));
    }
    auto m1 = fx::sample_answer_matrix();
    auto m2 = m1;
    m2.cells[0][1] = 0.91;
    EXPECT_NE(render_report(m1, ReportFormat::csv), render_report(m2, ReportFormat::csv));
}

TEST(Report, Helpers) {
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
    EXPECT_EQ(format_2dp(-0.001), "0.00");
    EXPECT_EQ(format_2dp(0.005), "0.01");
    EXPECT_EQ(format_2dp(std::nan("")), "n/a");
    EXPECT_EQ(format_percent(0.8666), "87%");
    EXPECT_EQ(format_percent(1.0), "100%");
    EXPECT_EQ(format_percent(0.0), "0%");
}
