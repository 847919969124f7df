#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>
#include "service_rag/embedder.hpp"
#include <unistd.h>

namespace service_rag::testing {

namespace fs = std::filesystem;

std::string synthetic_word(std::size_t n) {
    static constexpr std::string_view consonants = "bdfgklmnprstvz";
    static constexpr std::string_view vowels = "aeiou";
    const std::size_t syllables = consonants.size() * vowels.size();
    auto syllable = [&](std::size_t s) {
        return std::string{consonants[s / vowels.size()], vowels[s % vowels.size()]};
    };
    return syllable(n / syllables % syllables) + syllable(n % syllables) + "x";
}

const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> words = {"please", "help", "urgent", "again", "today"};
    return words;
}

namespace {

// Every fixture word, filler word and "." lands in its own mock-embedder
// bucket, so similarities between different incidents are exactly zero.
const std::vector<std::string>& vocabulary_pool() {
    static const std::vector<std::string> pool = [] {
        std::vector<bool> used(MockEmbedder::kDim, false);
        used[fnv1a64(".") % MockEmbedder::kDim] = true;
        for (const auto& w : filler_words()) used[fnv1a64(w) % MockEmbedder::kDim] = true;
        std::vector<std::string> words;
        for (std::size_t n = 0; words.size() < kMaxIncidents * kWordsPerIncident; ++n) {
            auto w = synthetic_word(n);
            const auto bucket = fnv1a64(w) % MockEmbedder::kDim;
            if (used[bucket]) continue;
            used[bucket] = true;
            words.push_back(std::move(w));
        }
        return words;
    }();
    return pool;
}

}  // namespace

std::vector<std::string> incident_vocabulary(std::size_t incident_index) {
    if (incident_index >= kMaxIncidents) throw std::out_of_range("fixture supports 15 incidents");
    const auto& pool = vocabulary_pool();
    const auto first = pool.begin() + static_cast<std::ptrdiff_t>(incident_index * kWordsPerIncident);
    return {first, first + kWordsPerIncident};
}

namespace {

std::string join(const std::vector<std::string>& words, std::size_t from, std::size_t to) {
    std::string out;
    for (std::size_t i = from; i < to; ++i) {
        if (!out.empty()) out += ' ';
        out += words[i];
    }
    return out;
}

}  // namespace

Corpus make_vocab_corpus(std::size_t incidents) {
    Corpus corpus;
    corpus.source_path = "<fixture>";
    for (std::size_t i = 0; i < incidents; ++i) {
        const auto words = incident_vocabulary(i);
        Incident inc;
        inc.id = "Inc" + std::to_string(i + 1);
        inc.request_text = join(words, 0, 8) + ".";
        inc.exchange.push_back({AuthorRole::agent, join(words, 8, 16) + ".", 0});
        corpus.incidents.push_back(std::move(inc));
    }
    return corpus;
}

std::vector<RetrievalQuery> make_paraphrase_queries(const Corpus& corpus, std::size_t per_incident,
                                                    std::uint64_t seed) {
    const auto& filler = filler_words();
    std::mt19937_64 rng(seed);
    std::vector<RetrievalQuery> out;
    for (std::size_t i = 0; i < corpus.incidents.size(); ++i) {
        const auto vocab = incident_vocabulary(i);
        const std::vector<std::string> request(vocab.begin(), vocab.begin() + 8);
        const std::vector<std::string> reply_tail(vocab.begin() + 10, vocab.end());
        for (std::size_t p = 0; p < per_incident; ++p) {
            auto a = request;
            auto b = reply_tail;
            std::shuffle(a.begin(), a.end(), rng);
            std::shuffle(b.begin(), b.end(), rng);
            std::vector<std::string> picked(a.begin(), a.begin() + 4);
            picked.insert(picked.end(), b.begin(), b.begin() + 2);
            picked.insert(picked.begin(), filler[(i + p) % filler.size()]);
            picked.push_back(filler[(i + p + 2) % filler.size()]);
            out.push_back({corpus.incidents[i].id + "-q" + std::to_string(p + 1), join(picked, 0, picked.size()),
                           corpus.incidents[i].id});
        }
    }
    return out;
}

std::vector<std::string> fixture_emails() {
    return {
        "Dear Mr. Keller, thank you for your detailed description of the problem with the label printer. We "
        "have analysed the log files you sent us and found that the firmware update was interrupted while the"
        " device was writing its configuration memory. As a result the printer starts in a safe mode and "
        "refuses all print jobs from the network. Please carry out the following steps. First, switch the "
        "printer off and disconnect it from the power supply for at least thirty seconds. Second, hold the "
        "feed button pressed while you switch the device on again until the status light flashes orange. "
        "Third, connect a laptop with the service cable and start the recovery tool from our download portal."
        " The tool will restore the previous firmware and reset the configuration to factory defaults. "
        "Afterwards you can import your saved settings file and send a test page. If the status light remains"
        " red, please send us a photo of the display and the serial number so that our technician can prepare"
        " a replacement unit.",
        "Hello, we checked the server logs you provided and found that the nightly maintenance task restarts the "
        "service every night. You can disable the scheduled task in the administration console under system "
        "settings. Afterwards the application should remain available around the clock. Kind regards, your "
        "support team.",
        "Good morning, the license activation failed because the hardware identifier changed after the network "
        "card was replaced. We have reset the activation counter for your account. Please enter the license key "
        "again and confirm the dialog. Should the message appear again, contact us with a screenshot of the "
        "activation window.",
    };
}

std::string numbered_tokens(std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) out += ' ';
        out += 't' + std::to_string(i);
    }
    return out;
}

CorrectionReport sample_correction_report() {
    return {{{"Inc1", 172, 25, 172, 25}, {"Inc 2, retry", 153, 15, 159, 14}}};
}

SummaryReport sample_summary_report() {
    return {{{"Inc1", 100, 101, 0.63, 2.5}, {"Inc1", 500, 268, 0.861, 0.0}, {"Inc2", 100, 99, 0.7, 1.0}}};
}

std::vector<RetrievalEvalReport> sample_retrieval_reports() {
    return {{1, {1.0, 1.0}, 1.0}, {2, {1.0, 0.9}, 0.95}, {3, {1.0, 0.7333333333333333}, 0.8666666666666667}};
}

AnswerDistanceMatrix sample_answer_matrix() {
    AnswerDistanceMatrix m;
    m.incident_ids = {"Inc1", "Inc2"};
    m.query_ids = {"q1", "q2"};
    m.truth_incident_ids = {"Inc1", "Inc2"};
    m.cells = {{0.4, 0.9}, {0.95, 0.5}};
    m.diagonal_mean = 0.45;
    m.nearest_offdiagonal_mean = 0.925;
    return m;
}

std::string read_golden(const std::string& name) {
    std::ifstream in(fs::path(SERVICE_RAG_GOLDEN_DIR) / name, std::ios::binary);
    if (!in) throw std::runtime_error("missing golden file " + name);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_corpus_jsonl(const Corpus& corpus, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    for (const auto& inc : corpus.incidents) {
        nlohmann::ordered_json j;
        j["id"] = inc.id;
        j["request_text"] = inc.request_text;
        j["exchange"] = nlohmann::ordered_json::array();
        for (const auto& m : inc.exchange) {
            j["exchange"].push_back({{"author_role", std::string(to_string(m.author_role))}, {"text", m.text}});
        }
        out << j.dump() << '\n';
    }
}

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("service_rag_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

}  // namespace service_rag::testing
