#include "service_rag/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "service_rag/errors.hpp"
#include "service_rag/text.hpp"

namespace service_rag {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(AuthorRole role) {
    return role == AuthorRole::agent ? "agent" : "customer";
}

const Incident* Corpus::find(std::string_view id) const {
    for (const auto& inc : incidents) {
        if (inc.id == id) return &inc;
    }
    return nullptr;
}

namespace {

AuthorRole parse_role(std::string_view s, const std::string& where) {
    if (s == "customer") return AuthorRole::customer;
    if (s == "agent") return AuthorRole::agent;
    throw ParseError(where + ": unknown author_role '" + std::string(s) + "'");
}

void require_text(const std::string& text, const std::string& what, const std::string& where) {
    if (trim(text).empty()) throw ParseError(where + ": " + what + " is empty");
}

Incident parse_jsonl_record(const std::string& line, const std::string& where,
                            std::vector<std::string>& warnings) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(where + ": invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ParseError(where + ": record is not a JSON object");

    static const std::unordered_set<std::string> known = {"id", "request_text", "exchange", "tags"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) warnings.push_back(where + ": ignoring unknown field '" + key + "'");
    }

    auto get_string = [&](const json& obj, const char* key, const std::string& ctx) -> std::string {
        auto it = obj.find(key);
        if (it == obj.end() || !it->is_string()) {
            throw ParseError(ctx + ": missing or non-string field '" + key + "'");
        }
        return it->get<std::string>();
    };

    Incident inc;
    inc.id = get_string(j, "id", where);
    if (inc.id.empty()) throw ParseError(where + ": empty id");
    inc.request_text = get_string(j, "request_text", where);
    require_text(inc.request_text, "request_text", where);

    if (auto it = j.find("exchange"); it != j.end()) {
        if (!it->is_array()) throw ParseError(where + ": 'exchange' is not an array");
        for (const auto& m : *it) {
            const auto ctx = where + " exchange[" + std::to_string(inc.exchange.size()) + "]";
            if (!m.is_object()) throw ParseError(ctx + ": message is not an object");
            Message msg;
            msg.author_role = parse_role(get_string(m, "author_role", ctx), ctx);
            msg.text = get_string(m, "text", ctx);
            require_text(msg.text, "message text", ctx);
            msg.position = inc.exchange.size();
            inc.exchange.push_back(std::move(msg));
        }
    }
    if (auto it = j.find("tags"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw ParseError(where + ": 'tags' is not an array");
        for (const auto& t : *it) {
            if (!t.is_string()) throw ParseError(where + ": non-string tag");
            inc.tags.push_back(t.get<std::string>());
        }
    }
    return inc;
}

std::vector<Incident> load_jsonl(const fs::path& path, std::vector<std::string>& warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open corpus file " + path.string());

    std::vector<Incident> incidents;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto inc = parse_jsonl_record(line, path.string() + ":" + std::to_string(line_no), warnings);
        if (!seen.insert(inc.id).second) throw DuplicateIdError(inc.id);
        incidents.push_back(std::move(inc));
    }
    return incidents;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Incident parse_text_incident(const fs::path& file) {
    const std::string where = file.string();
    std::istringstream in(read_file(file));

    Incident inc;
    inc.id = file.stem().string();

    std::vector<std::string> sections(1);
    std::vector<AuthorRole> roles;
    std::string line;
    std::size_t line_no = 0;
    bool expect_role = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (expect_role) {
            constexpr std::string_view prefix = "role:";
            const auto t = trim(line);
            if (!t.starts_with(prefix)) {
                throw ParseError(where + ":" + std::to_string(line_no) + ": expected 'role: customer|agent'");
            }
            roles.push_back(parse_role(trim(t.substr(prefix.size())), where + ":" + std::to_string(line_no)));
            expect_role = false;
            continue;
        }
        if (line == "---") {
            sections.emplace_back();
            expect_role = true;
            continue;
        }
        auto& cur = sections.back();
        if (!cur.empty()) cur += '\n';
        cur += line;
    }
    if (expect_role) throw ParseError(where + ": separator without role header at end of file");

    inc.request_text = std::string(trim(sections.front()));
    require_text(inc.request_text, "request text", where);
    for (std::size_t i = 1; i < sections.size(); ++i) {
        Message msg;
        msg.author_role = roles[i - 1];
        msg.text = std::string(trim(sections[i]));
        require_text(msg.text, "message " + std::to_string(i - 1), where);
        msg.position = i - 1;
        inc.exchange.push_back(std::move(msg));
    }
    return inc;
}

std::vector<Incident> load_text_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError(dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<Incident> incidents;
    incidents.reserve(files.size());
    for (const auto& f : files) incidents.push_back(parse_text_incident(f));
    return incidents;
}

}  // namespace

CorpusFormat detect_corpus_format(const fs::path& path) {
    return fs::is_directory(path) ? CorpusFormat::text_dir : CorpusFormat::jsonl;
}

void validate_incidents(const std::vector<Incident>& incidents) {
    std::unordered_set<std::string> seen;
    for (const auto& inc : incidents) {
        if (!seen.insert(inc.id).second) throw DuplicateIdError(inc.id);
        if (trim(inc.request_text).empty()) throw InputError("incident '" + inc.id + "' has empty request_text");
        for (std::size_t i = 0; i < inc.exchange.size(); ++i) {
            if (inc.exchange[i].position != i) {
                throw InputError("incident '" + inc.id + "' has non-contiguous message positions");
            }
            if (trim(inc.exchange[i].text).empty()) {
                throw InputError("incident '" + inc.id + "' has an empty message");
            }
        }
    }
}

Corpus load_corpus(const fs::path& path, CorpusFormat format) {
    if (!fs::exists(path)) throw InputError("corpus path does not exist: " + path.string());

    Corpus corpus;
    corpus.source_path = path.string();
    corpus.incidents = format == CorpusFormat::jsonl ? load_jsonl(path, corpus.warnings) : load_text_dir(path);
    validate_incidents(corpus.incidents);
    corpus.loaded_at = std::chrono::system_clock::now();
    return corpus;
}

std::string incident_document(const Incident& incident) {
    std::string doc = incident.request_text;
    for (const auto& msg : incident.exchange) {
        doc += "\n\n";
        doc += msg.text;
    }
    return doc;
}

}  // namespace service_rag
