#include "service_rag/datasets.hpp"

#include <fstream>
#include <functional>
#include <unordered_set>

#include <json.hpp>

#include "service_rag/errors.hpp"
#include "service_rag/text.hpp"

namespace service_rag {

using nlohmann::json;

namespace {

template <typename T>
std::vector<T> load_jsonl(const std::filesystem::path& path, const std::function<T(const json&, const std::string&)>& parse) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::vector<T> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto where = path.string() + ":" + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(where + ": invalid JSON (" + e.what() + ")");
        }
        if (!j.is_object()) throw ParseError(where + ": record is not a JSON object");
        out.push_back(parse(j, where));
    }
    return out;
}

std::string required_string(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw ParseError(where + ": missing or non-string field '" + key + "'");
    auto s = it->get<std::string>();
    if (trim(s).empty()) throw ParseError(where + ": field '" + key + "' is empty");
    return s;
}

template <typename T, typename IdOf>
void require_unique(const std::vector<T>& items, IdOf id_of, const std::filesystem::path& path) {
    std::unordered_set<std::string> seen;
    for (const auto& item : items) {
        if (!seen.insert(id_of(item)).second) {
            throw InputError(path.string() + ": duplicate id '" + id_of(item) + "'");
        }
    }
}

}  // namespace

std::vector<RetrievalQuery> load_queries(const std::filesystem::path& path) {
    auto out = load_jsonl<RetrievalQuery>(path, [](const json& j, const std::string& where) {
        return RetrievalQuery{required_string(j, "id", where), required_string(j, "text", where),
                              required_string(j, "incident_id", where)};
    });
    require_unique(out, [](const RetrievalQuery& q) { return q.id; }, path);
    return out;
}

std::string queries_to_jsonl(std::span<const RetrievalQuery> queries) {
    std::string out;
    for (const auto& q : queries) {
        nlohmann::ordered_json j = {{"id", q.id}, {"incident_id", q.truth_incident_id}, {"text", q.text}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<AnswerRecord> load_answers(const std::filesystem::path& path) {
    auto out = load_jsonl<AnswerRecord>(path, [](const json& j, const std::string& where) {
        return AnswerRecord{required_string(j, "id", where), required_string(j, "incident_id", where),
                            required_string(j, "answer", where)};
    });
    require_unique(out, [](const AnswerRecord& a) { return a.query_id; }, path);
    return out;
}

std::vector<ReferenceEmail> load_reference_emails(const std::filesystem::path& path) {
    auto out = load_jsonl<ReferenceEmail>(path, [](const json& j, const std::string& where) {
        ReferenceEmail e{required_string(j, "id", where), required_string(j, "text", where), 0};
        if (auto it = j.find("errors"); it != j.end()) {
            if (!it->is_number_unsigned() || it->get<std::size_t>() == 0) {
                throw ParseError(where + ": 'errors' must be a positive integer");
            }
            e.errors = it->get<std::size_t>();
        }
        return e;
    });
    require_unique(out, [](const ReferenceEmail& e) { return e.id; }, path);
    return out;
}

}  // namespace service_rag
