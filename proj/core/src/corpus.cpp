#include "dcla/corpus.hpp"

#include "dcla/csv.hpp"
#include "dcla/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace dcla {

using nlohmann::json;

std::vector<std::string> MoveScheme::labels() const {
    std::vector<std::string> out;
    for (const auto& cat : categories) {
        out.insert(out.end(), cat.labels.begin(), cat.labels.end());
    }
    return out;
}

std::size_t MoveScheme::label_count() const {
    std::size_t n = 0;
    for (const auto& cat : categories) {
        n += cat.labels.size();
    }
    return n;
}

std::optional<std::size_t> MoveScheme::label_index(std::string_view label) const {
    std::size_t i = 0;
    for (const auto& cat : categories) {
        for (const auto& l : cat.labels) {
            if (l == label) {
                return i;
            }
            ++i;
        }
    }
    return std::nullopt;
}

std::string MoveScheme::category_of(std::string_view label) const {
    for (const auto& cat : categories) {
        for (const auto& l : cat.labels) {
            if (l == label) {
                return cat.name;
            }
        }
    }
    return {};
}

void MoveScheme::validate() const {
    if (categories.empty()) {
        throw Error(ErrorCode::SchemaViolation, "scheme '" + name + "' has no categories");
    }
    std::unordered_set<std::string> seen;
    for (const auto& cat : categories) {
        if (cat.labels.empty()) {
            throw Error(ErrorCode::SchemaViolation,
                        "category '" + cat.name + "' has no labels");
        }
        for (const auto& label : cat.labels) {
            if (!seen.insert(label).second) {
                throw Error(ErrorCode::SchemaViolation, "duplicate label '" + label + "'");
            }
        }
    }
}

MoveScheme builtin_scheme(std::string_view name) {
    if (name == "moves14") {
        return MoveScheme{
            "moves14",
            {
                {"Elaborating Ideas",
                 {"Perspective Taking", "Building on Ideas", "Connecting with External Contexts"}},
                {"Position Taking",
                 {"Inviting Perspectives", "Position Declaration", "Certainty Expression"}},
                {"Reasoning & Justifications",
                 {"Logical Justification", "Evidence-based Argument", "Critical Questioning"}},
                {"Emotional Expression",
                 {"Emotive/Experiential Argument", "Acknowledging Ambiguity"}},
                {"Discussion Management",
                 {"Procedure Management", "Facilitating Agreement", "Conversation Maintenance"}},
            }};
    }
    if (name == "seda8") {
        return MoveScheme{
            "seda8",
            {
                {"SEDA Clusters",
                 {"Invite elaboration or reasoning", "Make reasoning explicit", "Build on ideas",
                  "Express or invite ideas", "Positioning and coordination",
                  "Reflect on the dialogue or activity", "Connect",
                  "Guide direction of dialogue or activity"}},
            }};
    }
    throw Error(ErrorCode::UnknownBuiltin, "no builtin scheme named '" + std::string(name) + "'");
}

bool is_builtin_scheme(std::string_view name) {
    return name == "moves14" || name == "seda8";
}

MoveScheme load_scheme(const std::string& path_or_builtin) {
    if (is_builtin_scheme(path_or_builtin)) {
        return builtin_scheme(path_or_builtin);
    }
    std::ifstream in(path_or_builtin);
    if (!in) {
        throw Error(ErrorCode::UnknownBuiltin,
                    "'" + path_or_builtin + "' is neither a builtin scheme nor a readable file");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::SchemaViolation,
                    path_or_builtin + ": invalid JSON (" + ex.what() + ")");
    }
    MoveScheme scheme;
    if (!doc.is_object() || !doc.contains("name") || !doc.contains("categories")) {
        throw Error(ErrorCode::SchemaViolation,
                    path_or_builtin + ": expected {\"name\", \"categories\"}");
    }
    scheme.name = doc.at("name").get<std::string>();
    for (const auto& cat : doc.at("categories")) {
        MoveScheme::Category category;
        category.name = cat.at("name").get<std::string>();
        for (const auto& label : cat.at("labels")) {
            category.labels.push_back(label.get<std::string>());
        }
        scheme.categories.push_back(std::move(category));
    }
    scheme.validate();
    return scheme;
}

void save_scheme(const MoveScheme& scheme, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["name"] = scheme.name;
    doc["categories"] = nlohmann::ordered_json::array();
    for (const auto& cat : scheme.categories) {
        nlohmann::ordered_json jc;
        jc["name"] = cat.name;
        jc["labels"] = cat.labels;
        doc["categories"].push_back(std::move(jc));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    out << doc.dump(2) << "\n";
}

const Session* Corpus::find_session(std::string_view session_id) const {
    for (const auto& s : sessions) {
        if (s.session_id == session_id) {
            return &s;
        }
    }
    return nullptr;
}

std::size_t Corpus::utterance_count() const {
    std::size_t n = 0;
    for (const auto& s : sessions) {
        n += s.utterances.size();
    }
    return n;
}

std::size_t Corpus::coded_utterance_count() const {
    std::size_t n = 0;
    for (const auto& s : sessions) {
        for (const auto& u : s.utterances) {
            if (u.code) {
                ++n;
            }
        }
    }
    return n;
}

std::vector<const Session*> Corpus::scored_sessions() const {
    std::vector<const Session*> out;
    for (const auto& s : sessions) {
        if (s.ic_score) {
            out.push_back(&s);
        }
    }
    return out;
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
    std::size_t n = 0;
    for (const auto& f : findings) {
        if (f.severity == Severity::Error) {
            ++n;
        }
    }
    return n;
}

std::size_t ValidationReport::warning_count() const {
    return findings.size() - error_count();
}

namespace {

std::string row_tag(std::size_t line_no) {
    return "row " + std::to_string(line_no);
}

} // namespace

Corpus load_corpus(const std::string& utterances_path, const std::string& sessions_path,
                   MoveScheme scheme) {
    scheme.validate();
    Corpus corpus;
    corpus.scheme = std::move(scheme);

    // Sessions CSV: session_id,group_id,scenario_id,ic_score
    auto rows = csv::read_file(sessions_path);
    const csv::Row expected_header = {"session_id", "group_id", "scenario_id", "ic_score"};
    if (!rows.empty() && rows.front() != expected_header) {
        throw Error(ErrorCode::SchemaViolation,
                    sessions_path + ": header must be session_id,group_id,scenario_id,ic_score");
    }
    std::unordered_map<std::string, std::size_t> session_pos;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 4) {
            throw Error(ErrorCode::SchemaViolation,
                        sessions_path + " " + row_tag(r + 1) + ": expected 4 fields");
        }
        Session session;
        session.session_id = row[0];
        session.group_id = row[1];
        if (session.session_id.empty() || session.group_id.empty()) {
            throw Error(ErrorCode::SchemaViolation,
                        sessions_path + " " + row_tag(r + 1) + ": empty id");
        }
        try {
            session.scenario_id = std::stoi(row[2]);
        } catch (const std::exception&) {
            throw Error(ErrorCode::SchemaViolation,
                        sessions_path + " " + row_tag(r + 1) + ": scenario_id not an integer");
        }
        if (session.scenario_id < 1 || session.scenario_id > 5) {
            throw Error(ErrorCode::SchemaViolation,
                        sessions_path + " " + row_tag(r + 1) + ": scenario_id outside 1-5");
        }
        if (!row[3].empty()) {
            try {
                session.ic_score = std::stod(row[3]);
            } catch (const std::exception&) {
                throw Error(ErrorCode::SchemaViolation,
                            sessions_path + " " + row_tag(r + 1) + ": ic_score not a number");
            }
            if (!std::isfinite(*session.ic_score) || *session.ic_score < 1.0 ||
                *session.ic_score > 7.0) {
                throw Error(ErrorCode::SchemaViolation,
                            sessions_path + " " + row_tag(r + 1) + ": ic_score outside [1, 7]");
            }
        }
        if (!session_pos.emplace(session.session_id, corpus.sessions.size()).second) {
            throw Error(ErrorCode::DuplicateId, "session '" + session.session_id + "'");
        }
        corpus.groups.insert(session.group_id);
        corpus.sessions.push_back(std::move(session));
    }

    // Utterances JSONL.
    std::ifstream in(utterances_path);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open " + utterances_path);
    }
    std::unordered_set<std::string> utt_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& ex) {
            throw Error(ErrorCode::SchemaViolation,
                        utterances_path + " " + row_tag(line_no) + ": invalid JSON (" +
                            ex.what() + ")");
        }
        Utterance utt;
        try {
            utt.utt_id = obj.at("utt_id").get<std::string>();
            utt.session_id = obj.at("session_id").get<std::string>();
            utt.speaker_id = obj.at("speaker_id").get<std::string>();
            utt.turn_index = obj.at("turn_index").get<int>();
            if (obj.contains("text") && !obj.at("text").is_null()) {
                utt.text = obj.at("text").get<std::string>();
            }
            if (obj.contains("code") && !obj.at("code").is_null()) {
                utt.code = obj.at("code").get<std::string>();
            }
        } catch (const json::exception& ex) {
            throw Error(ErrorCode::SchemaViolation,
                        utterances_path + " " + row_tag(line_no) + ": " + ex.what());
        }
        if (utt.turn_index < 0) {
            throw Error(ErrorCode::SchemaViolation,
                        utterances_path + " " + row_tag(line_no) + ": negative turn_index");
        }
        if (utt.code && !corpus.scheme.label_index(*utt.code)) {
            throw Error(ErrorCode::UnknownLabel, "'" + *utt.code + "' (utterance " +
                                                     utt.utt_id + ")");
        }
        if (!utt_ids.insert(utt.utt_id).second) {
            throw Error(ErrorCode::DuplicateId, "utterance '" + utt.utt_id + "'");
        }
        auto it = session_pos.find(utt.session_id);
        if (it == session_pos.end()) {
            throw Error(ErrorCode::SchemaViolation,
                        utterances_path + " " + row_tag(line_no) + ": unknown session '" +
                            utt.session_id + "'");
        }
        corpus.sessions[it->second].utterances.push_back(std::move(utt));
    }

    // Order by turn_index and enforce contiguity from 0.
    for (auto& session : corpus.sessions) {
        std::sort(session.utterances.begin(), session.utterances.end(),
                  [](const Utterance& a, const Utterance& b) {
                      return a.turn_index < b.turn_index;
                  });
        for (std::size_t i = 0; i < session.utterances.size(); ++i) {
            if (session.utterances[i].turn_index != static_cast<int>(i)) {
                throw Error(ErrorCode::SchemaViolation,
                            "session '" + session.session_id +
                                "': turn_index values not contiguous from 0");
            }
        }
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& utterances_path,
                 const std::string& sessions_path) {
    {
        std::ofstream out(sessions_path, std::ios::binary);
        if (!out) {
            throw Error(ErrorCode::IoError, "cannot write " + sessions_path);
        }
        out << "session_id,group_id,scenario_id,ic_score\n";
        for (const auto& s : corpus.sessions) {
            std::string ic;
            if (s.ic_score) {
                std::ostringstream os;
                os.precision(17);
                os << *s.ic_score;
                ic = os.str();
            }
            out << csv::join({s.session_id, s.group_id, std::to_string(s.scenario_id), ic})
                << "\n";
        }
    }
    std::ofstream out(utterances_path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + utterances_path);
    }
    for (const auto& s : corpus.sessions) {
        for (const auto& u : s.utterances) {
            nlohmann::ordered_json obj;
            obj["utt_id"] = u.utt_id;
            obj["session_id"] = u.session_id;
            obj["speaker_id"] = u.speaker_id;
            obj["turn_index"] = u.turn_index;
            if (u.text) {
                obj["text"] = *u.text;
            }
            if (u.code) {
                obj["code"] = *u.code;
            }
            out << obj.dump() << "\n";
        }
    }
}

ValidationReport validate_corpus(const Corpus& corpus) {
    ValidationReport report;
    auto add = [&report](Severity sev, std::string where, std::string message) {
        report.findings.push_back({sev, std::move(where), std::move(message)});
    };

    try {
        corpus.scheme.validate();
    } catch (const Error& ex) {
        add(Severity::Error, "scheme", ex.what());
    }

    std::unordered_set<std::string> session_ids;
    std::unordered_set<std::string> utt_ids;
    for (const auto& session : corpus.sessions) {
        if (!session_ids.insert(session.session_id).second) {
            add(Severity::Error, session.session_id, "duplicate session id");
        }
        if (!corpus.groups.count(session.group_id)) {
            add(Severity::Error, session.session_id,
                "group '" + session.group_id + "' missing from corpus groups");
        }
        if (session.ic_score) {
            if (!(*session.ic_score >= 1.0 && *session.ic_score <= 7.0)) {
                add(Severity::Error, session.session_id, "ic_score outside [1, 7]");
            }
        } else {
            add(Severity::Warning, session.session_id,
                "no ic_score; session is excluded from quality modeling");
        }
        for (std::size_t i = 0; i < session.utterances.size(); ++i) {
            const auto& u = session.utterances[i];
            if (u.turn_index != static_cast<int>(i)) {
                add(Severity::Error, session.session_id, "non-contiguous turn_index");
                break;
            }
        }
        for (const auto& u : session.utterances) {
            if (!utt_ids.insert(u.utt_id).second) {
                add(Severity::Error, u.utt_id, "duplicate utterance id");
            }
            if (u.session_id != session.session_id) {
                add(Severity::Error, u.utt_id, "session_id mismatch");
            }
            if (u.code && !corpus.scheme.label_index(*u.code)) {
                add(Severity::Error, u.utt_id, "code '" + *u.code + "' not in scheme");
            }
        }
    }
    return report;
}

FrequencyVector move_frequencies(const Session& session, const MoveScheme& scheme) {
    FrequencyVector counts(scheme.label_count(), 0);
    for (const auto& u : session.utterances) {
        if (!u.code) {
            continue;
        }
        auto idx = scheme.label_index(*u.code);
        if (!idx) {
            throw Error(ErrorCode::UnknownLabel,
                        "'" + *u.code + "' (utterance " + u.utt_id + ")");
        }
        ++counts[*idx];
    }
    return counts;
}

} // namespace dcla
