#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dcla {

/// A coding scheme: named categories, each holding an ordered list of move
/// labels. Labels are globally unique within a scheme; frequency vectors and
/// transition matrices are indexed by the flattened label order.
struct MoveScheme {
    struct Category {
        std::string name;
        std::vector<std::string> labels;
    };

    std::string name;
    std::vector<Category> categories;

    /// Flattened labels in category order.
    std::vector<std::string> labels() const;
    std::size_t label_count() const;
    std::optional<std::size_t> label_index(std::string_view label) const;
    /// Category name owning a label; empty if unknown.
    std::string category_of(std::string_view label) const;

    /// Throws SchemaViolation when the scheme invariants do not hold.
    void validate() const;
};

/// Built-in schemes: "moves14" (14 discussion moves in 5 categories) and
/// "seda8" (the eight major SEDA clusters).
MoveScheme builtin_scheme(std::string_view name);
bool is_builtin_scheme(std::string_view name);

/// Loads a scheme from a builtin name or a JSON scheme file.
MoveScheme load_scheme(const std::string& path_or_builtin);
void save_scheme(const MoveScheme& scheme, const std::string& path);

struct Utterance {
    std::string utt_id;
    std::string session_id;
    std::string speaker_id;
    int turn_index = 0;
    std::optional<std::string> text;
    std::optional<std::string> code;
};

struct Session {
    std::string session_id;
    std::string group_id;
    int scenario_id = 1;
    std::vector<Utterance> utterances; // ordered by turn_index
    std::optional<double> ic_score;    // 1-7 rating when present
};

struct Corpus {
    MoveScheme scheme;
    std::set<std::string> groups;
    std::vector<Session> sessions;

    const Session* find_session(std::string_view session_id) const;
    std::size_t utterance_count() const;
    std::size_t coded_utterance_count() const;
    /// Sessions that carry an ic_score, in corpus order.
    std::vector<const Session*> scored_sessions() const;
};

enum class Severity { Warning, Error };

struct Finding {
    Severity severity;
    std::string where;   // session/utterance id the finding refers to
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const; // no error-severity findings
    std::size_t error_count() const;
    std::size_t warning_count() const;
};

/// Loads and validates the two corpus files. Rejects malformed rows instead
/// of repairing them: throws MissingFile, SchemaViolation, UnknownLabel or
/// DuplicateId.
Corpus load_corpus(const std::string& utterances_path, const std::string& sessions_path,
                   MoveScheme scheme);

/// Writes the corpus back out in the load_corpus file formats.
void save_corpus(const Corpus& corpus, const std::string& utterances_path,
                 const std::string& sessions_path);

/// Structural re-check of an in-memory corpus. Findings are data, not
/// failures; sessions lacking ic_score yield warnings.
ValidationReport validate_corpus(const Corpus& corpus);

/// Integer count per scheme label, in scheme label order.
using FrequencyVector = std::vector<long long>;
FrequencyVector move_frequencies(const Session& session, const MoveScheme& scheme);

} // namespace dcla
