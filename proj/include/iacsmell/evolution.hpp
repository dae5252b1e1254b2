#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/rules.hpp"

namespace iacsmell::evolution {

struct Snapshot {
    std::string commit_id;
    std::int64_t timestamp = 0;  // unix epoch seconds
    std::string content;
    bool parse_failed = false;   // set by the adapter when content was unreadable
};

// Ordered snapshots of one file across a history. Timestamps non-decreasing,
// commit ids unique within the series.
struct SnapshotSeries {
    std::string repo_id;
    std::string path;
    std::vector<Snapshot> snapshots;
};

enum class PersistenceStatus { Persistent, Fixed, Reintroduced };
const char* to_string(PersistenceStatus status);

struct PersistenceRecord {
    std::string fingerprint;
    std::string rule_id;
    std::string first_seen;               // commit id
    std::string last_seen;                // commit id
    std::optional<std::string> fixed_at;  // commit where the smell disappeared
    int first_index = 0;                  // 1-based snapshot indices
    int last_index = 0;
    int lifespan_commits = 0;             // last_index - first_index + 1
    std::int64_t lifespan_seconds = 0;
    PersistenceStatus status = PersistenceStatus::Persistent;
};

struct KeywordMatch {
    bool value = false;
    std::vector<std::string> keywords;
    explicit operator bool() const { return value; }
};

// Commit-message classifier: case-insensitive keyword match, word-bounded
// for short tokens.
KeywordMatch classify_security_fix(std::string_view message, const Lexicons& lexicons);

struct TrackContext {
    const AdvisoryDb* advisory = nullptr;
    const Lexicons* lexicons = nullptr;
    std::optional<ToolKind> tool;  // detected from series content when absent
};

// Runs the rules over every snapshot and chains findings whose fingerprints
// match across consecutive snapshots (whitespace-collapsed snippet identity,
// so variable names and values must match exactly). A chain survives a gap
// only when the gap snapshot failed to parse.
std::vector<PersistenceRecord> track(const SnapshotSeries& series, const TrackContext& ctx,
                                     std::vector<Diagnostic>* diagnostics = nullptr);

struct LifespanHistogram {
    std::vector<int> fixed;       // lifespans of fixed/reintroduced chains
    std::vector<int> persistent;  // censored chains, reported separately
};

std::map<std::string, LifespanHistogram> commits_to_fix(
    const std::vector<PersistenceRecord>& records);

}  // namespace iacsmell::evolution
