#include "iacsmell/evolution.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "iacsmell/frontends.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell::evolution {

const char* to_string(PersistenceStatus status) {
    switch (status) {
        case PersistenceStatus::Persistent: return "persistent";
        case PersistenceStatus::Fixed: return "fixed";
        case PersistenceStatus::Reintroduced: return "reintroduced";
    }
    return "unknown";
}

KeywordMatch classify_security_fix(std::string_view message, const Lexicons& lexicons) {
    KeywordMatch result;
    std::string haystack = to_lower(message);
    for (const auto& keyword : lexicons.security_fix_keywords()) {
        std::string needle = to_lower(keyword);
        if (needle.empty()) continue;
        std::size_t from = 0;
        bool matched = false;
        while (!matched) {
            std::size_t pos = haystack.find(needle, from);
            if (pos == std::string::npos) break;
            if (needle.size() > 4) {
                matched = true;  // phrases match as substrings
            } else {
                // short tokens are word-bounded: "cve" must not match "scvenger"
                bool left_ok = pos == 0 ||
                               !std::isalnum(static_cast<unsigned char>(haystack[pos - 1]));
                std::size_t end = pos + needle.size();
                bool right_ok = end >= haystack.size() ||
                                !std::isalnum(static_cast<unsigned char>(haystack[end]));
                matched = left_ok && right_ok;
            }
            from = pos + 1;
        }
        if (matched) result.keywords.push_back(keyword);
    }
    result.value = !result.keywords.empty();
    return result;
}

namespace {

struct SnapshotFindings {
    std::set<std::string> fingerprints;
    std::map<std::string, std::string> rule_of;  // fingerprint -> rule id
    bool failed = false;
};

}  // namespace

std::vector<PersistenceRecord> track(const SnapshotSeries& series, const TrackContext& ctx,
                                     std::vector<Diagnostic>* diagnostics) {
    std::vector<PersistenceRecord> records;
    if (series.snapshots.empty()) return records;

    std::optional<ToolKind> tool = ctx.tool;
    std::vector<SnapshotFindings> per_snapshot(series.snapshots.size());

    for (std::size_t i = 0; i < series.snapshots.size(); ++i) {
        const Snapshot& snap = series.snapshots[i];
        if (snap.parse_failed) {
            per_snapshot[i].failed = true;
            if (diagnostics)
                diagnostics->push_back(
                    {"snapshot " + snap.commit_id + " unreadable; treated as a gap", {}});
            continue;
        }
        if (!tool) {
            std::string error;
            tool = detect_tool(series.path, snap.content, &error);
            if (!tool) {
                per_snapshot[i].failed = true;
                if (diagnostics) diagnostics->push_back({error, {}});
                continue;
            }
        }
        ParsedFile file = parse(snap.content, *tool, series.path);
        PredicateContext pctx{&file, ctx.advisory, ctx.lexicons};
        for (const auto& finding : rules::evaluate(file, pctx)) {
            per_snapshot[i].fingerprints.insert(finding.fingerprint);
            per_snapshot[i].rule_of[finding.fingerprint] = finding.rule_id;
        }
    }

    // collect all fingerprints in first-appearance order for determinism
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& snap : per_snapshot) {
        for (const auto& fp : snap.fingerprints) {
            if (seen.insert(fp).second) order.push_back(fp);
        }
    }
    std::sort(order.begin(), order.end());

    const std::size_t n = series.snapshots.size();
    for (const auto& fp : order) {
        std::string rule;
        for (const auto& snap : per_snapshot) {
            auto it = snap.rule_of.find(fp);
            if (it != snap.rule_of.end()) {
                rule = it->second;
                break;
            }
        }
        // maximal presence runs; a failed snapshot bridges a single gap
        int run_no = 0;
        std::size_t i = 0;
        while (i < n) {
            if (!per_snapshot[i].fingerprints.count(fp)) {
                ++i;
                continue;
            }
            std::size_t first = i;
            std::size_t last = i;
            std::size_t j = i + 1;
            while (j < n) {
                if (per_snapshot[j].fingerprints.count(fp)) {
                    last = j;
                    ++j;
                } else if (per_snapshot[j].failed && j + 1 < n &&
                           per_snapshot[j + 1].fingerprints.count(fp)) {
                    last = j + 1;
                    j += 2;
                } else {
                    break;
                }
            }
            ++run_no;
            PersistenceRecord record;
            record.fingerprint = fp;
            record.rule_id = rule;
            record.first_index = static_cast<int>(first) + 1;
            record.last_index = static_cast<int>(last) + 1;
            record.first_seen = series.snapshots[first].commit_id;
            record.last_seen = series.snapshots[last].commit_id;
            record.lifespan_commits = record.last_index - record.first_index + 1;
            record.lifespan_seconds =
                series.snapshots[last].timestamp - series.snapshots[first].timestamp;
            if (last + 1 < n) record.fixed_at = series.snapshots[last + 1].commit_id;

            if (last == n - 1) {
                record.status = PersistenceStatus::Persistent;
            } else if (run_no == 1) {
                record.status = PersistenceStatus::Fixed;
            } else {
                record.status = PersistenceStatus::Reintroduced;
            }
            records.push_back(std::move(record));
            i = j;
        }
    }

    std::sort(records.begin(), records.end(),
              [](const PersistenceRecord& a, const PersistenceRecord& b) {
                  if (a.first_index != b.first_index) return a.first_index < b.first_index;
                  if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
                  return a.fingerprint < b.fingerprint;
              });
    return records;
}

std::map<std::string, LifespanHistogram> commits_to_fix(
    const std::vector<PersistenceRecord>& records) {
    std::map<std::string, LifespanHistogram> out;
    for (const auto& record : records) {
        LifespanHistogram& h = out[record.rule_id];
        if (record.status == PersistenceStatus::Persistent) {
            h.persistent.push_back(record.lifespan_commits);
        } else {
            h.fixed.push_back(record.lifespan_commits);
        }
    }
    for (auto& [rule, h] : out) {
        std::sort(h.fixed.begin(), h.fixed.end());
        std::sort(h.persistent.begin(), h.persistent.end());
    }
    return out;
}

}  // namespace iacsmell::evolution
