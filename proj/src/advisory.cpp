#include "iacsmell/advisory.hpp"

#include <algorithm>
#include <cctype>

#include "iacsmell/builtin_data.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell {

std::optional<Version> parse_version(std::string_view text) {
    std::string raw = trim(text);
    std::string_view body = raw;
    if (!body.empty() && (body[0] == 'v' || body[0] == 'V')) body.remove_prefix(1);
    if (body.empty()) return std::nullopt;

    Version version;
    version.raw = raw;
    bool any_digit = false;
    for (const auto& part : split(body, '.')) {
        Version::Segment segment;
        std::size_t i = 0;
        while (i < part.size() && std::isdigit(static_cast<unsigned char>(part[i]))) ++i;
        if (i > 0) {
            segment.number = std::stol(part.substr(0, i));
            any_digit = true;
        }
        segment.suffix = part.substr(i);
        version.segments.push_back(std::move(segment));
    }
    if (!any_digit) return std::nullopt;
    return version;
}

int compare_versions(const Version& a, const Version& b) {
    std::size_t n = std::max(a.segments.size(), b.segments.size());
    for (std::size_t i = 0; i < n; ++i) {
        Version::Segment sa = i < a.segments.size() ? a.segments[i] : Version::Segment{};
        Version::Segment sb = i < b.segments.size() ? b.segments[i] : Version::Segment{};
        if (sa.number != sb.number) return sa.number < sb.number ? -1 : 1;
        bool a_suffixed = !sa.suffix.empty();
        bool b_suffixed = !sb.suffix.empty();
        if (a_suffixed != b_suffixed) return a_suffixed ? -1 : 1;  // 1.0.1f < 1.0.1
        if (a_suffixed) {
            int cmp = sa.suffix.compare(sb.suffix);
            if (cmp != 0) return cmp < 0 ? -1 : 1;
        }
    }
    return 0;
}

std::optional<int> compare_versions(std::string_view a, std::string_view b) {
    auto va = parse_version(a);
    auto vb = parse_version(b);
    if (!va || !vb) return std::nullopt;
    return compare_versions(*va, *vb);
}

void AdvisoryDb::add(AdvisoryRecord record) {
    auto key = std::make_pair(record.ecosystem, record.name);
    auto& bucket = index_[key];
    for (auto& existing : bucket) {
        if (existing.advisory_id == record.advisory_id) {
            // duplicate rows merge with the widest range
            if (record.safe_below) {
                if (!existing.safe_below) {
                    existing.safe_below = record.safe_below;
                } else {
                    auto cmp = compare_versions(*existing.safe_below, *record.safe_below);
                    if (cmp && *cmp < 0) existing.safe_below = record.safe_below;
                }
            }
            existing.eol = existing.eol || record.eol;
            existing.any_version = existing.any_version || record.any_version;
            if (existing.cwe.empty()) existing.cwe = record.cwe;
            return;
        }
    }
    bucket.push_back(std::move(record));
}

AdvisoryDb AdvisoryDb::parse(std::string_view text, const std::string& source_name) {
    AdvisoryDb db;
    for (const auto& record : parse_line_records(text)) {
        if (record.fields.size() != 7) {
            throw AdvisoryError(source_name + ": line " + std::to_string(record.line) +
                                    ": expected 7 fields ecosystem|name|safe_below|eol|"
                                    "any_version|advisory_id|cwe",
                                record.line);
        }
        AdvisoryRecord row;
        row.ecosystem = to_lower(record.fields[0]);
        row.name = record.fields[1];
        const std::string& below = record.fields[2];
        if (!below.empty() && below != "-") {
            if (!parse_version(below)) {
                throw AdvisoryError(source_name + ": line " + std::to_string(record.line) +
                                        ": unparseable version '" + below + "'",
                                    record.line);
            }
            row.safe_below = below;
        }
        row.eol = to_lower(record.fields[3]) == "true";
        row.any_version = to_lower(record.fields[4]) == "true";
        row.advisory_id = record.fields[5];
        row.cwe = record.fields[6];
        if (!row.safe_below && !row.eol && !row.any_version) {
            throw AdvisoryError(source_name + ": line " + std::to_string(record.line) +
                                    ": record needs at least one of safe_below/eol/any_version",
                                record.line);
        }
        db.add(std::move(row));
    }
    return db;
}

AdvisoryDb AdvisoryDb::load_default() {
    return parse(builtin_advisories_text(), "<builtin advisories>");
}

AdvisoryDb AdvisoryDb::load_file(const std::string& path) {
    return parse(read_text_file(path), path);
}

std::vector<AdvisoryRecord> AdvisoryDb::query(std::string_view ecosystem, std::string_view name,
                                              std::optional<std::string> version) const {
    std::vector<AdvisoryRecord> out;
    std::optional<Version> parsed;
    if (version) parsed = parse_version(*version);

    auto check_bucket = [&](const std::string& eco) {
        auto it = index_.find(std::make_pair(eco, std::string(name)));
        if (it == index_.end()) return;
        for (const auto& record : it->second) {
            bool hit = false;
            if (record.eol || record.any_version) {
                hit = true;
            } else if (record.safe_below && parsed) {
                auto threshold = parse_version(*record.safe_below);
                hit = threshold && compare_versions(*parsed, *threshold) < 0;
            }
            if (hit) out.push_back(record);
        }
    };

    std::string eco = to_lower(ecosystem);
    check_bucket(eco);
    if (eco != "generic") check_bucket("generic");

    std::sort(out.begin(), out.end(), [](const AdvisoryRecord& a, const AdvisoryRecord& b) {
        if (a.advisory_id != b.advisory_id) return a.advisory_id < b.advisory_id;
        return a.ecosystem < b.ecosystem;
    });
    return out;
}

std::size_t AdvisoryDb::size() const {
    std::size_t n = 0;
    for (const auto& [key, bucket] : index_) n += bucket.size();
    return n;
}

bool AdvisoryDb::contains(std::string_view ecosystem, std::string_view name) const {
    return index_.count(std::make_pair(to_lower(ecosystem), std::string(name))) > 0;
}

}  // namespace iacsmell
