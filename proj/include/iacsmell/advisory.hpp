#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iacsmell {

// Dotted version split into numeric segments with optional trailing
// alphabetic suffixes. Missing segments compare as zero; a suffixed segment
// sorts below its bare numeric counterpart (1.0.1f < 1.0.1 < 1.0.2).
struct Version {
    struct Segment {
        long number = 0;
        std::string suffix;
    };
    std::vector<Segment> segments;
    std::string raw;
};

std::optional<Version> parse_version(std::string_view text);
int compare_versions(const Version& a, const Version& b);  // -1, 0, 1
std::optional<int> compare_versions(std::string_view a, std::string_view b);

struct AdvisoryRecord {
    std::string ecosystem;                   // apt, yum, pip, gem, terraform, box, generic
    std::string name;
    std::optional<std::string> safe_below;   // versions strictly below are vulnerable
    bool eol = false;
    bool any_version = false;
    std::string advisory_id;
    std::string cwe;

    bool operator==(const AdvisoryRecord&) const = default;
};

struct AdvisoryError : std::runtime_error {
    int line;
    explicit AdvisoryError(const std::string& msg, int line_no = 0)
        : std::runtime_error(msg), line(line_no) {}
};

// Offline advisory knowledge base, indexed by (ecosystem, name). Records in
// the `generic` ecosystem answer queries for any ecosystem.
class AdvisoryDb {
  public:
    static AdvisoryDb load_default();
    static AdvisoryDb load_file(const std::string& path);
    static AdvisoryDb parse(std::string_view text, const std::string& source_name);

    // Range semantics: a record matches when the queried version is strictly
    // below safe_below, or the record is flagged any_version. EOL records
    // match regardless of version. Without a version only eol/any_version
    // records match. Results are sorted by advisory_id.
    std::vector<AdvisoryRecord> query(std::string_view ecosystem, std::string_view name,
                                      std::optional<std::string> version = std::nullopt) const;

    std::size_t size() const;
    bool contains(std::string_view ecosystem, std::string_view name) const;

  private:
    std::map<std::pair<std::string, std::string>, std::vector<AdvisoryRecord>> index_;
    void add(AdvisoryRecord record);
};

}  // namespace iacsmell
