#include <doctest.h>

#include <algorithm>
#include <regex>
#include <set>

#include "iacsmell/rules.hpp"
#include "iacsmell/taxonomy.hpp"

using namespace iacsmell;

namespace {

const std::set<std::string> kTopTen = {
    "insecure-configuration-management", "insecure-dependency-management",
    "insecure-input-handling",           "outdated-dependencies",
    "path-traversal",                    "command-injection",
    "code-injection",                    "outdated-software-version",
    "inadequate-naming-convention",      "sensitive-information-exposure",
};

}  // namespace

TEST_CASE("bundled taxonomy has 62 categories with 10 rule-bound") {
    Taxonomy taxonomy = Taxonomy::load_default();
    CHECK(taxonomy.categories().size() == 62);
    std::set<std::string> bound;
    for (const auto& c : taxonomy.categories()) {
        if (c.rule_bound) bound.insert(c.id);
    }
    CHECK(bound == kTopTen);
}

TEST_CASE("top-10 CWE anchors are exact") {
    Taxonomy taxonomy = Taxonomy::load_default();
    auto primary_cwe = [&](const std::string& id) {
        const SmellCategory* c = taxonomy.find(id);
        REQUIRE(c != nullptr);
        REQUIRE(!c->cwes.empty());
        return c->cwes.front();
    };
    CHECK(primary_cwe("insecure-configuration-management") == "CWE-306");
    CHECK(primary_cwe("insecure-dependency-management") == "CWE-1104");
    CHECK(primary_cwe("insecure-input-handling") == "CWE-20");
    CHECK(primary_cwe("outdated-dependencies") == "CWE-1104");
    CHECK(primary_cwe("path-traversal") == "CWE-22");
    CHECK(primary_cwe("command-injection") == "CWE-77");
    CHECK(primary_cwe("code-injection") == "CWE-94");
    CHECK(primary_cwe("outdated-software-version") == "CWE-1104");
    CHECK(primary_cwe("inadequate-naming-convention") == "CWE-710");
    CHECK(primary_cwe("sensitive-information-exposure") == "CWE-256");
}

TEST_CASE("category_for_cwe reverse lookup") {
    Taxonomy taxonomy = Taxonomy::load_default();

    std::set<std::string> hits;
    for (const auto* c : taxonomy.categories_for_cwe("CWE-1104")) hits.insert(c->id);
    CHECK(hits == std::set<std::string>{"insecure-dependency-management",
                                        "outdated-dependencies", "outdated-software-version"});

    hits.clear();
    for (const auto* c : taxonomy.categories_for_cwe("CWE-256")) hits.insert(c->id);
    CHECK(hits == std::set<std::string>{"sensitive-information-exposure"});

    CHECK(taxonomy.categories_for_cwe("CWE-9999").empty());
}

TEST_CASE("duplicate category id is a validation error") {
    std::string text =
        "alpha|Alpha|CWE-1|false|first row|true\n"
        "alpha|Alpha Again|CWE-2|false|dup row|true\n";
    CHECK_THROWS_AS(Taxonomy::parse(text, "dup.txt"), TaxonomyError);
}

TEST_CASE("malformed rows report their line") {
    std::string text = "# header\nonly|three|fields\n";
    try {
        Taxonomy::parse(text, "bad.txt");
        FAIL("expected TaxonomyError");
    } catch (const TaxonomyError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("bad.txt") != std::string::npos);
    }
}

TEST_CASE("61-row file warns under strict=false and fails under strict=true") {
    // delete one non-rule-bound row from the bundled data
    Taxonomy bundled = Taxonomy::load_default();
    std::string serialized = bundled.serialize();
    std::string needle = "world-readable-log|";
    std::size_t pos = serialized.find(needle);
    REQUIRE(pos != std::string::npos);
    std::size_t eol = serialized.find('\n', pos);
    serialized.erase(pos, eol - pos + 1);

    std::vector<Diagnostic> warnings;
    Taxonomy reduced = Taxonomy::parse(serialized, "reduced.txt", false, &warnings);
    CHECK(reduced.categories().size() == 61);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].message.find("count mismatch") != std::string::npos);

    CHECK_THROWS_AS(Taxonomy::parse(serialized, "reduced.txt", true), TaxonomyError);
}

TEST_CASE("serialize/parse round-trip preserves the category set") {
    Taxonomy bundled = Taxonomy::load_default();
    Taxonomy reparsed = Taxonomy::parse(bundled.serialize(), "roundtrip.txt", true);
    REQUIRE(bundled.categories().size() == reparsed.categories().size());
    for (std::size_t i = 0; i < bundled.categories().size(); ++i) {
        CHECK(bundled.categories()[i] == reparsed.categories()[i]);
    }
}

TEST_CASE("every CWE matches CWE-<digits> and ids are kebab slugs") {
    Taxonomy taxonomy = Taxonomy::load_default();
    const std::regex cwe("^CWE-[0-9]+$");
    const std::regex slug("^[a-z0-9]+(-[a-z0-9]+)*$");
    for (const auto& c : taxonomy.categories()) {
        CHECK(std::regex_match(c.id, slug));
        REQUIRE(!c.cwes.empty());
        for (const auto& id : c.cwes) CHECK(std::regex_match(id, cwe));
    }
}

TEST_CASE("rule registry ids equal the rule-bound taxonomy ids") {
    Taxonomy taxonomy = Taxonomy::load_default();
    CHECK_NOTHROW(rules::validate_against(taxonomy));

    // flipping one rule_bound flag breaks the startup check
    std::string serialized = taxonomy.serialize();
    std::string needle = "path-traversal|Path Traversal|CWE-22|true";
    std::size_t pos = serialized.find(needle);
    REQUIRE(pos != std::string::npos);
    std::string mutated = serialized;
    mutated.replace(pos, needle.size(), "path-traversal|Path Traversal|CWE-22|false");
    Taxonomy broken = Taxonomy::parse(mutated, "mutated.txt", false);
    CHECK_THROWS_AS(rules::validate_against(broken), std::runtime_error);
}
