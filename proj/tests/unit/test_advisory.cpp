#include <doctest.h>

#include <random>

#include "iacsmell/advisory.hpp"

using namespace iacsmell;

TEST_CASE("version comparator follows the documented ordering") {
    auto cmp = [](const char* a, const char* b) {
        auto r = compare_versions(std::string_view(a), std::string_view(b));
        REQUIRE(r.has_value());
        return *r;
    };
    CHECK(cmp("1.0.1", "1.0.2") == -1);
    CHECK(cmp("1.0.2", "1.0.1") == 1);
    CHECK(cmp("1.0", "1.0.0") == 0);        // missing segments are zero
    CHECK(cmp("1.0.1f", "1.0.2") == -1);    // suffix sorts below the next numeric
    CHECK(cmp("1.0.1f", "1.0.1") == -1);    // suffix sorts below its numeric-only prefix
    CHECK(cmp("1.0.1f", "1.0.1g") == -1);
    CHECK(cmp("2.4.58", "2.4.58") == 0);
    CHECK(cmp("v1.2", "1.2") == 0);         // leading v is cosmetic
    CHECK(cmp("10.0", "9.9") == 1);

    CHECK(!parse_version("latest").has_value());
    CHECK(!parse_version("").has_value());
    CHECK(parse_version("1.0.1f").has_value());
}

TEST_CASE("comparator is a total order (antisymmetry fuzz)") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> seg(0, 3);
    std::uniform_int_distribution<int> num(0, 12);
    std::uniform_int_distribution<int> suf(0, 3);
    auto random_version = [&]() {
        std::string v = std::to_string(num(rng));
        int extra = seg(rng);
        for (int i = 0; i < extra; ++i) {
            v += "." + std::to_string(num(rng));
            int s = suf(rng);
            if (s == 1) v += "f";
            if (s == 2) v += "rc1";
        }
        return v;
    };
    for (int i = 0; i < 500; ++i) {
        std::string a = random_version();
        std::string b = random_version();
        auto ab = compare_versions(std::string_view(a), std::string_view(b));
        auto ba = compare_versions(std::string_view(b), std::string_view(a));
        REQUIRE(ab.has_value());
        REQUIRE(ba.has_value());
        CHECK(*ab == -*ba);
        CHECK(*compare_versions(std::string_view(a), std::string_view(a)) == 0);
    }
}

TEST_CASE("bundled advisory seed contains the documented entries") {
    AdvisoryDb db = AdvisoryDb::load_default();
    CHECK(db.contains("apt", "openssl"));
    CHECK(db.contains("apt", "python2.7"));
    CHECK(db.contains("generic", "python2.7"));

    auto openssl = db.query("apt", "openssl", std::string("1.0.1"));
    REQUIRE(openssl.size() >= 1);
    CHECK(openssl.front().advisory_id == "CVE-2014-0160");

    // eol/any_version rows only when the version is unknown
    auto no_version = db.query("apt", "openssl", std::nullopt);
    for (const auto& r : no_version) CHECK((r.eol || r.any_version));

    CHECK(db.query("gem", "left-pad", std::string("1.0")).empty());
}

TEST_CASE("query range semantics and ordering") {
    std::string text =
        "apt|demo|2.0|false|false|CVE-B|CWE-1\n"
        "apt|demo|1.5|false|false|CVE-A|CWE-1\n"
        "generic|demo|-|false|true|CVE-C|CWE-1\n";
    AdvisoryDb db = AdvisoryDb::parse(text, "test");

    auto hits = db.query("apt", "demo", std::string("1.0"));
    REQUIRE(hits.size() == 3);  // sorted by advisory id, generic rows included
    CHECK(hits[0].advisory_id == "CVE-A");
    CHECK(hits[1].advisory_id == "CVE-B");
    CHECK(hits[2].advisory_id == "CVE-C");

    hits = db.query("apt", "demo", std::string("1.7"));
    REQUIRE(hits.size() == 2);  // only the 2.0 threshold and the any_version row
    CHECK(hits[0].advisory_id == "CVE-B");
    CHECK(hits[1].advisory_id == "CVE-C");

    hits = db.query("apt", "demo", std::nullopt);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].advisory_id == "CVE-C");
}

TEST_CASE("duplicate rows merge with the widest range") {
    std::string text =
        "apt|demo|1.5|false|false|CVE-A|CWE-1\n"
        "apt|demo|2.0|true|false|CVE-A|CWE-1\n";
    AdvisoryDb db = AdvisoryDb::parse(text, "test");
    CHECK(db.size() == 1);
    auto hits = db.query("apt", "demo", std::string("1.9"));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].safe_below == std::string("2.0"));
    CHECK(hits[0].eol);
}

TEST_CASE("load errors carry line numbers") {
    CHECK_THROWS_AS(AdvisoryDb::parse("apt|x|notaversion|false|false|ID|CWE-1\n", "bad"),
                    AdvisoryError);
    try {
        AdvisoryDb::parse("# ok\napt|x|1.0|false|false|ID|CWE-1\napt|y|zzz|false|false|I|C\n",
                          "bad");
        FAIL("expected AdvisoryError");
    } catch (const AdvisoryError& e) {
        CHECK(e.line == 3);
    }
    // a record must assert something
    CHECK_THROWS_AS(AdvisoryDb::parse("apt|x|-|false|false|ID|CWE-1\n", "bad"), AdvisoryError);
    // wrong field count
    CHECK_THROWS_AS(AdvisoryDb::parse("apt|x|1.0\n", "bad"), AdvisoryError);
}

TEST_CASE("empty file yields a valid handle where all queries miss") {
    AdvisoryDb db = AdvisoryDb::parse("# nothing here\n", "empty");
    CHECK(db.size() == 0);
    CHECK(db.query("apt", "openssl", std::string("1.0.1")).empty());
}
