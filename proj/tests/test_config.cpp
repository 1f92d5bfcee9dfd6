#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lambda_engine/config.hpp"
#include "lambda_engine/errors.hpp"

using namespace lambda_engine;

TEST_CASE("sections, keys, comments, locations") {
    const std::string text =
        "# engine configuration\n"
        "[engine]\n"
        "eta = 0.25   # mirror coupling\n"
        "n_h = 0.1\n"
        "\n"
        "[sweep]\n"
        "parameter = kappa\n";
    const ConfigDoc doc = parse_config_text(text);
    REQUIRE(doc.sections.size() == 2);
    CHECK(doc.sections[0].name == "engine");
    CHECK(doc.sections[0].line == 2);

    const ConfigSection* eng = doc.find("engine");
    REQUIRE(eng != nullptr);
    const ConfigEntry* eta = eng->find("eta");
    REQUIRE(eta != nullptr);
    CHECK(eta->value == "0.25");
    CHECK(eta->line == 3);
    CHECK(eta->col == 1);
    CHECK(entry_as_double(*eta) == 0.25);

    CHECK(doc.find("sweep")->find("parameter")->value == "kappa");
    CHECK(doc.find("missing") == nullptr);
}

TEST_CASE("malformed input reports line and column") {
    SUBCASE("missing equals") {
        try {
            parse_config_text("[engine]\nomega_rabi 10\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.line == 2);
        }
    }
    SUBCASE("unterminated section") {
        CHECK_THROWS_AS(parse_config_text("[engine\n"), ConfigError);
    }
    SUBCASE("trailing junk after section") {
        CHECK_THROWS_AS(parse_config_text("[engine] x\n"), ConfigError);
    }
    SUBCASE("duplicate key") {
        CHECK_THROWS_AS(parse_config_text("[a]\nk = 1\nk = 2\n"), ConfigError);
    }
    SUBCASE("malformed number") {
        const ConfigDoc doc = parse_config_text("[a]\nk = 1.2.3\n");
        try {
            entry_as_double(*doc.find("a")->find("k"));
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.line == 2);
        }
    }
    SUBCASE("integer check") {
        const ConfigDoc doc = parse_config_text("[a]\nk = 2.5\n");
        CHECK_THROWS_AS(entry_as_int(*doc.find("a")->find("k")), ConfigError);
    }
}

TEST_CASE("double lists") {
    const ConfigDoc doc = parse_config_text("[a]\nvals = 0.01, 0.1,0.5\nbad = 1,,2\n");
    const auto vals = entry_as_double_list(*doc.find("a")->find("vals"));
    REQUIRE(vals.size() == 3);
    CHECK(vals[0] == 0.01);
    CHECK(vals[2] == 0.5);
    CHECK_THROWS_AS(entry_as_double_list(*doc.find("a")->find("bad")), ConfigError);
}

TEST_CASE("empty document parses to nothing") {
    const ConfigDoc doc = parse_config_text("");
    CHECK(doc.sections.empty());
}
