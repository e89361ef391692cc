#include "pmesim/config.hpp"

#include <doctest.h>

#include <cmath>

using namespace pmesim;

TEST_CASE("bundled table config round-trips the published values") {
    const auto cfg = Config::parse_file("configs/table1.cfg");
    CHECK(cfg.units() == UnitsConvention::Angular);
    const SystemParams p = cfg.system_params();
    CHECK(p.kappa == doctest::Approx(150e6).epsilon(1e-14));
    CHECK(p.lambda == doctest::Approx(40e6).epsilon(1e-14));
    CHECK(p.g_coll == doctest::Approx(0.3e9).epsilon(1e-14));
    CHECK(p.gamma_inh == doctest::Approx(150e6).epsilon(1e-14));
    CHECK(p.memory_model == MemoryModel::AfcModified);
    REQUIRE(p.afc.has_value());
    CHECK(p.afc->finesse == 3.0);
    CHECK(p.afc->storage_time == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(p.cooperativity() == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(p.cooperativity_eff() == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("ordinary units convert by 2 pi") {
    const auto cfg = Config::parse_string(
        "[system]\nkappa = 150 MHz\nlambda = 40 MHz\ng = 0.3 GHz\n"
        "gamma = 150 MHz\n[numerics]\nunits = ordinary\n");
    const SystemParams p = cfg.system_params();
    CHECK(p.kappa == doctest::Approx(two_pi * 150e6).epsilon(1e-14));
    CHECK(p.g_coll == doctest::Approx(two_pi * 0.3e9).epsilon(1e-14));
    // Cooperativity is convention-free.
    CHECK(p.cooperativity() == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("units flag defaults to ordinary and can be overridden") {
    auto cfg = Config::parse_string("[system]\nkappa = 1 MHz\nlambda = 0 Hz\n"
                                    "g = 0 Hz\ngamma = 1 MHz\n");
    CHECK(cfg.units() == UnitsConvention::Ordinary);
    cfg.override_units(UnitsConvention::Angular);
    CHECK(cfg.system_params().kappa == doctest::Approx(1e6));
}

TEST_CASE("missing unit suffix is a hard error naming the key") {
    const auto cfg = Config::parse_string(
        "[system]\nkappa = 150\nlambda = 40 MHz\ng = 0.3 GHz\ngamma = 150 MHz\n");
    try {
        (void)cfg.system_params();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("kappa") != std::string::npos);
    }
}

TEST_CASE("duplicate keys are rejected with a line number") {
    try {
        (void)Config::parse_string("[system]\nkappa = 1 MHz\nkappa = 2 MHz\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
}

TEST_CASE("unknown keys and sections are rejected") {
    CHECK_THROWS_AS((void)Config::parse_string("[system]\nbogus = 1 MHz\n"),
                    ConfigError);
    CHECK_THROWS_AS((void)Config::parse_string("[nonsense]\nkappa = 1 MHz\n"),
                    ConfigError);
    CHECK_THROWS_AS((void)Config::parse_string("kappa = 1 MHz\n"), ConfigError);
}

TEST_CASE("malformed lines carry their line number") {
    try {
        (void)Config::parse_string("[system]\n\nkappa 1 MHz\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("dimensionless keys reject unit suffixes") {
    const auto cfg = Config::parse_string("[afc]\nfinesse = 3 MHz\n");
    CHECK_THROWS_AS((void)cfg.dimensionless("afc", "finesse"), ConfigError);
}

TEST_CASE("afc tooth width is derived or validated") {
    const auto cfg = Config::parse_string(
        "[system]\nkappa = 150 MHz\nlambda = 40 MHz\ng = 0.3 GHz\n"
        "gamma = 150 MHz\nmemory_model = afc_modified\n"
        "[afc]\nfinesse = 3\ncomb_spacing = 1 MHz\ntooth_width = 0.5 MHz\n");
    // 1/0.5 = 2 != 3: inconsistent.
    CHECK_THROWS_AS((void)cfg.system_params(), DomainError);
}
