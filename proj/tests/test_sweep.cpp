#include "pmesim/presets.hpp"
#include "pmesim/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace pmesim;

namespace {

SweepSpec small_threshold_spec() {
    SweepSpec spec;
    spec.fixed.kappa = 1.0;
    spec.fixed.gamma_inh = 1.0;
    spec.fixed.g_coll = 0.5;
    spec.fixed.lambda = 0.1;
    spec.axis1 = {SweepParameter::GColl, 0.1, 2.0, 3, false};
    spec.axis2 = {SweepParameter::GammaInh, 0.5, 2.0, 4, false};
    spec.metric = SweepMetric::Threshold;
    spec.units = UnitsConvention::Angular;
    return spec;
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const char* name)
        : path(std::filesystem::temp_directory_path() / name) {}
    ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
};

} // namespace

TEST_CASE("threshold sweep matches direct evaluation per cell") {
    const SweepSpec spec = small_threshold_spec();
    const auto res = run_sweep(spec);
    REQUIRE(res.axis1_values.size() == 3);
    REQUIRE(res.axis2_values.size() == 4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) {
            SystemParams p = spec.fixed;
            p.g_coll = res.axis1_values[i];
            p.gamma_inh = res.axis2_values[j];
            CHECK(res.status_at(i, j) == CellStatus::Ok);
            CHECK(res.at(i, j) == doctest::Approx(stability_threshold(p)).epsilon(1e-12));
        }
}

TEST_CASE("threshold curve on the impedance-matched line") {
    SweepSpec spec = small_threshold_spec();
    // 2G = Gamma = kappa along axis values: check the C = 1 cells.
    const auto res = threshold_curve(spec);
    for (size_t i = 0; i < res.axis1_values.size(); ++i)
        for (size_t j = 0; j < res.axis2_values.size(); ++j) {
            const double g = res.axis1_values[i];
            const double gamma = res.axis2_values[j];
            if (std::abs(2.0 * g - 1.0) < 1e-12 && std::abs(gamma - 1.0) < 1e-12)
                CHECK(res.at(static_cast<int>(i), static_cast<int>(j)) ==
                      doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        }
}

TEST_CASE("above-threshold cells are flagged consistently") {
    SweepSpec spec;
    spec.fixed = table1_params(UnitsConvention::Angular);
    spec.axis1 = {SweepParameter::Lambda, 10e6, 80e6, 8, false};
    spec.axis2 = {SweepParameter::Kappa, 5e6, 60e6, 6, false};
    spec.metric = SweepMetric::HeraldingEfficiency;
    spec.units = UnitsConvention::Angular;
    const auto res = run_sweep(spec);
    const auto thr = threshold_curve(spec);
    for (size_t i = 0; i < res.axis1_values.size(); ++i)
        for (size_t j = 0; j < res.axis2_values.size(); ++j) {
            const bool above =
                res.axis1_values[i] >= thr.at(static_cast<int>(i), static_cast<int>(j));
            CHECK((res.status_at(static_cast<int>(i), static_cast<int>(j)) ==
                   CellStatus::AboveThreshold) == above);
            if (!above)
                CHECK(std::isfinite(res.at(static_cast<int>(i), static_cast<int>(j))));
        }
}

TEST_CASE("per-cell failures never abort the sweep") {
    SweepSpec spec = small_threshold_spec();
    spec.metric = SweepMetric::HeraldingEfficiency;
    spec.fixed.lambda = 0.0; // heralding is undefined at lambda = 0
    spec.axis1 = {SweepParameter::GColl, 0.1, 1.0, 2, false};
    spec.axis2 = {SweepParameter::GammaInh, 0.5, 2.0, 2, false};
    const auto res = run_sweep(spec);
    for (auto st : res.status) CHECK(st == CellStatus::Error);
}

TEST_CASE("CSV round-trip is bit-exact including special cells") {
    SweepSpec spec;
    spec.fixed = table1_params(UnitsConvention::Angular);
    spec.axis1 = {SweepParameter::Lambda, 20e6, 70e6, 4, false};
    spec.axis2 = {SweepParameter::Kappa, 5e6, 40e6, 3, false};
    spec.metric = SweepMetric::Threshold;
    spec.units = UnitsConvention::Angular;
    auto res = run_sweep(spec);
    // Force one of each status for coverage.
    res.status[1] = CellStatus::AboveThreshold;
    res.values[1] = std::numeric_limits<double>::quiet_NaN();
    res.status[2] = CellStatus::Error;
    res.values[2] = std::numeric_limits<double>::quiet_NaN();

    TempFile tmp("pmesim_roundtrip.csv");
    write_csv(res, tmp.path);
    const auto back = read_csv(tmp.path);
    REQUIRE(back.values.size() == res.values.size());
    for (size_t k = 0; k < res.values.size(); ++k) {
        CHECK(back.status[k] == res.status[k]);
        if (res.status[k] == CellStatus::Ok)
            CHECK(back.values[k] == res.values[k]); // bit-for-bit
        else
            CHECK(std::isnan(back.values[k]));
    }
    for (size_t k = 0; k < res.axis1_values.size(); ++k)
        CHECK(back.axis1_values[k] == res.axis1_values[k]);
    CHECK(back.provenance.at("afc_scaling") == afc_scaling_law());
    CHECK(back.provenance.at("units") == "angular");
}

TEST_CASE("identical specs produce identical payloads across thread counts") {
    SweepSpec spec = small_threshold_spec();
    spec.metric = SweepMetric::EntanglementRateIdlerMemory;
    spec.axis1 = {SweepParameter::GColl, 0.2, 1.0, 3, false};
    spec.axis2 = {SweepParameter::GammaInh, 0.5, 2.0, 3, false};
    spec.threads = 1;
    const auto serial = run_sweep(spec);
    spec.threads = 4;
    const auto parallel = run_sweep(spec);
    for (size_t k = 0; k < serial.values.size(); ++k) {
        CHECK(serial.status[k] == parallel.status[k]);
        if (serial.status[k] == CellStatus::Ok)
            CHECK(serial.values[k] == parallel.values[k]);
    }
}

TEST_CASE("spec validation") {
    SweepSpec spec = small_threshold_spec();
    spec.axis2.param = spec.axis1.param;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = small_threshold_spec();
    spec.axis1.points = 1;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = small_threshold_spec();
    spec.axis1.min = spec.axis1.max;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = small_threshold_spec();
    spec.axis1.log_spacing = true;
    spec.axis1.min = 0.0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("summary record carries the provenance contract") {
    const auto rec = summarize(table1_params(UnitsConvention::Angular),
                               UnitsConvention::Angular, 1e-5);
    const std::string json = rec.to_json();
    CHECK(json.find("afc_scaling") != std::string::npos);
    CHECK(json.find("G_eff^2 = G^2 / F_AFC") != std::string::npos);
    CHECK(json.find("angular") != std::string::npos);
    CHECK(rec.cooperativity == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(rec.cooperativity_eff == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
    CHECK(rec.lambda_crit == doctest::Approx(75e6 * std::sqrt(1.0 + 16.0 / 3.0)));
    CHECK(rec.rate_idler_memory_mhz <= rec.rate_memory_vs_both_mhz);
}
