#pragma once

#include "pmesim/metrics.hpp"
#include "pmesim/params.hpp"
#include "pmesim/units.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pmesim {

enum class SweepMetric {
    EntanglementRateIdlerMemory,
    EntanglementRateMemoryVsBoth,
    HeraldingEfficiency,
    Threshold,
    PhotonFluxIdler,
};

std::string to_string(SweepMetric m);
SweepMetric sweep_metric_from_string(const std::string& s);

// Which SystemParams field an axis drives.
enum class SweepParameter { Kappa, Lambda, GColl, GammaInh };

std::string to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(const std::string& s);

struct SweepAxis {
    SweepParameter param = SweepParameter::Lambda;
    double min = 0.0; // rad/s
    double max = 0.0;
    int points = 2;
    bool log_spacing = false;

    std::vector<double> values() const;
};

struct SweepSpec {
    SweepAxis axis1;
    SweepAxis axis2;
    SystemParams fixed;
    SweepMetric metric = SweepMetric::EntanglementRateIdlerMemory;
    UnitsConvention units = UnitsConvention::Ordinary;
    double rel_tol = 1e-6;
    int threads = 0; // 0: hardware concurrency

    void validate() const;
};

enum class CellStatus { Ok, AboveThreshold, Error };

std::string to_string(CellStatus s);

struct SweepResult {
    SweepSpec spec;
    std::vector<double> axis1_values;
    std::vector<double> axis2_values;
    // Row-major [i1 * n2 + i2]; above-threshold and error cells carry NaN.
    std::vector<double> values;
    std::vector<CellStatus> status;
    std::map<std::string, std::string> provenance;

    double at(int i1, int i2) const {
        return values[static_cast<size_t>(i1) * axis2_values.size() + i2];
    }
    CellStatus status_at(int i1, int i2) const {
        return status[static_cast<size_t>(i1) * axis2_values.size() + i2];
    }
};

// Evaluates the metric over the grid with a bounded worker pool; per-cell
// errors are recorded in the status plane, never aborting the sweep.
SweepResult run_sweep(const SweepSpec& spec);

// lambda_crit per grid cell (the metric is forced to Threshold).
SweepResult threshold_curve(SweepSpec spec);

// Canonical CSV serialization: provenance as '# key = value' comments, then
// 'axis1,axis2,value,status' rows.  Values round-trip bit-for-bit.
void write_csv(const SweepResult& result, const std::filesystem::path& path);
SweepResult read_csv(const std::filesystem::path& path);

std::string to_json(const SweepResult& result);

// Summary record for one parameter set: rates, heralding efficiency,
// fluxes, threshold, cooperativities and the AFC scaling law in use.
struct SummaryRecord {
    SystemParams params;
    UnitsConvention units = UnitsConvention::Ordinary;
    double rate_idler_memory_mhz = 0.0;
    double rate_memory_vs_both_mhz = 0.0;
    double heralding = 0.0;
    double flux_idler_mhz = 0.0;
    double flux_signal_mhz = 0.0;
    double flux_memory_mhz = 0.0;
    double lambda_crit = 0.0; // rad/s
    double cooperativity = 0.0;
    double cooperativity_eff = 0.0;

    std::string to_json() const;
};

SummaryRecord summarize(const SystemParams& params, UnitsConvention units,
                        double rel_tol = 1e-6);

// Shared provenance block embedded in every output file.
std::map<std::string, std::string> provenance_block(const SystemParams& params,
                                                    UnitsConvention units);

} // namespace pmesim
