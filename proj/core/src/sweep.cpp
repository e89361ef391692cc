#include "pmesim/sweep.hpp"

#include "pmesim/version.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace pmesim {

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

double parse_double(std::string_view s, int line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("bad numeric field '" + std::string(s) + "'", line);
    return v;
}

void set_param(SystemParams& p, SweepParameter which, double value) {
    switch (which) {
        case SweepParameter::Kappa: p.kappa = value; break;
        case SweepParameter::Lambda: p.lambda = value; break;
        case SweepParameter::GColl: p.g_coll = value; break;
        case SweepParameter::GammaInh: p.gamma_inh = value; break;
    }
}

double eval_metric(const SystemParams& p, SweepMetric metric, double rel_tol) {
    switch (metric) {
        case SweepMetric::EntanglementRateIdlerMemory:
            return entanglement_rate(p, EntanglementKind::IdlerMemory, rel_tol).value;
        case SweepMetric::EntanglementRateMemoryVsBoth:
            return entanglement_rate(p, EntanglementKind::MemoryVsBoth, rel_tol).value;
        case SweepMetric::HeraldingEfficiency:
            return heralding_efficiency(p, rel_tol).eta;
        case SweepMetric::Threshold:
            return stability_threshold(p);
        case SweepMetric::PhotonFluxIdler:
            return photon_flux(p, OutputMode::Idler, rel_tol).value;
    }
    throw DomainError("unknown sweep metric");
}

} // namespace

std::string to_string(SweepMetric m) {
    switch (m) {
        case SweepMetric::EntanglementRateIdlerMemory: return "rate_idler_memory";
        case SweepMetric::EntanglementRateMemoryVsBoth: return "rate_memory_vs_both";
        case SweepMetric::HeraldingEfficiency: return "heralding_efficiency";
        case SweepMetric::Threshold: return "threshold";
        case SweepMetric::PhotonFluxIdler: return "photon_flux_idler";
    }
    return "unknown";
}

SweepMetric sweep_metric_from_string(const std::string& s) {
    if (s == "rate_idler_memory") return SweepMetric::EntanglementRateIdlerMemory;
    if (s == "rate_memory_vs_both") return SweepMetric::EntanglementRateMemoryVsBoth;
    if (s == "heralding_efficiency") return SweepMetric::HeraldingEfficiency;
    if (s == "threshold") return SweepMetric::Threshold;
    if (s == "photon_flux_idler") return SweepMetric::PhotonFluxIdler;
    throw ConfigError("unknown metric '" + s + "'");
}

std::string to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Kappa: return "kappa";
        case SweepParameter::Lambda: return "lambda";
        case SweepParameter::GColl: return "g";
        case SweepParameter::GammaInh: return "gamma";
    }
    return "unknown";
}

SweepParameter sweep_parameter_from_string(const std::string& s) {
    if (s == "kappa") return SweepParameter::Kappa;
    if (s == "lambda") return SweepParameter::Lambda;
    if (s == "g" || s == "g_coll") return SweepParameter::GColl;
    if (s == "gamma" || s == "gamma_inh") return SweepParameter::GammaInh;
    throw ConfigError("unknown sweep parameter '" + s + "'");
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> v(points);
    if (log_spacing) {
        const double lmin = std::log(min), lmax = std::log(max);
        for (int i = 0; i < points; ++i)
            v[i] = std::exp(lmin + (lmax - lmin) * i / (points - 1));
    } else {
        for (int i = 0; i < points; ++i)
            v[i] = min + (max - min) * i / (points - 1);
    }
    return v;
}

void SweepSpec::validate() const {
    fixed.validate();
    for (const SweepAxis* ax : {&axis1, &axis2}) {
        if (ax->points < 2) throw DomainError("sweep axes need at least 2 points");
        if (!(ax->min < ax->max)) throw DomainError("sweep axis range is empty");
        if (ax->log_spacing && !(ax->min > 0.0))
            throw DomainError("log-spaced axis needs positive bounds");
        if (ax->param != SweepParameter::Lambda && !(ax->min > 0.0))
            throw DomainError("physical rate axes need positive bounds");
    }
    if (axis1.param == axis2.param)
        throw DomainError("swept axes must be distinct parameters");
}

std::string to_string(CellStatus s) {
    switch (s) {
        case CellStatus::Ok: return "ok";
        case CellStatus::AboveThreshold: return "above_threshold";
        case CellStatus::Error: return "error";
    }
    return "unknown";
}

std::map<std::string, std::string> provenance_block(const SystemParams& params,
                                                    UnitsConvention units) {
    std::map<std::string, std::string> p;
    p["artifact_version"] = version_string;
    p["units"] = to_string(units);
    p["afc_scaling"] = afc_scaling_law();
    p["memory_model"] = to_string(params.memory_model);
    p["kappa_rad_s"] = format_double(params.kappa);
    p["lambda_rad_s"] = format_double(params.lambda);
    p["g_rad_s"] = format_double(params.g_coll);
    p["gamma_rad_s"] = format_double(params.gamma_inh);
    if (params.afc) {
        p["afc_finesse"] = format_double(params.afc->finesse);
        p["afc_comb_spacing_rad_s"] = format_double(params.afc->comb_spacing);
        p["afc_storage_time_s"] = format_double(params.afc->storage_time);
    }
    return p;
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult res;
    res.spec = spec;
    res.axis1_values = spec.axis1.values();
    res.axis2_values = spec.axis2.values();
    const size_t n1 = res.axis1_values.size();
    const size_t n2 = res.axis2_values.size();
    res.values.assign(n1 * n2, std::numeric_limits<double>::quiet_NaN());
    res.status.assign(n1 * n2, CellStatus::Error);

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t idx = next.fetch_add(1);
            if (idx >= n1 * n2) return;
            SystemParams p = spec.fixed;
            set_param(p, spec.axis1.param, res.axis1_values[idx / n2]);
            set_param(p, spec.axis2.param, res.axis2_values[idx % n2]);
            try {
                if (spec.metric != SweepMetric::Threshold) {
                    const double lam_crit =
                        (p.kappa / 2.0) * std::sqrt(1.0 + p.cooperativity_eff());
                    if (p.lambda >= lam_crit) {
                        res.status[idx] = CellStatus::AboveThreshold;
                        continue;
                    }
                }
                res.values[idx] = eval_metric(p, spec.metric, spec.rel_tol);
                res.status[idx] = CellStatus::Ok;
            } catch (const InstabilityError&) {
                res.status[idx] = CellStatus::AboveThreshold;
            } catch (const Error&) {
                res.status[idx] = CellStatus::Error;
            }
        }
    };

    unsigned n_threads = spec.threads > 0
                             ? static_cast<unsigned>(spec.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n1 * n2));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    res.provenance = provenance_block(spec.fixed, spec.units);
    res.provenance["metric"] = to_string(spec.metric);
    res.provenance["axis1"] = to_string(spec.axis1.param);
    res.provenance["axis2"] = to_string(spec.axis2.param);
    return res;
}

SweepResult threshold_curve(SweepSpec spec) {
    spec.metric = SweepMetric::Threshold;
    return run_sweep(spec);
}

void write_csv(const SweepResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw NumericError("cannot open output file " + path.string());
    for (const auto& [k, v] : result.provenance)
        out << "# " << k << " = " << v << "\n";
    out << "axis1,axis2,value,status\n";
    const size_t n2 = result.axis2_values.size();
    for (size_t i1 = 0; i1 < result.axis1_values.size(); ++i1) {
        for (size_t i2 = 0; i2 < n2; ++i2) {
            const size_t idx = i1 * n2 + i2;
            out << format_double(result.axis1_values[i1]) << ','
                << format_double(result.axis2_values[i2]) << ',';
            if (result.status[idx] == CellStatus::Ok)
                out << format_double(result.values[idx]);
            out << ',' << to_string(result.status[idx]) << "\n";
        }
    }
}

SweepResult read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file " + path.string());
    SweepResult res;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    std::vector<double> a1, a2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                std::string val = line.substr(eq + 1);
                auto strip = [](std::string& s) {
                    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
                    while (!s.empty() && s.back() == ' ') s.pop_back();
                };
                strip(key);
                strip(val);
                res.provenance[key] = val;
            }
            continue;
        }
        if (!header_seen) {
            if (line != "axis1,axis2,value,status")
                throw ConfigError("unexpected CSV header '" + line + "'", lineno);
            header_seen = true;
            continue;
        }
        std::array<std::string, 4> field;
        size_t start = 0;
        for (int f = 0; f < 4; ++f) {
            const size_t comma = line.find(',', start);
            if (f < 3 && comma == std::string::npos)
                throw ConfigError("expected 4 CSV fields", lineno);
            field[f] = line.substr(start, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - start);
            start = comma + 1;
        }
        const double v1 = parse_double(field[0], lineno);
        const double v2 = parse_double(field[1], lineno);
        if (a1.empty() || v1 != a1.back()) a1.push_back(v1);
        if (a1.size() == 1) a2.push_back(v2);
        if (field[3] == "ok") {
            res.values.push_back(parse_double(field[2], lineno));
            res.status.push_back(CellStatus::Ok);
        } else if (field[3] == "above_threshold") {
            res.values.push_back(std::numeric_limits<double>::quiet_NaN());
            res.status.push_back(CellStatus::AboveThreshold);
        } else if (field[3] == "error") {
            res.values.push_back(std::numeric_limits<double>::quiet_NaN());
            res.status.push_back(CellStatus::Error);
        } else {
            throw ConfigError("unknown cell status '" + field[3] + "'", lineno);
        }
    }
    res.axis1_values = std::move(a1);
    res.axis2_values = std::move(a2);
    if (res.values.size() != res.axis1_values.size() * res.axis2_values.size())
        throw ConfigError("CSV grid is not rectangular");
    return res;
}

std::string to_json(const SweepResult& result) {
    nlohmann::json j;
    j["provenance"] = result.provenance;
    j["axis1"] = result.axis1_values;
    j["axis2"] = result.axis2_values;
    j["values"] = result.values;
    std::vector<std::string> st;
    st.reserve(result.status.size());
    for (auto s : result.status) st.push_back(to_string(s));
    j["status"] = st;
    return j.dump(2);
}

SummaryRecord summarize(const SystemParams& params, UnitsConvention units,
                        double rel_tol) {
    SummaryRecord rec;
    rec.params = params;
    rec.units = units;
    rec.rate_idler_memory_mhz = rate_to_mhz(
        entanglement_rate(params, EntanglementKind::IdlerMemory, rel_tol).value);
    rec.rate_memory_vs_both_mhz = rate_to_mhz(
        entanglement_rate(params, EntanglementKind::MemoryVsBoth, rel_tol).value);
    rec.heralding = heralding_efficiency(params, rel_tol).eta;
    rec.flux_idler_mhz = rate_to_mhz(photon_flux(params, OutputMode::Idler, rel_tol).value);
    rec.flux_signal_mhz = rate_to_mhz(photon_flux(params, OutputMode::Signal, rel_tol).value);
    rec.flux_memory_mhz = rate_to_mhz(photon_flux(params, OutputMode::Memory, rel_tol).value);
    rec.lambda_crit = stability_threshold(params);
    rec.cooperativity = params.cooperativity();
    rec.cooperativity_eff = params.cooperativity_eff();
    return rec;
}

std::string SummaryRecord::to_json() const {
    nlohmann::json j;
    j["provenance"] = provenance_block(params, units);
    j["rate_idler_memory_mhz"] = rate_idler_memory_mhz;
    j["rate_memory_vs_both_mhz"] = rate_memory_vs_both_mhz;
    j["heralding_efficiency"] = heralding;
    j["flux_idler_mhz"] = flux_idler_mhz;
    j["flux_signal_mhz"] = flux_signal_mhz;
    j["flux_memory_mhz"] = flux_memory_mhz;
    j["lambda_crit_rad_s"] = lambda_crit;
    j["cooperativity"] = cooperativity;
    j["cooperativity_eff"] = cooperativity_eff;
    return j.dump(2);
}

} // namespace pmesim
