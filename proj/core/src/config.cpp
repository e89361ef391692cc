#include "pmesim/config.hpp"

#include "pmesim/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pmesim {

namespace {

const std::array<const char*, 4> known_sections = {"system", "afc", "sweep",
                                                   "numerics"};

const std::map<std::string, std::array<const char*, 12>> known_keys = {
    {"system", {"kappa", "lambda", "g", "gamma", "memory_model"}},
    {"afc", {"finesse", "comb_spacing", "tooth_width", "storage_time"}},
    {"sweep",
     {"metric", "axis1_param", "axis1_min", "axis1_max", "axis1_points",
      "axis1_scale", "axis2_param", "axis2_min", "axis2_max", "axis2_points",
      "axis2_scale"}},
    {"numerics", {"units", "rel_tol", "threads", "oracle_modes", "oracle_window"}},
};

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool key_known(const std::string& section, const std::string& key) {
    auto it = known_keys.find(section);
    if (it == known_keys.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const char* k) { return k && key == k; });
}

} // namespace

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("malformed section header '" + t + "'", lineno);
            section = trim(t.substr(1, t.size() - 2));
            if (std::find_if(known_sections.begin(), known_sections.end(),
                             [&](const char* s) { return section == s; }) ==
                known_sections.end())
                throw ConfigError("unknown section [" + section + "]", lineno);
            continue;
        }
        if (section.empty())
            throw ConfigError("key outside of any section", lineno);
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", lineno);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("empty key or value", lineno);
        if (!key_known(section, key))
            throw ConfigError("unknown key '" + key + "' in [" + section + "]", lineno);
        const std::string full = section + "." + key;
        if (cfg.values_.count(full))
            throw ConfigError("duplicate key '" + key + "' in [" + section + "]", lineno);

        ConfigValue v;
        v.raw = value;
        v.line = lineno;
        // Split "number suffix"; pure strings keep number unset.
        std::istringstream vs(value);
        std::string num_tok, suffix_tok, extra;
        vs >> num_tok >> suffix_tok >> extra;
        if (!extra.empty())
            throw ConfigError("trailing tokens after value for '" + key + "'", lineno);
        const char* first = num_tok.data();
        const char* last = num_tok.data() + num_tok.size();
        double parsed = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, parsed);
        if (ec == std::errc() && ptr == last) {
            v.number = parsed;
            v.is_number = true;
            v.suffix = suffix_tok;
        } else {
            if (!suffix_tok.empty())
                throw ConfigError("could not parse numeric value '" + value + "'", lineno);
            v.suffix = "";
            v.number = 0.0;
        }
        cfg.values_.emplace(full, std::move(v));
    }
    if (cfg.has("numerics", "units"))
        cfg.units_ = units_convention_from_string(
            cfg.string_value("numerics", "units"));
    return cfg;
}

Config Config::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
}

ConfigValue Config::at(const std::string& section, const std::string& key) const {
    auto it = values_.find(section + "." + key);
    if (it == values_.end())
        throw ConfigError("missing required key '" + key + "' in [" + section + "]");
    return it->second;
}

double Config::angular_rate(const std::string& section, const std::string& key) const {
    const ConfigValue v = at(section, key);
    if (!v.is_number)
        throw ConfigError("key '" + key + "' is not numeric", v.line);
    if (v.suffix.empty())
        throw ConfigError("key '" + key + "' needs a frequency unit suffix "
                          "(Hz, kHz, MHz, GHz)", v.line);
    const auto scale = frequency_unit_scale(v.suffix);
    if (!scale)
        throw ConfigError("key '" + key + "' has non-frequency suffix '" +
                          v.suffix + "'", v.line);
    return to_angular_rate(v.number, *scale, units_);
}

double Config::dimensionless(const std::string& section, const std::string& key) const {
    const ConfigValue v = at(section, key);
    if (!v.is_number)
        throw ConfigError("key '" + key + "' is not numeric", v.line);
    if (!v.suffix.empty())
        throw ConfigError("key '" + key + "' must be dimensionless", v.line);
    return v.number;
}

double Config::seconds(const std::string& section, const std::string& key) const {
    const ConfigValue v = at(section, key);
    if (!v.is_number)
        throw ConfigError("key '" + key + "' is not numeric", v.line);
    const auto scale = time_unit_scale(v.suffix);
    if (!scale)
        throw ConfigError("key '" + key + "' needs a time unit suffix (s, ms, us, ns)",
                          v.line);
    return v.number * *scale;
}

std::string Config::string_value(const std::string& section,
                                 const std::string& key) const {
    return at(section, key).raw;
}

SystemParams Config::system_params() const {
    SystemParams p;
    p.kappa = angular_rate("system", "kappa");
    p.lambda = angular_rate("system", "lambda");
    p.g_coll = angular_rate("system", "g");
    p.gamma_inh = angular_rate("system", "gamma");

    std::string model = has("system", "memory_model")
                            ? string_value("system", "memory_model")
                            : "pure_lorentzian";
    if (model == "afc_modified" || model == "afc") {
        AfcParams afc;
        afc.finesse = dimensionless("afc", "finesse");
        afc.comb_spacing = angular_rate("afc", "comb_spacing");
        afc.tooth_width = has("afc", "tooth_width")
                              ? angular_rate("afc", "tooth_width")
                              : afc.comb_spacing / afc.finesse;
        afc.storage_time = has("afc", "storage_time")
                               ? seconds("afc", "storage_time")
                               : (units_ == UnitsConvention::Ordinary
                                      ? two_pi / afc.comb_spacing
                                      : 1.0 / afc.comb_spacing);
        p = afc_effective_params(p, afc);
    } else if (model != "pure_lorentzian" && model != "lorentzian") {
        throw ConfigError("unknown memory_model '" + model + "'");
    }
    p.validate();
    return p;
}

} // namespace pmesim
