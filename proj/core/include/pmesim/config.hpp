#pragma once

#include "pmesim/params.hpp"
#include "pmesim/units.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace pmesim {

// One parsed value: a number with an optional unit suffix.
struct ConfigValue {
    double number = 0.0;
    bool is_number = false;
    std::string suffix; // empty for dimensionless / strings
    std::string raw;
    int line = 0;
};

// Sectioned key-value text config (sections: [system], [afc], [sweep],
// [numerics]).  Unknown keys, duplicate keys and missing unit suffixes on
// dimensionful values are hard errors with line numbers.
class Config {
public:
    static Config parse_file(const std::filesystem::path& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;

    // Dimensionful rate -> rad/s under the file's (or given) convention.
    double angular_rate(const std::string& section, const std::string& key) const;
    double dimensionless(const std::string& section, const std::string& key) const;
    double seconds(const std::string& section, const std::string& key) const;
    std::string string_value(const std::string& section, const std::string& key) const;

    // The [numerics] units flag; defaults to ordinary.
    UnitsConvention units() const { return units_; }
    void override_units(UnitsConvention c) { units_ = c; }

    // Assembles SystemParams from [system] (+ [afc] when present).
    SystemParams system_params() const;

    const std::map<std::string, ConfigValue>& entries() const { return values_; }

private:
    ConfigValue at(const std::string& section, const std::string& key) const;

    std::map<std::string, ConfigValue> values_; // key: "section.key"
    UnitsConvention units_ = UnitsConvention::Ordinary;
};

} // namespace pmesim
