#pragma once

#include <map>
#include <string>
#include <vector>

#include "boseloc/detector.hpp"
#include "boseloc/model.hpp"

namespace boseloc {

// INI-style run configuration: [section] headers, key = value lines, '#' or
// ';' comments. Keys are flattened to "section.key".
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_text(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;  // comma separated

    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

// [model] section -> ModelParams; unset keys keep the defaults passed in.
ModelParams model_from_config(const Config& cfg, ModelParams defaults = {});

// [thresholds] section -> ScreeningThresholds.
ScreeningThresholds thresholds_from_config(const Config& cfg, ScreeningThresholds defaults = {});

double parse_double(const std::string& text, const std::string& key);
int parse_int(const std::string& text, const std::string& key);

}  // namespace boseloc
