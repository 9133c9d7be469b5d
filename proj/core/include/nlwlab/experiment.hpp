#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nlwlab/params.hpp"

namespace nlwlab {

enum class ExperimentKind { PdeScan, WEvolve, ModulateTrack, TodaSweep, Tables };
std::string to_string(ExperimentKind kind);
ExperimentKind kind_from_string(const std::string& text);

// Flat "key = value" text; '#' starts a comment. Later assignments override earlier ones.
class Config {
public:
    static Config parse(const std::string& text, const std::string& origin = "<string>");
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// Validated configuration with every schema key resolved to a value.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Tables;
    Params params{3.0};
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = ".";
    std::map<std::string, std::string> resolved;

    double real(const std::string& key) const;
    int integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
};

// Throws UsageError on unknown keys, malformed values, or keys foreign to the kind.
ExperimentConfig resolve(const Config& config);
// One line per key: name, type, default, kinds, description.
std::string schema_doc();
// A config text that replays the run.
std::string manifest_text(const ExperimentConfig& config);

struct RunResult {
    int status = 0;
    std::vector<std::string> artifacts;  // paths relative to out_dir
    std::vector<std::string> log;
};

RunResult run(const ExperimentConfig& config);

}  // namespace nlwlab
