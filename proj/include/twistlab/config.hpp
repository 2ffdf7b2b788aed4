#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace twistlab {

// Fully resolved settings of one invocation. Every artifact carries the
// SHA-256 of its canonical JSON so a result can be matched to its settings.
struct RunConfig {
    std::string command;
    std::uint64_t seed = 7;
    int threads = 0; // 0: TWISTLAB_THREADS or the hardware count
    int k_max = 20;      // series truncation: levels
    int alpha_max = 120; // series truncation: alpha components
    double quadrature_tolerance = 1e-10;
    int max_panels = 1 << 20;
    std::uint64_t point_budget = std::uint64_t{1} << 25;
    double resolution_constant = 0.25; // h <= pi * constant / sqrt(mu); reported, fixed
    // Subcommand parameters as given (after defaults), stringified.
    std::map<std::string, std::string> parameters;

    nlohmann::json to_json() const;
    std::string canonical() const; // compact JSON with sorted keys
    std::string sha256() const;

    // Applies the keys present in j; unknown keys throw DomainError.
    void merge(const nlohmann::json& j);
};

RunConfig load_config_file(const std::string& path);

// CSV text with a header row, the rows, and the trailing config digest line.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    std::string finish(const RunConfig& config) const;

private:
    std::size_t columns_;
    std::string text_;
};

// Shortest round-trip decimal text of a double.
std::string format_double(double v);

} // namespace twistlab
