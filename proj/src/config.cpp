#include "twistlab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "twistlab/encoding.hpp"
#include "twistlab/error.hpp"

namespace twistlab {

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["seed"] = seed;
    j["threads"] = threads;
    j["k_max"] = k_max;
    j["alpha_max"] = alpha_max;
    j["quadrature_tolerance"] = quadrature_tolerance;
    j["max_panels"] = max_panels;
    j["point_budget"] = point_budget;
    j["resolution_constant"] = resolution_constant;
    j["parameters"] = parameters;
    return j;
}

std::string RunConfig::canonical() const { return to_json().dump(); }

std::string RunConfig::sha256() const { return sha256_hex(canonical()); }

void RunConfig::merge(const nlohmann::json& j) {
    if (!j.is_object()) throw DomainError("config must be a JSON object");
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            if (key == "seed") seed = it->get<std::uint64_t>();
            else if (key == "threads") threads = it->get<int>();
            else if (key == "k_max") k_max = it->get<int>();
            else if (key == "alpha_max") alpha_max = it->get<int>();
            else if (key == "quadrature_tolerance") quadrature_tolerance = it->get<double>();
            else if (key == "max_panels") max_panels = it->get<int>();
            else if (key == "point_budget") point_budget = it->get<std::uint64_t>();
            else throw DomainError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed config: ") + e.what());
    }
    if ((j.contains("threads") && threads < 1) || k_max < 0 || alpha_max < 0 || max_panels < 1 || !(quadrature_tolerance > 0.0))
        throw DomainError("config values out of range");
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file " + path);
    RunConfig c;
    try {
        c.merge(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("malformed config: ") + e.what());
    }
    return c;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

std::string CsvWriter::finish(const RunConfig& config) const {
    return text_ + "# config-sha256=" + config.sha256() + "\n";
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace twistlab
