#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvcqed/errors.hpp"

namespace tvcqed::cli {

using nlohmann::json;

struct ConfigIssue {
    std::string path;
    std::string message;
};

// All problems found in one config document.
class ConfigError : public ValidationError {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

enum class OutputFormat { csv, json };

struct Scenario {
    std::string kind;
    std::string name;  // output file stem: preset name or kind
    std::uint64_t seed = 0;
    int samples = 0;
    std::string out_dir = ".";
    std::vector<OutputFormat> formats{OutputFormat::csv};
    json resolved;  // full config with every default filled in
};

// Strict validation: unknown fields, wrong types, missing required fields and module
// preconditions are collected and thrown together as ConfigError.
Scenario validate_config(const json& doc);
Scenario load_config(const std::filesystem::path& path);

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> notes;  // written as header comments
};

std::vector<Table> run_scenario(const Scenario& s);

std::string render_csv(const Scenario& s, const Table& t);
std::string render_json(const Scenario& s, const std::vector<Table>& tables);

// Writes every table in every requested format; returns the written paths.
std::vector<std::filesystem::path> write_outputs(const Scenario& s, const std::vector<Table>& tables);

// Named figure presets (JSON text).
const std::map<std::string, std::string>& presets();
json preset(const std::string& name);

}  // namespace tvcqed::cli
