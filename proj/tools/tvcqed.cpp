// Command-line front end: run | validate | presets.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "tvcqed/cli/scenario.hpp"

namespace {

using namespace tvcqed;
using cli::json;

enum Exit { ok = 0, failure = 1, config_error = 2, numerical_error = 3 };

void report(const std::exception& e, const char* kind, bool as_json) {
    if (!as_json) {
        std::cerr << "error: " << e.what() << "\n";
        return;
    }
    json err{{"kind", kind}, {"message", e.what()}};
    if (const auto* c = dynamic_cast<const cli::ConfigError*>(&e)) {
        json list = json::array();
        for (const auto& i : c->issues()) list.push_back({{"path", i.path}, {"message", i.message}});
        err["issues"] = list;
    }
    if (const auto* n = dynamic_cast<const NumericalError*>(&e); n && n->has_time()) err["time"] = n->time();
    std::cerr << json{{"error", err}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-variable cavity QED scenarios"};
    app.set_version_flag("--version", std::string(TVCQED_VERSION));
    app.require_subcommand(1);

    std::string config_path, out_dir, format, preset_name;
    std::optional<std::uint64_t> seed;
    bool error_json = false;

    auto* run = app.add_subcommand("run", "Run a scenario and write its tables");
    run->add_option("config", config_path, "Scenario JSON file")->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    run->add_option("--format", format, "Output format (overrides output.formats)")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--seed", seed, "RNG seed (overrides seed)");
    run->add_option("--preset", preset_name, "Named figure preset (fig2 ... fig7)");
    run->add_flag("--error-json", error_json, "Report errors as JSON on stderr");

    auto* validate = app.add_subcommand("validate", "Validate a scenario and print the resolved config");
    validate->add_option("config", config_path, "Scenario JSON file")->check(CLI::ExistingFile);
    validate->add_option("--preset", preset_name, "Named figure preset");
    validate->add_flag("--error-json", error_json, "Report errors as JSON on stderr");

    std::string dump_name;
    auto* list = app.add_subcommand("presets", "List presets or print one");
    list->add_option("--dump", dump_name, "Print the named preset config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            if (!dump_name.empty()) {
                std::cout << cli::preset(dump_name).dump(2) << "\n";
            } else {
                for (const auto& [name, text] : cli::presets()) {
                    std::cout << name << "  " << json::parse(text).at("kind").get<std::string>() << "\n";
                }
            }
            return ok;
        }

        if (config_path.empty() == preset_name.empty()) {
            throw cli::ConfigError(std::vector<cli::ConfigIssue>{{"<command line>", "give exactly one of a config file or --preset"}});
        }
        json doc;
        if (!preset_name.empty()) {
            doc = cli::preset(preset_name);
        } else {
            std::ifstream in(config_path);
            try {
                doc = json::parse(in);
            } catch (const json::parse_error& e) {
                throw cli::ConfigError(std::vector<cli::ConfigIssue>{{config_path, std::string("malformed JSON: ") + e.what()}});
            }
        }
        // Overrides go into the document so the written header stays self-describing.
        if (doc.is_object()) {
            if (seed) doc["seed"] = *seed;
            if (!out_dir.empty() || !format.empty()) {
                if (!doc["output"].is_object()) doc["output"] = json::object();
                if (!out_dir.empty()) doc["output"]["dir"] = out_dir;
                if (!format.empty()) doc["output"]["formats"] = json::array({format});
            }
        }
        const auto scenario = cli::validate_config(doc);
        if (validate->parsed()) {
            std::cout << scenario.resolved.dump(2) << "\n";
            return ok;
        }
        const auto tables = cli::run_scenario(scenario);
        for (const auto& path : cli::write_outputs(scenario, tables)) std::cout << path.string() << "\n";
        return ok;
    } catch (const NumericalError& e) {
        report(e, "numerical", error_json);
        return numerical_error;
    } catch (const ValidationError& e) {
        report(e, "config", error_json);
        return config_error;
    } catch (const DomainError& e) {
        report(e, "config", error_json);
        return config_error;
    } catch (const std::exception& e) {
        report(e, "internal", error_json);
        return failure;
    }
}
