#include <CLI11.hpp>

#include <iostream>

#include "nlwlab/errors.hpp"
#include "nlwlab/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nlwlab: blow-up experiments for the 1D semilinear wave equation"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir;
    int threads = 0;
    long long seed = -1;
    bool show_schema = false;
    app.add_flag("--schema", show_schema, "Print the config schema and exit");

    const char* kinds[][2] = {{"pde-scan", "Evolve Cauchy data, reconstruct and classify the blow-up curve"},
                              {"w-evolve", "Self-similar evolutions with energy monitoring"},
                              {"modulate-track", "Evolve a planted multi-soliton and decompose it along s"},
                              {"toda-sweep", "Integrate the Toda system and fit the equidistribution slopes"},
                              {"tables", "Soliton integral table"}};
    for (auto& k : kinds) {
        CLI::App* sub = app.add_subcommand(k[0], k[1]);
        sub->add_option("--config", config_path, "Key-value config file");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Seed for randomized data")->check(CLI::NonNegativeNumber);
    }
    CLI11_PARSE(app, argc, argv);

    if (show_schema) {
        std::cout << nlwlab::schema_doc();
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 64;
    }
    const std::string kind = app.get_subcommands().front()->get_name();
    try {
        nlwlab::Config config = config_path.empty() ? nlwlab::Config{} : nlwlab::Config::load(config_path);
        if (config.has("kind") && config.values().at("kind") != kind)
            throw nlwlab::UsageError("config kind '" + config.values().at("kind") + "' does not match subcommand " + kind);
        config.set("kind", kind);
        if (!out_dir.empty()) config.set("out", out_dir);
        if (threads > 0) config.set("threads", std::to_string(threads));
        if (seed >= 0) config.set("seed", std::to_string(seed));
        const nlwlab::ExperimentConfig resolved = nlwlab::resolve(config);
        const nlwlab::RunResult result = nlwlab::run(resolved);
        for (const auto& line : result.log) std::cout << line << '\n';
        for (const auto& a : result.artifacts) std::cout << "wrote " << resolved.out_dir << '/' << a << '\n';
        return result.status;
    } catch (const nlwlab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
