#include <staticize/experiment.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

int run_subcommand(staticize::Mode mode, const std::string& config_path, const std::string& out_override) {
    using namespace staticize;
    ExperimentConfig cfg;
    try {
        cfg = ExperimentConfig::from_json(io::read_json(config_path), mode);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return config_error;
    } catch (const io::json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return config_error;
    }
    if (!out_override.empty()) cfg.out_dir = out_override;
    const RunResult r = run(cfg);
    if (!r.message.empty()) std::cerr << "error: " << r.message << "\n";
    if (mode == Mode::Plan && !r.record.is_null()) std::cout << r.record.dump(2) << "\n";
    for (const auto& f : r.files) std::cerr << "wrote " << f << "\n";
    return r.status;
}

} // namespace

int main(int argc, char** argv) {
    using staticize::Mode;
    CLI::App app{"staticize: clock-register staticization of time-dependent Hamiltonians"};
    app.require_subcommand(1);

    std::string config, out;
    const std::pair<const char*, Mode> subs[] = {{"plan", Mode::Plan},
                                                 {"verify", Mode::VerifyLemma},
                                                 {"staticize", Mode::Staticize},
                                                 {"protocol", Mode::Protocol},
                                                 {"sweep", Mode::Sweep}};
    const char* help[] = {"choose clock parameters for a target error", "run lemma check suites",
                          "staticize a Hamiltonian and compare against exact evolution",
                          "build, analyze and simulate a state-transfer protocol", "sweep clock parameters"};
    int status = 0;
    for (std::size_t i = 0; i < std::size(subs); ++i) {
        CLI::App* sc = app.add_subcommand(subs[i].first, help[i]);
        sc->add_option("--config", config, "experiment JSON")->required()->check(CLI::ExistingFile);
        sc->add_option("--out", out, "output directory (overrides the config)");
        const Mode m = subs[i].second;
        sc->callback([&, m] { status = run_subcommand(m, config, out); });
    }
    CLI11_PARSE(app, argc, argv);
    return status;
}
