#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "evospec/errors.hpp"
#include "evospec/experiments.hpp"
#include "evospec/quantum_sim.hpp"
#include "json.hpp"

using namespace evospec;
using nlohmann::json;

namespace {

// Flags that override config fields; only flags given on the command line are applied.
struct Overrides {
    std::string config_path;
    json patch = json::object();
    std::vector<std::function<void()>> setters;

    template <class T>
    void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
        auto value = std::make_shared<T>();
        CLI::Option* opt = app.add_option(flag, *value, help);
        setters.push_back([this, opt, value, key] {
            if (opt->count() == 0) return;
            if (key.rfind("trotter.", 0) == 0)
                patch["trotter"][key.substr(8)] = *value;
            else
                patch[key] = *value;
        });
    }

    ExperimentConfig resolve() {
        json doc = json::object();
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw ConfigError("cannot read config '" + config_path + "'");
            std::stringstream ss;
            ss << f.rdbuf();
            try {
                doc = json::parse(ss.str());
            } catch (const json::exception& e) {
                throw ConfigError("malformed JSON in '" + config_path + "': " + e.what());
            }
        }
        for (auto& s : setters) s();
        doc.merge_patch(patch);
        return config_from_json(doc.dump());
    }
};

void add_common(CLI::App& app, Overrides& o) {
    app.add_option("--config", o.config_path, "JSON config document")->check(CLI::ExistingFile);
    o.add<std::string>(app, "--out", "out_dir", "output directory");
    o.add<std::uint64_t>(app, "--seed", "seed", "base RNG seed");
    o.add<int>(app, "--n", "n", "number of qubits");
    o.add<double>(app, "--J", "J", "coupling");
    o.add<double>(app, "--g", "g", "transverse field");
    o.add<std::string>(app, "--boundary", "boundary", "open or periodic");
    o.add<std::string>(app, "--state", "state", "plus_product or phi_optimal");
    o.add<double>(app, "--tau-step", "tau_step", "imaginary time per k");
    o.add<double>(app, "--dt", "dt", "real time per k");
    o.add<int>(app, "--K", "K", "largest signal index (even)");
    o.add<int>(app, "--M", "trotter.M", "Trotter steps");
    o.add<int>(app, "--order", "trotter.order", "Trotter order (1 or even)");
    o.add<std::string>(app, "--scheme", "trotter.scheme", "gamma or per_term");
    o.add<std::size_t>(app, "--samples", "num_samples", "samples per signal point");
    o.add<int>(app, "--q", "q", "median-of-means groups");
    o.add<std::string>(app, "--estimator", "estimator", "median_of_means or empirical_mean");
    o.add<double>(app, "--TF", "TF", "ESPRIT truncation factor");
    o.add<int>(app, "--repetitions", "repetitions", "seeds per sweep point");
    o.add<int>(app, "--S", "S", "poles per synthetic signal");
    o.add<int>(app, "--audit-instances", "audit_instances", "instances per theorem");
    o.add<std::string>(app, "--policy", "policy", "serial or parallel");
}

PipelineResult run_pipeline(const std::string& name, const ExperimentConfig& cfg) {
    if (name == "mc") return run_mc_pipeline(cfg, cfg.seed);
    if (name == "quantum") return run_quantum_pipeline(cfg, cfg.seed);
    if (name == "dequant") return run_dequant_pipeline(cfg, cfg.seed);
    throw ConfigError("unknown pipeline '" + name + "'");
}

void write_text(const std::string& path, const std::string& text) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text << '\n';
}

std::string path_in(const ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

// Exact spectrum and noiseless signals for the configured model and state.
std::string oracle_json(const ExperimentConfig& cfg) {
    if (cfg.n > kDenseCap) throw ResourceLimit("oracle needs n <= " + std::to_string(kDenseCap));
    const LocalHamiltonian h = cfg.hamiltonian();
    const ShiftedHamiltonian sh = shift_terms(h);
    const CVec phi = make_state(cfg.state, cfg.n)->dense();
    const CMat hs = dense_matrix(sh.base);
    auto values = [](const Signal& s) {
        json a = json::array();
        for (const cplx& v : s.values) a.push_back({{"re", v.real()}, {"im", v.imag()}});
        return a;
    };
    const RescaledHamiltonian rh = rescale_into_half_band(h);
    json gD = json::array();
    for (int k = 0; k <= cfg.K; ++k) gD.push_back(exact_gD(phi, rh, k));
    json j = {{"n", cfg.n},
              {"g", cfg.g},
              {"state", cfg.state},
              {"spectrum", exact_spectrum(h)},
              {"total_shift", sh.total_shift},
              {"imaginary_time", values(exact_signal(phi, hs, cfg.tau_step, cfg.K, SignalKind::ImaginaryTime))},
              {"real_time", values(exact_signal(phi, hs, cfg.dt, cfg.K, SignalKind::RealTime))},
              {"one_minus_h", gD},
              {"rescale", {{"shift", rh.shift}, {"scale", rh.scale}}}};
    return j.dump(2);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral estimation from sampled time-evolution signals"};
    app.require_subcommand(1, 1);

    Overrides o_signal, o_estimate, o_oracle, o_fig2, o_fig3, o_fig4, o_trotter, o_bounds;
    std::string pipeline = "mc";

    auto* signal = app.add_subcommand("signal", "estimate g(k) for k = 0..K and write a CSV");
    add_common(*signal, o_signal);
    signal->add_option("--pipeline", pipeline, "mc, quantum or dequant")
        ->check(CLI::IsMember({"mc", "quantum", "dequant"}));

    auto* estimate = app.add_subcommand("estimate", "signal plus ESPRIT; writes a JSON estimate");
    add_common(*estimate, o_estimate);
    estimate->add_option("--pipeline", pipeline, "mc, quantum or dequant")
        ->check(CLI::IsMember({"mc", "quantum", "dequant"}));

    auto* oracle = app.add_subcommand("oracle", "exact spectrum and noiseless signals");
    add_common(*oracle, o_oracle);
    auto* fig2 = app.add_subcommand("figure2", "noiseless recovery against K");
    add_common(*fig2, o_fig2);
    auto* fig3 = app.add_subcommand("figure3", "sampled signal traces");
    add_common(*fig3, o_fig3);
    auto* fig4 = app.add_subcommand("figure4", "spectral estimates against g, K and |Sigma|");
    add_common(*fig4, o_fig4);
    auto* trotter = app.add_subcommand("trotter", "first-order Trotter error against M");
    add_common(*trotter, o_trotter);
    auto* bounds = app.add_subcommand("bounds", "recovery bound audit on synthetic signals");
    add_common(*bounds, o_bounds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code_for(ErrorKind::Config);
    }

    try {
        auto report = [](const RunReport& r) {
            for (const auto& f : r.files) std::cerr << "wrote " << f << '\n';
            std::cout << r.summary << '\n';
        };
        if (signal->parsed()) {
            const ExperimentConfig cfg = o_signal.resolve();
            const PipelineResult r = run_pipeline(pipeline, cfg);
            const std::string path = path_in(cfg, "signal_" + pipeline + ".csv");
            write_signal_csv(path, r, cfg);
            std::cerr << "wrote " << path << '\n';
        } else if (estimate->parsed()) {
            const ExperimentConfig cfg = o_estimate.resolve();
            const std::string text = to_json(run_pipeline(pipeline, cfg));
            const std::string path = path_in(cfg, "estimate_" + pipeline + ".json");
            write_text(path, text);
            std::cerr << "wrote " << path << '\n';
            std::cout << text << '\n';
        } else if (oracle->parsed()) {
            const ExperimentConfig cfg = o_oracle.resolve();
            const std::string text = oracle_json(cfg);
            const std::string path = path_in(cfg, "oracle.json");
            write_text(path, text);
            std::cerr << "wrote " << path << '\n';
            std::cout << text << '\n';
        } else if (fig2->parsed()) {
            report(run_figure2_analog(o_fig2.resolve()));
        } else if (fig3->parsed()) {
            report(run_figure3_analog(o_fig3.resolve()));
        } else if (fig4->parsed()) {
            report(run_figure4_analog(o_fig4.resolve()));
        } else if (trotter->parsed()) {
            report(run_trotter_sweep(o_trotter.resolve()));
        } else if (bounds->parsed()) {
            report(run_bounds_audit(o_bounds.resolve()));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return exit_code_for(ErrorKind::ResourceLimit);
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(ErrorKind::Config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(ErrorKind::Numeric);
    }
    return 0;
}
