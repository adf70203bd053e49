// vacrad: scenario runner for parametrically driven, forced oscillators.
//
//   vacrad run       --config scenario.toml [--out PREFIX]
//   vacrad sweep     --config scenario.toml [--out PREFIX] [--threads N] [--plot svg]
//   vacrad compare   --config scenario.toml [--out PREFIX]
//   vacrad multimode --config system.json   [--out PREFIX] [--threads N]
//
// Exit codes: 0 success, 1 other failure, 2 configuration error (including
// parameters the solver rejects), 3 convergence failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "vacrad/scenario.hpp"

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::size_t threads = 0;
    std::string plot;
};

void add_common(CLI::App* cmd, Flags& f, bool sweepish) {
    cmd->add_option("--config", f.config, "scenario file")->required();
    cmd->add_option("--out", f.out, "output path prefix (overrides the file)");
    cmd->add_option("--threads", f.threads, "worker threads (default: hardware concurrency)");
    if (sweepish)
        cmd->add_option("--plot", f.plot, "plot format")->check(CLI::IsMember({"none", "svg"}));
}

std::size_t threads_or_default(std::size_t n) {
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

vacrad::Scenario load(const Flags& f) {
    vacrad::Scenario sc = vacrad::load_scenario(f.config);
    if (!f.out.empty()) sc.output_prefix = f.out;
    if (!f.plot.empty()) sc.plot = f.plot;
    return sc;
}

void print_result(const vacrad::MethodResult& r) {
    std::printf("%-9s |A|=%.12g |B|=%.6e |alpha|=%.12g occupation=%.12g\n", vacrad::to_string(r.method).c_str(),
                std::abs(r.A), std::abs(r.B), std::abs(r.map.alpha), r.state.occupation);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Squeezed coherent states from parametric drive plus classical force"};
    app.set_version_flag("--version", std::string(vacrad::version));
    app.require_subcommand(1);

    Flags run_f, sweep_f, cmp_f, mm_f;
    auto* run_cmd = app.add_subcommand("run", "single evaluation: summary JSON and sampled solution");
    add_common(run_cmd, run_f, false);
    auto* sweep_cmd = app.add_subcommand("sweep", "|alpha| against the force centre t_f");
    add_common(sweep_cmd, sweep_f, true);
    auto* cmp_cmd = app.add_subcommand("compare", "side-by-side methods");
    add_common(cmp_cmd, cmp_f, false);
    auto* mm_cmd = app.add_subcommand("multimode", "coupled-mode system from JSON");
    add_common(mm_cmd, mm_f, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) {
            const auto sc = load(run_f);
            const auto out = vacrad::run(sc);
            print_result(out.result);
            std::printf("wrote %s_summary.json\n", sc.output_prefix.c_str());
        } else if (*sweep_cmd) {
            const auto sc = load(sweep_f);
            const auto pts = vacrad::sweep_tf(sc, threads_or_default(sweep_f.threads));
            std::printf("%zu sweep points, wrote %s_sweep.csv\n", pts.size(), sc.output_prefix.c_str());
        } else if (*cmp_cmd) {
            const auto sc = load(cmp_f);
            for (const auto& r : vacrad::compare(sc, threads_or_default(cmp_f.threads))) print_result(r);
            std::printf("wrote %s_compare.csv\n", sc.output_prefix.c_str());
        } else if (*mm_cmd) {
            auto ms = vacrad::load_multimode(mm_f.config);
            if (!mm_f.out.empty()) ms.output_prefix = mm_f.out;
            const auto out = vacrad::run_multimode(ms, threads_or_default(mm_f.threads));
            std::printf("n=%zu unitarity defect %.3e, wrote %s_summary.json\n", ms.system.n(),
                        vacrad::unitarity_defect(out.jost), ms.output_prefix.c_str());
        }
    } catch (const vacrad::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const vacrad::PreconditionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const vacrad::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const vacrad::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
