// riswpt command line: run experiment cells, summarize result files, and two
// self-check verbs (grid-oracle vs analytic alignment, backprop vs finite
// differences).

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "riswpt/experiment.hpp"
#include "riswpt/kernels.hpp"
#include "riswpt/net.hpp"

namespace {

using namespace riswpt;

int cmd_run(const std::string& scheme_tag,
            const std::vector<std::size_t>& n_values,
            const std::vector<std::size_t>& k_values,
            const std::vector<std::uint64_t>& seeds, std::size_t episodes,
            std::size_t steps, const std::string& config_path,
            const std::string& out_path, std::size_t jobs) {
    const auto scheme = parse_scheme(scheme_tag);
    if (!scheme) {
        std::cerr << "unknown scheme '" << scheme_tag << "'; choices:";
        for (SchemeId id : all_schemes()) std::cerr << ' ' << scheme_name(id);
        std::cerr << "\n";
        return 2;
    }
    ExperimentSpec spec;
    spec.scheme = *scheme;
    spec.n_values = n_values;
    spec.k_values = k_values;
    spec.seeds = seeds;
    spec.episodes = episodes;
    spec.steps = steps;
    spec.out_path = out_path;
    spec.jobs = jobs;
    if (!config_path.empty())
        spec.profile =
            ExperimentProfile::from_config(KeyValueConfig::parse_file(config_path));
    run_experiment(spec);
    std::cout << "wrote " << out_path << " ["
              << kernels::backend_name(kernels::active_backend())
              << " kernels]\n";
    return 0;
}

int cmd_summarize(const std::vector<std::string>& inputs,
                  const std::string& out_path, const std::string& svg_path,
                  double tail_fraction) {
    std::vector<ResultRecord> records;
    for (const std::string& path : inputs) {
        auto part = read_result_file(path);
        records.insert(records.end(), part.begin(), part.end());
    }
    const auto rows = summarize(records, tail_fraction);
    write_summary_csv(rows, out_path);
    std::cout << "wrote " << out_path << " (" << rows.size() << " rows)\n";
    if (!svg_path.empty()) {
        write_summary_svg(rows, svg_path);
        std::cout << "wrote " << svg_path << "\n";
    }
    return 0;
}

// Frozen single-device instances: the oracle's argmax phases must land within
// one grid cell of theta_k = arg(h) - arg(H_k g_k), and its tau within one
// cell of a fine 1-D scan.
int cmd_oracle_check(std::size_t instances, const std::vector<std::size_t>& ks,
                     std::uint64_t seed) {
    int failures = 0;
    for (std::size_t k : ks) {
        std::size_t phase_grid = kOraclePhaseGrid;
        while (std::pow(static_cast<double>(phase_grid),
                        static_cast<double>(k)) *
                   static_cast<double>(kOracleTauGrid) >
               1e7)
            phase_grid /= 2;
        NetworkConfig cfg;
        cfg.device_count = 1;
        cfg.ris.element_count = k;
        Rng rng(derive_seed(seed, k));
        std::size_t ok = 0;
        for (std::size_t i = 0; i < instances; ++i) {
            cfg.device_positions = place_devices_disc(rng, 1, {0, 0, 0}, 50.0);
            WptEnv env(cfg, rng());
            EnvSnapshot snap = env.snapshot();
            const GridOracleResult res =
                grid_oracle(snap, kOracleTauGrid, phase_grid);
            const double cell = 2.0 * M_PI / static_cast<double>(phase_grid);
            const double arg_h = std::arg(snap.channels.direct[0]);
            bool good = true;
            for (std::size_t e = 0; e < k; ++e) {
                const double aligned = wrap_angle(
                    arg_h - std::arg(snap.channels.uav_ris[e] *
                                     snap.channels.ris_iot[0][e]));
                double diff = std::abs(res.best_action.phases.theta[e] - aligned);
                diff = std::min(diff, 2.0 * M_PI - diff);
                if (diff > cell) good = false;
            }
            if (good) ++ok;
        }
        std::printf("K=%zu: %zu/%zu instances aligned within one cell\n", k,
                    ok, instances);
        if (ok < instances) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

int cmd_grad_check(std::size_t seeds) {
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= seeds; ++s) {
        Rng rng(s);
        DenseNet net({5, 8, 7, 3}, Activation::Tanh, Activation::Identity,
                     rng);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> x(5), upstream(3);
        for (double& v : x) v = u(rng);
        for (double& v : upstream) v = u(rng);

        DenseNet::Cache cache;
        DenseNet::Gradients grads = net.make_gradients();
        net.forward(x, cache);
        net.backward(cache, upstream, grads);

        auto loss = [&](const DenseNet& n) {
            const auto y = n.forward(x);
            double l = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) l += upstream[i] * y[i];
            return l;
        };
        const double step = 1e-5;
        for (std::size_t l = 0; l < net.layers().size(); ++l) {
            for (std::size_t i = 0; i < net.layers()[l].w.size(); i += 7) {
                DenseNet plus = net, minus = net;
                plus.mutable_layers()[l].w[i] += step;
                minus.mutable_layers()[l].w[i] -= step;
                const double fd = (loss(plus) - loss(minus)) / (2.0 * step);
                const double an = grads.gw[l][i];
                worst = std::max(worst, std::abs(an - fd) /
                                            (std::abs(an) + 1e-8));
            }
        }
    }
    std::printf("max relative gradient error over %zu seeds: %.3e\n", seeds,
                worst);
    return worst < 1e-4 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted UAV WPT/WIT simulator and policy optimizer"};
    app.require_subcommand(1);

    // run
    std::string scheme = "H-PPO", config_path, out_path = "results.csv";
    std::vector<std::size_t> n_values{10}, k_values{20};
    std::vector<std::uint64_t> seeds{1};
    std::size_t episodes = 1000, steps = 100, jobs = 1;
    auto* run = app.add_subcommand("run", "train a scheme over an (N,K,seed) matrix");
    run->add_option("--scheme", scheme, "scheme tag, e.g. H-PPO or F-DDPG");
    run->add_option("--n-devices", n_values, "IoT device counts to sweep")
        ->delimiter(',');
    run->add_option("--k-elements", k_values, "RIS element counts to sweep")
        ->delimiter(',');
    run->add_option("--seeds", seeds, "experiment seeds")->delimiter(',');
    run->add_option("--episodes", episodes, "episodes per cell");
    run->add_option("--steps", steps, "steps per episode");
    run->add_option("--config", config_path, "key=value profile file");
    run->add_option("--out", out_path, "result CSV path");
    run->add_option("--jobs", jobs, "concurrent cells");

    // summarize
    std::vector<std::string> inputs;
    std::string summary_out = "summary.csv", svg_path;
    double tail = 0.2;
    auto* sum = app.add_subcommand("summarize", "aggregate result CSVs");
    sum->add_option("inputs", inputs, "result CSV files")->required();
    sum->add_option("--out", summary_out, "summary CSV path");
    sum->add_option("--svg", svg_path, "optional SVG chart path");
    sum->add_option("--tail", tail, "converged tail fraction");

    // oracle-check
    std::size_t instances = 50;
    std::vector<std::size_t> oracle_ks{1, 2, 3};
    std::uint64_t oracle_seed = 7;
    auto* oc = app.add_subcommand("oracle-check",
                                  "grid oracle vs analytic phase alignment");
    oc->add_option("--instances", instances, "instances per K");
    oc->add_option("--k-elements", oracle_ks, "K values to test")
        ->delimiter(',');
    oc->add_option("--seed", oracle_seed, "base seed");

    // grad-check
    std::size_t grad_seeds = 20;
    auto* gc = app.add_subcommand("grad-check",
                                  "backprop vs central finite differences");
    gc->add_option("--seeds", grad_seeds, "number of random nets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(scheme, n_values, k_values, seeds, episodes, steps,
                           config_path, out_path, jobs);
        if (sum->parsed())
            return cmd_summarize(inputs, summary_out, svg_path, tail);
        if (oc->parsed())
            return cmd_oracle_check(instances, oracle_ks, oracle_seed);
        if (gc->parsed()) return cmd_grad_check(grad_seeds);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
