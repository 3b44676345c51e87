#pragma once

#include "riswpt/baselines.hpp"
#include "riswpt/config.hpp"

namespace riswpt {

struct ExperimentSpec {
    SchemeId scheme = SchemeId::HPpo;
    std::vector<std::size_t> n_values{10};
    std::vector<std::size_t> k_values{20};
    std::vector<std::uint64_t> seeds{1};
    std::size_t episodes = 1000;
    std::size_t steps = 100;
    std::string out_path = "results.csv";
    ExperimentProfile profile{};
    std::size_t jobs = 1;

    void validate() const;
};

struct ResultRecord {
    std::string scheme;
    std::size_t n_devices = 0;
    std::size_t k_elements = 0;
    std::uint64_t seed = 0;
    int episode = 0;
    double mean_reward = 0.0;  // true env units (bits/s/Hz when B = 1)
    double wall_ms = 0.0;      // excluded from the determinism contract
};

// Train one (scheme, N, K, seed) cell and return its per-episode log.
TrainingLog run_cell(SchemeId scheme, const ExperimentProfile& profile,
                     std::size_t n_devices, std::size_t k_elements,
                     std::uint64_t seed, std::size_t episodes,
                     std::size_t steps);

// Execute the full (N, K, seed) matrix; records are written in spec order
// regardless of --jobs, so reruns are byte-identical up to the wall_ms column.
void run_experiment(const ExperimentSpec& spec);

std::vector<ResultRecord> read_result_file(const std::string& path);

struct SummaryRow {
    std::string scheme;
    std::size_t n_devices = 0;
    std::size_t k_elements = 0;
    std::size_t num_seeds = 0;
    double tail_mean = 0.0;  // converged reward: mean over the final 20%
    double tail_std = 0.0;   // across seeds
};

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records,
                                  double tail_fraction = 0.2);

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path);

// Minimal line chart: one polyline per (scheme, N) over K (or over N when a
// single K is present).
void write_summary_svg(const std::vector<SummaryRow>& rows,
                       const std::string& path);

}  // namespace riswpt
