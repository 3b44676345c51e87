#include "riswpt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace riswpt {

void ExperimentSpec::validate() const {
    if (seeds.empty()) throw SimError(Err::EmptyInput, "no seeds given");
    if (n_values.empty() || k_values.empty())
        throw SimError(Err::EmptyInput, "empty N or K sweep");
    for (std::size_t n : n_values)
        if (n == 0) throw SimError(Err::ShapeMismatch, "N must be positive");
    for (std::size_t k : k_values)
        if (k == 0) throw SimError(Err::ShapeMismatch, "K must be positive");
    if (episodes == 0 || steps == 0)
        throw SimError(Err::ShapeMismatch, "episodes and steps must be positive");
}

namespace {

double resolve_reward_scale(double configured, const NetworkConfig& env_cfg) {
    if (configured > 0.0) return configured;
    const double nominal = nominal_sum_rate(env_cfg);
    return nominal > 0.0 ? 1.0 / nominal : 1.0;
}

TrainingLog run_oracle_cell(WptEnv& env, const ExperimentProfile& profile,
                            std::size_t episodes) {
    TrainingLog log;
    log.reserve(episodes);
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        if (ep > 0) env.refreeze();
        const GridOracleResult r = grid_oracle(
            env.snapshot(), profile.oracle_tau_grid, profile.oracle_phase_grid);
        log.push_back({static_cast<int>(ep), r.best_reward, 0.0});
    }
    return log;
}

}  // namespace

TrainingLog run_cell(SchemeId scheme, const ExperimentProfile& profile,
                     std::size_t n_devices, std::size_t k_elements,
                     std::uint64_t seed, std::size_t episodes,
                     std::size_t steps) {
    const NetworkConfig base =
        profile.network_config(n_devices, k_elements, seed);
    SchemeSetup setup =
        make_scheme_setup(scheme, base, profile.rss_per_episode);
    WptEnv env(setup.env_config, derive_seed(seed, 1));
    Rng train_rng(derive_seed(seed, 3));
    switch (setup.algo) {
        case Algo::Oracle:
            return run_oracle_cell(env, profile, episodes);
        case Algo::Ddpg: {
            DdpgConfig cfg = profile.ddpg_config();
            cfg.reward_scale =
                resolve_reward_scale(cfg.reward_scale, setup.env_config);
            DdpgAgent agent(env.state_dim(), setup.spec, cfg,
                            derive_seed(seed, 2));
            return train(agent, env, episodes, steps, train_rng);
        }
        case Algo::Ppo: {
            PpoConfig cfg = profile.ppo_config();
            cfg.reward_scale =
                resolve_reward_scale(cfg.reward_scale, setup.env_config);
            PpoAgent agent(env.state_dim(), setup.spec, cfg,
                           derive_seed(seed, 2));
            return train(agent, env, episodes, steps, train_rng);
        }
    }
    throw SimError(Err::ShapeMismatch, "unknown algorithm");
}

void run_experiment(const ExperimentSpec& spec) {
    spec.validate();

    struct Cell {
        std::size_t n, k;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t n : spec.n_values)
        for (std::size_t k : spec.k_values)
            for (std::uint64_t s : spec.seeds) cells.push_back({n, k, s});

    std::vector<TrainingLog> logs(cells.size());
    std::vector<double> wall_ms(cells.size(), 0.0);

    auto work = [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        logs[i] = run_cell(spec.scheme, spec.profile, cells[i].n, cells[i].k,
                           cells[i].seed, spec.episodes, spec.steps);
        wall_ms[i] = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    };

    if (spec.jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t n_threads = std::min(spec.jobs, cells.size());
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size();
                     i = next.fetch_add(1))
                    work(i);
            });
        for (std::thread& t : pool) t.join();
    }

    std::ofstream out(spec.out_path);
    if (!out) throw SimError(Err::Io, "cannot open " + spec.out_path);
    out << "# riswpt-results v1\n";
    out << "# scheme=" << scheme_name(spec.scheme) << " episodes="
        << spec.episodes << " steps=" << spec.steps << "\n";
    for (const auto& [key, value] : spec.profile.describe())
        out << "# " << key << "=" << value << "\n";
    out << "scheme,n_devices,k_elements,seed,episode,mean_reward,wall_ms\n";
    char buf[64];
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double per_episode_ms =
            wall_ms[i] / static_cast<double>(logs[i].size());
        for (const EpisodeStats& e : logs[i]) {
            std::snprintf(buf, sizeof buf, "%.12e", e.mean_reward);
            out << scheme_name(spec.scheme) << ',' << cells[i].n << ','
                << cells[i].k << ',' << cells[i].seed << ',' << e.episode
                << ',' << buf << ',';
            std::snprintf(buf, sizeof buf, "%.3f", per_episode_ms);
            out << buf << "\n";
        }
    }
    if (!out) throw SimError(Err::Io, "write failed: " + spec.out_path);
}

std::vector<ResultRecord> read_result_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SimError(Err::Io, "cannot open " + path);
    std::vector<ResultRecord> records;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // column header
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        ResultRecord r;
        std::string field;
        std::getline(row, r.scheme, ',');
        std::getline(row, field, ',');
        r.n_devices = std::stoul(field);
        std::getline(row, field, ',');
        r.k_elements = std::stoul(field);
        std::getline(row, field, ',');
        r.seed = std::stoull(field);
        std::getline(row, field, ',');
        r.episode = std::stoi(field);
        std::getline(row, field, ',');
        r.mean_reward = std::stod(field);
        std::getline(row, field, ',');
        r.wall_ms = std::stod(field);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records,
                                  double tail_fraction) {
    if (records.empty()) throw SimError(Err::EmptyInput, "no records");
    using GroupKey = std::tuple<std::string, std::size_t, std::size_t>;
    using SeedKey = std::uint64_t;
    std::map<GroupKey, std::map<SeedKey, std::vector<std::pair<int, double>>>>
        grouped;
    for (const ResultRecord& r : records)
        grouped[{r.scheme, r.n_devices, r.k_elements}][r.seed].push_back(
            {r.episode, r.mean_reward});

    std::vector<SummaryRow> rows;
    for (auto& [key, by_seed] : grouped) {
        std::vector<double> converged;
        for (auto& [seed, series] : by_seed) {
            std::sort(series.begin(), series.end());
            const std::size_t tail = std::max<std::size_t>(
                1, static_cast<std::size_t>(
                       std::ceil(tail_fraction * series.size())));
            double sum = 0.0;
            for (std::size_t i = series.size() - tail; i < series.size(); ++i)
                sum += series[i].second;
            converged.push_back(sum / static_cast<double>(tail));
        }
        SummaryRow row;
        row.scheme = std::get<0>(key);
        row.n_devices = std::get<1>(key);
        row.k_elements = std::get<2>(key);
        row.num_seeds = converged.size();
        double mean = 0.0;
        for (double v : converged) mean += v;
        mean /= static_cast<double>(converged.size());
        double var = 0.0;
        for (double v : converged) var += (v - mean) * (v - mean);
        row.tail_mean = mean;
        row.tail_std = std::sqrt(var / static_cast<double>(converged.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError(Err::Io, "cannot open " + path);
    out << "scheme,n_devices,k_elements,num_seeds,tail_mean,tail_std\n";
    char buf[64];
    for (const SummaryRow& r : rows) {
        out << r.scheme << ',' << r.n_devices << ',' << r.k_elements << ','
            << r.num_seeds << ',';
        std::snprintf(buf, sizeof buf, "%.12e", r.tail_mean);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.12e", r.tail_std);
        out << buf << "\n";
    }
}

void write_summary_svg(const std::vector<SummaryRow>& rows,
                       const std::string& path) {
    if (rows.empty()) throw SimError(Err::EmptyInput, "nothing to plot");
    std::set<std::size_t> k_set;
    for (const SummaryRow& r : rows) k_set.insert(r.k_elements);
    const bool over_k = k_set.size() > 1;

    struct Series {
        std::vector<std::pair<double, double>> points;
    };
    std::map<std::string, Series> series;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const SummaryRow& r : rows) {
        const double x = static_cast<double>(over_k ? r.k_elements : r.n_devices);
        std::ostringstream label;
        label << r.scheme;
        if (over_k)
            label << " N=" << r.n_devices;
        else
            label << " K=" << r.k_elements;
        series[label.str()].points.push_back({x, r.tail_mean});
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, r.tail_mean);
        y_max = std::max(y_max, r.tail_mean);
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + (y_min == 0.0 ? 1.0 : std::abs(y_min));

    const double w = 640, h = 420, ml = 70, mr = 160, mt = 20, mb = 45;
    auto sx = [&](double x) {
        return ml + (x - x_min) / (x_max - x_min) * (w - ml - mr);
    };
    auto sy = [&](double y) {
        return h - mb - (y - y_min) / (y_max - y_min) * (h - mt - mb);
    };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

    std::ofstream out(path);
    if (!out) throw SimError(Err::Io, "cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w
        << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr
        << "' y2='" << h - mb << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
        << h - mb << "' stroke='black'/>\n";
    out << "<text x='" << (ml + (w - ml - mr) / 2) << "' y='" << h - 8
        << "' font-size='13' text-anchor='middle'>"
        << (over_k ? "RIS elements K" : "IoT devices N") << "</text>\n";
    out << "<text x='14' y='" << (mt + (h - mt - mb) / 2)
        << "' font-size='13' transform='rotate(-90 14 "
        << (mt + (h - mt - mb) / 2)
        << ")' text-anchor='middle'>sum-rate</text>\n";
    int idx = 0;
    for (auto& [label, s] : series) {
        std::sort(s.points.begin(), s.points.end());
        const char* color = colors[idx % 8];
        out << "<polyline fill='none' stroke='" << color
            << "' stroke-width='1.5' points='";
        for (const auto& [x, y] : s.points) out << sx(x) << ',' << sy(y) << ' ';
        out << "'/>\n";
        for (const auto& [x, y] : s.points)
            out << "<circle cx='" << sx(x) << "' cy='" << sy(y)
                << "' r='2.5' fill='" << color << "'/>\n";
        out << "<text x='" << w - mr + 8 << "' y='" << mt + 14 + 16 * idx
            << "' font-size='11' fill='" << color << "'>" << label
            << "</text>\n";
        ++idx;
    }
    // axis extremes
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", y_min);
    out << "<text x='" << ml - 6 << "' y='" << h - mb
        << "' font-size='10' text-anchor='end'>" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.3g", y_max);
    out << "<text x='" << ml - 6 << "' y='" << mt + 4
        << "' font-size='10' text-anchor='end'>" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%g", x_min);
    out << "<text x='" << ml << "' y='" << h - mb + 14
        << "' font-size='10' text-anchor='middle'>" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%g", x_max);
    out << "<text x='" << w - mr << "' y='" << h - mb + 14
        << "' font-size='10' text-anchor='middle'>" << buf << "</text>\n";
    out << "</svg>\n";
}

}  // namespace riswpt
