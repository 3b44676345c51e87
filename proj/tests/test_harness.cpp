#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "riswpt/experiment.hpp"

using namespace riswpt;

namespace {

// Result lines with the nondeterministic wall-time column removed.
std::string strip_wall_column(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        const auto last_comma = line.rfind(',');
        if (!line.empty() && line[0] != '#' && last_comma != std::string::npos)
            out << line.substr(0, last_comma) << "\n";
        else
            out << line << "\n";
    }
    return out.str();
}

ExperimentSpec tiny_spec(SchemeId scheme, const std::string& out) {
    ExperimentSpec spec;
    spec.scheme = scheme;
    spec.n_values = {1};
    spec.k_values = {1, 2};
    spec.seeds = {1, 2};
    spec.episodes = 3;
    spec.steps = 5;
    spec.out_path = out;
    spec.profile.hidden1 = 8;
    spec.profile.hidden2 = 8;
    return spec;
}

}  // namespace

TEST_CASE("key-value config parsing") {
    const auto cfg = KeyValueConfig::parse_string(
        "# comment line\n"
        "discount = 0.8   # trailing comment\n"
        "batch_size = 16\n"
        "normalize_advantages = false\n");
    CHECK(cfg.get_double("discount", 0.9) == doctest::Approx(0.8));
    CHECK(cfg.get_size("batch_size", 32) == 16);
    CHECK(cfg.get_bool("normalize_advantages", true) == false);
    CHECK(cfg.get_double("soft_rate", 0.01) == doctest::Approx(0.01));

    CHECK_THROWS_AS(KeyValueConfig::parse_string("not_a_known_key = 1\n"),
                    SimError);
    CHECK_THROWS_AS(KeyValueConfig::parse_string("discount 0.8\n"), SimError);
    const auto bad_num = KeyValueConfig::parse_string("discount = abc\n");
    CHECK_THROWS_AS(bad_num.get_double("discount", 0.9), SimError);
    const auto bad_int = KeyValueConfig::parse_string("batch_size = 1.5\n");
    CHECK_THROWS_AS(bad_int.get_size("batch_size", 32), SimError);
}

TEST_CASE("profile defaults and unit conversions") {
    const ExperimentProfile p;
    const NetworkConfig c = p.network_config(4, 8, 1);
    CHECK(c.device_count == 4);
    CHECK(c.ris.element_count == 8);
    CHECK(c.pathloss.beta0 == doctest::Approx(1e-3));            // -30 dB
    CHECK(c.pathloss.noise_power ==
          doctest::Approx(std::pow(10.0, -16.4)));               // -134 dBm
    CHECK(c.tx_power == 5.0);
    CHECK(c.v_max == 20.0);
    for (const Vec3& d : c.device_positions) {
        CHECK(d.z == 0.0);
        CHECK(std::hypot(d.x, d.y) <= p.device_disc_radius + 1e-9);
    }

    // placement is a function of the experiment seed
    const NetworkConfig c1 = p.network_config(4, 8, 1);
    const NetworkConfig c2 = p.network_config(4, 8, 2);
    CHECK(c1.device_positions[0].x == c.device_positions[0].x);
    CHECK(c1.device_positions[0].x != c2.device_positions[0].x);

    const auto overrides = KeyValueConfig::parse_string(
        "uav_altitude = 120\nhidden1 = 32\nclip_epsilon = 0.1\n");
    const ExperimentProfile q = ExperimentProfile::from_config(overrides);
    CHECK(q.network_config(1, 1, 1).uav_altitude == 120.0);
    CHECK(q.ppo_config().clip_epsilon == doctest::Approx(0.1));
    CHECK(q.ddpg_config().hidden[0] == 32);
}

TEST_CASE("derived seed streams") {
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("run writes the full matrix and reruns are byte-identical") {
    const std::string out_a = "/tmp/riswpt_results_a.csv";
    const std::string out_b = "/tmp/riswpt_results_b.csv";
    run_experiment(tiny_spec(SchemeId::HDdpg, out_a));
    run_experiment(tiny_spec(SchemeId::HDdpg, out_b));

    const auto records = read_result_file(out_a);
    CHECK(records.size() == 2 * 2 * 3);  // seeds x K x episodes
    for (const ResultRecord& r : records) {
        CHECK(r.scheme == "H-DDPG");
        CHECK(r.mean_reward >= 0.0);
    }
    CHECK(strip_wall_column(out_a) == strip_wall_column(out_b));

    // self-describing: header lines carry every profile value used
    {
        std::ifstream in(out_a);
        std::stringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str().find("# beta0_db=-30") != std::string::npos);
        CHECK(buf.str().find("# hidden1=8") != std::string::npos);
        CHECK(buf.str().find("# scheme=H-DDPG") != std::string::npos);
    }

    // concurrent cells produce the same records in the same order
    ExperimentSpec jobs2 = tiny_spec(SchemeId::HDdpg, "/tmp/riswpt_results_c.csv");
    jobs2.jobs = 2;
    run_experiment(jobs2);
    CHECK(strip_wall_column("/tmp/riswpt_results_c.csv") ==
          strip_wall_column(out_a));
}

TEST_CASE("oracle scheme records per-episode oracle rewards") {
    ExperimentSpec spec = tiny_spec(SchemeId::OracleGrid,
                                    "/tmp/riswpt_results_oracle.csv");
    spec.k_values = {2};
    spec.seeds = {5};
    spec.episodes = 3;
    spec.profile.oracle_phase_grid = 16;
    spec.profile.oracle_tau_grid = 50;
    run_experiment(spec);
    const auto records = read_result_file(spec.out_path);
    REQUIRE(records.size() == 3);
    for (const auto& r : records) CHECK(r.mean_reward > 0.0);
    // refreeze draws a new realization per episode
    CHECK(records[0].mean_reward != records[1].mean_reward);
}

TEST_CASE("summaries aggregate tail means over seeds") {
    SUBCASE("single record is its own summary") {
        std::vector<ResultRecord> rs{{"H-PPO", 2, 4, 1, 0, 3.5, 1.0}};
        const auto rows = summarize(rs);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].tail_mean == doctest::Approx(3.5));
        CHECK(rows[0].tail_std == doctest::Approx(0.0));
        CHECK(rows[0].num_seeds == 1);
    }
    SUBCASE("two symmetric seeds average to the midpoint") {
        std::vector<ResultRecord> rs{{"H-PPO", 2, 4, 1, 0, 2.0, 1.0},
                                     {"H-PPO", 2, 4, 2, 0, 4.0, 1.0}};
        const auto rows = summarize(rs);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].tail_mean == doctest::Approx(3.0));
        CHECK(rows[0].tail_std == doctest::Approx(1.0));
    }
    SUBCASE("tail window takes the final 20% of episodes") {
        std::vector<ResultRecord> rs;
        for (int e = 0; e < 10; ++e)
            rs.push_back({"F-DDPG", 1, 1, 7, e, static_cast<double>(e), 0.0});
        const auto rows = summarize(rs, 0.2);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].tail_mean == doctest::Approx((8.0 + 9.0) / 2.0));
    }
    SUBCASE("synthetic series against hand-computed statistics") {
        // two seeds; tail of 1 episode each: 5.0 and 9.0
        std::vector<ResultRecord> rs;
        rs.push_back({"H-DDPG", 1, 2, 1, 0, 100.0, 0.0});
        rs.push_back({"H-DDPG", 1, 2, 1, 1, 5.0, 0.0});
        rs.push_back({"H-DDPG", 1, 2, 2, 0, -100.0, 0.0});
        rs.push_back({"H-DDPG", 1, 2, 2, 1, 9.0, 0.0});
        const auto rows = summarize(rs, 0.5);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].tail_mean == doctest::Approx(7.0));
        CHECK(rows[0].tail_std == doctest::Approx(2.0));
    }
    SUBCASE("empty input throws") {
        CHECK_THROWS_AS(summarize({}), SimError);
    }
}

TEST_CASE("summary csv and svg emission") {
    std::vector<SummaryRow> rows{{"H-PPO", 10, 10, 3, 1.5, 0.1},
                                 {"H-PPO", 10, 20, 3, 2.5, 0.1},
                                 {"WithoutRIS-HPPO", 10, 10, 3, 1.0, 0.1},
                                 {"WithoutRIS-HPPO", 10, 20, 3, 1.0, 0.1}};
    write_summary_csv(rows, "/tmp/riswpt_summary.csv");
    std::ifstream csv("/tmp/riswpt_summary.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header ==
          "scheme,n_devices,k_elements,num_seeds,tail_mean,tail_std");

    write_summary_svg(rows, "/tmp/riswpt_summary.svg");
    std::ifstream svg("/tmp/riswpt_summary.svg");
    std::stringstream buf;
    buf << svg.rdbuf();
    CHECK(buf.str().find("<svg") != std::string::npos);
    CHECK(buf.str().find("polyline") != std::string::npos);
}

TEST_CASE("experiment spec validation") {
    ExperimentSpec spec = tiny_spec(SchemeId::HPpo, "/tmp/x.csv");
    spec.seeds.clear();
    CHECK_THROWS_AS(spec.validate(), SimError);
    spec = tiny_spec(SchemeId::HPpo, "/tmp/x.csv");
    spec.k_values = {0};
    CHECK_THROWS_AS(spec.validate(), SimError);
}
