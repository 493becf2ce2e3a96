#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "rlsc/channels.hpp"
#include "rlsc/debt.hpp"
#include "rlsc/sim.hpp"

namespace rlsc {

// Emission of one hidden state: kind "binomial" (success), "packet"
// (delivery, or loss = 1 - delivery) or "table" (pmf over 0..N).
struct StateConfig {
    std::string kind;
    double value = 0.0;
    std::vector<double> pmf;
};

struct ChannelConfig {
    int N = 0;
    bool packet = false;
    std::optional<double> p;  // Pr(good -> bad)
    std::optional<double> r;  // Pr(bad -> good)
    std::optional<Eigen::MatrixXd> transition;
    std::vector<StateConfig> states;

    ChannelSpec build() const;
};

struct SweepConfig {
    std::string axis;  // loss_G, delta, p or r
    std::vector<double> values;
};

struct SrlscJob {
    std::vector<double> p;
    std::vector<int> delta;
    int l_max = 0;
};

struct OracleJob {
    std::vector<int> delta;
    int k_max = 0;
};

struct ExperimentConfig {
    std::optional<ChannelConfig> channel;
    std::optional<CodeParams> code;
    std::vector<Engine> engines;
    SimOptions sim;
    std::vector<std::int64_t> T_values;
    std::optional<SweepConfig> sweep;
    std::optional<SrlscJob> srlsc;
    std::optional<OracleJob> oracle;
    std::string output;

    // Channel and code with the sweep axis set to value.
    Scenario scenario(const std::string& axis, double value) const;
    Scenario base() const;
};

// Both encodings share one schema; see README for the field list.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json toml_to_json(const std::string& text, const std::string& source = "config");
// Chooses the encoding by extension: .json is JSON, anything else TOML.
ExperimentConfig load_config(const std::string& path);

} // namespace rlsc
