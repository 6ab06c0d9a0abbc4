#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "drivecause/types.hpp"

namespace drivecause {

/// Simulated (or observed) result of executing one action over a horizon.
struct Outcome {
    int lane_transitions = 0;       // lt, signed net lane displacement
    double final_speed = 0.0;       // fs, m/s
    double distance_headway = 0.0;  // dh, m; +infinity when no leader
    double max_env_force = 0.0;     // ef, N, peak environment-force magnitude
    bool accomplished = false;      // ad, goals met by their target times

    bool has_leader() const { return std::isfinite(distance_headway); }

    constexpr bool operator==(const Outcome&) const = default;
};

constexpr double kNoLeaderHeadway = std::numeric_limits<double>::infinity();

/// Six-weight reward profile; gamma[5] weights the constant bias feature.
struct RewardProfile {
    std::array<double, 6> gamma{};

    constexpr bool operator==(const RewardProfile&) const = default;
};

struct RewardConfig {
    double beta_dh = 2.0;     // s, two-second-rule horizon
    double beta_fs = 31.3;    // m/s, speed-limit pivot
    double beta_ef = 1000.0;  // N, tolerable environment force
};

struct OutcomeDistanceConfig {
    double alpha_o = 0.1;
    double alpha_lt = 100.0;
    double alpha_fs = 1.0;
    double alpha_dh = 0.1;
    double alpha_ef = 0.01;
    double alpha_ad = 100.0;
};

using FeatureVector = std::array<double, 6>;

/// Reward metric vector [r0..r4, 1]:
///   r0 = sigmoid(-lt)
///   r1 = min(dh / (beta_dh * fs), 1), 1 when no leader or at standstill
///   r2 = exp(0.05 (fs - beta_fs))
///   r3 = exp(-0.05 fs)
///   r4 = 1 if ef <= beta_ef else 0
FeatureVector reward_features(const Outcome& o, const RewardConfig& cfg);

/// r*(o) = reward_features(o) . p
double reward(const Outcome& o, const RewardProfile& p, const RewardConfig& cfg);

/// Scaled Euclidean distance between outcomes. Headway enters as time
/// headway dh/fs; when an outcome has no leader (or is at standstill) its
/// time headway is taken as beta_dh, and a leaderless pair contributes zero.
double outcome_distance(const Outcome& o, const Outcome& other,
                        const OutcomeDistanceConfig& cfg,
                        const RewardConfig& reward_cfg = {});

struct LearnResult {
    RewardProfile profile;
    bool rank_deficient = false;
    int rank = 0;
    double residual = 0.0;  // ||A p - b||_2
};

/// One-shot inverse reward regression: row i of A is the feature vector of
/// hypothetical outcome i and b_i = exp(-d(observed, hypothetical_i)); the
/// least-squares profile comes from a column-pivoted Householder QR
/// factorisation, flagging rank deficiency instead of failing.
LearnResult learn_profile(const Outcome& observed, const std::vector<Outcome>& hypothetical,
                          const RewardConfig& cfg_r, const OutcomeDistanceConfig& cfg_d);

/// Counters for the degenerate-speed paths (fs = 0 with a finite headway and
/// fs + fs' = 0 in the distance); logged rather than fatal.
struct DegeneracyCounters {
    long degenerate_speed = 0;
    long degenerate_speed_pair = 0;
};
DegeneracyCounters degeneracy_counters();
void reset_degeneracy_counters();

}  // namespace drivecause
