#include "drivecause/reward.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <iostream>

#include "drivecause/errors.hpp"

namespace drivecause {

namespace {

std::atomic<long> g_degenerate_speed{0};
std::atomic<long> g_degenerate_speed_pair{0};

void log_once(std::atomic<long>& counter, const char* message) {
    if (counter.fetch_add(1) == 0) {
        std::cerr << "[drivecause] " << message << " (further occurrences counted silently)\n";
    }
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

DegeneracyCounters degeneracy_counters() {
    return {g_degenerate_speed.load(), g_degenerate_speed_pair.load()};
}

void reset_degeneracy_counters() {
    g_degenerate_speed = 0;
    g_degenerate_speed_pair = 0;
}

FeatureVector reward_features(const Outcome& o, const RewardConfig& cfg) {
    FeatureVector r{};
    r[0] = logistic(-static_cast<double>(o.lane_transitions));

    if (!o.has_leader()) {
        r[1] = 1.0;
    } else if (o.final_speed <= 0.0) {
        // Headway is trivially satisfied at standstill.
        log_once(g_degenerate_speed, "degenerate speed: fs = 0 with a finite headway");
        r[1] = 1.0;
    } else {
        r[1] = std::min(o.distance_headway / (cfg.beta_dh * o.final_speed), 1.0);
    }

    r[2] = std::exp(0.05 * (o.final_speed - cfg.beta_fs));
    r[3] = std::exp(-0.05 * o.final_speed);
    r[4] = o.max_env_force <= cfg.beta_ef ? 1.0 : 0.0;
    r[5] = 1.0;
    return r;
}

double reward(const Outcome& o, const RewardProfile& p, const RewardConfig& cfg) {
    const FeatureVector r = reward_features(o, cfg);
    double sum = 0.0;
    for (int i = 0; i < 6; ++i) sum += r[i] * p.gamma[i];
    return sum;
}

namespace {

/// Time headway dh/fs used inside the outcome distance. A leaderless outcome
/// counts as beta_dh (fully satisfied); so does a standstill with a leader.
double distance_time_headway(const Outcome& o, const RewardConfig& cfg) {
    if (!o.has_leader()) return cfg.beta_dh;
    if (o.final_speed <= 0.0) {
        log_once(g_degenerate_speed, "degenerate speed: fs = 0 with a finite headway");
        return cfg.beta_dh;
    }
    return o.distance_headway / o.final_speed;
}

}  // namespace

double outcome_distance(const Outcome& o, const Outcome& other,
                        const OutcomeDistanceConfig& cfg, const RewardConfig& reward_cfg) {
    const double d_lt = static_cast<double>(o.lane_transitions - other.lane_transitions);

    double fs_term = 0.0;
    const double fs_sum = o.final_speed + other.final_speed;
    if (fs_sum <= 0.0) {
        log_once(g_degenerate_speed_pair, "degenerate speed pair: fs + fs' = 0");
    } else {
        fs_term = 2.0 * (o.final_speed - other.final_speed) / fs_sum;
    }

    double dh_term = 0.0;
    if (o.has_leader() || other.has_leader()) {
        dh_term = distance_time_headway(o, reward_cfg) - distance_time_headway(other, reward_cfg);
    }

    const double ef_term = o.max_env_force - other.max_env_force;
    const double ad_term = (o.accomplished ? 1.0 : 0.0) - (other.accomplished ? 1.0 : 0.0);

    return cfg.alpha_o * std::sqrt(cfg.alpha_lt * d_lt * d_lt + cfg.alpha_fs * fs_term * fs_term +
                                   cfg.alpha_dh * dh_term * dh_term +
                                   cfg.alpha_ef * ef_term * ef_term +
                                   cfg.alpha_ad * ad_term * ad_term);
}

LearnResult learn_profile(const Outcome& observed, const std::vector<Outcome>& hypothetical,
                          const RewardConfig& cfg_r, const OutcomeDistanceConfig& cfg_d) {
    if (hypothetical.empty()) {
        throw EmptyHypotheticalSetError("learn_profile needs at least one hypothetical outcome");
    }

    const int n = static_cast<int>(hypothetical.size());
    Eigen::MatrixXd a(n, 6);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const FeatureVector r = reward_features(hypothetical[static_cast<std::size_t>(i)], cfg_r);
        for (int j = 0; j < 6; ++j) a(i, j) = r[static_cast<std::size_t>(j)];
        b(i) = std::exp(-outcome_distance(observed, hypothetical[static_cast<std::size_t>(i)],
                                          cfg_d, cfg_r));
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::VectorXd p = qr.solve(b);

    LearnResult result;
    result.rank = static_cast<int>(qr.rank());
    result.rank_deficient = result.rank < 6;
    for (int j = 0; j < 6; ++j) result.profile.gamma[static_cast<std::size_t>(j)] = p(j);
    result.residual = (a * p - b).norm();
    return result;
}

}  // namespace drivecause
