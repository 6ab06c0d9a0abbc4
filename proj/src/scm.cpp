#include "drivecause/scm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <tuple>
#include <utility>

namespace drivecause::scm {

namespace {

std::string qualified(const std::string& module_name, const std::string& variable_name) {
    return module_name + "." + variable_name;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream per (seed, variable, slice): draws do not depend on
/// evaluation order, so interventions elsewhere never shift them.
std::uint64_t draw_seed(std::uint64_t seed, std::size_t var_index, int slice) {
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
    h = splitmix64(h ^ static_cast<std::uint64_t>(var_index));
    h = splitmix64(h ^ static_cast<std::uint64_t>(slice));
    return h;
}

}  // namespace

bool value_is_finite(const Value& v) {
    return std::visit(
        [](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool> || std::is_same_v<T, std::int64_t>) {
                return true;
            } else if constexpr (std::is_same_v<T, double>) {
                return std::isfinite(x);
            } else if constexpr (std::is_same_v<T, Vec2>) {
                return std::isfinite(x.x) && std::isfinite(x.y);
            } else if constexpr (std::is_same_v<T, Wrench>) {
                return std::isfinite(x.force.x) && std::isfinite(x.force.y) &&
                       std::isfinite(x.torque);
            } else if constexpr (std::is_same_v<T, Action>) {
                return std::isfinite(x.speed_goal.target_value) &&
                       std::isfinite(x.speed_goal.target_time) &&
                       std::isfinite(x.lane_goal.target_value) &&
                       std::isfinite(x.lane_goal.target_time);
            } else {
                static_assert(std::is_same_v<T, RigidBodyState>);
                return std::isfinite(x.position.x) && std::isfinite(x.position.y) &&
                       std::isfinite(x.velocity.x) && std::isfinite(x.velocity.y) &&
                       std::isfinite(x.acceleration.x) && std::isfinite(x.acceleration.y) &&
                       std::isfinite(x.rotation) && std::isfinite(x.angular_velocity) &&
                       std::isfinite(x.angular_acceleration) && std::isfinite(x.mass) &&
                       std::isfinite(x.moment_of_inertia);
            }
        },
        v);
}

// ---------------------------------------------------------------------------
// Model data
// ---------------------------------------------------------------------------

namespace {

struct ResolvedParent {
    std::size_t index = 0;
    Lag lag = Lag::same;
};

struct VariableNode {
    std::string module_name;
    std::string variable_name;
    bool exogenous = false;
    // endogenous:
    std::vector<ResolvedParent> parents;
    EquationFn map;
    std::optional<Value> initial;
    bool has_lagged_parent = false;
    // exogenous:
    std::variant<PointDistribution, GaussianDistribution> distribution{PointDistribution{0.0}};
};

struct VariableTable {
    std::map<std::string, std::size_t> index;  // qualified name -> node index
    std::vector<std::size_t> order;            // evaluation order over nodes
};

}  // namespace

struct CausalModel::Data {
    std::vector<VariableNode> nodes;
    std::shared_ptr<VariableTable> table = std::make_shared<VariableTable>();
};

CausalModel CausalModel::build(std::vector<StructuralEquation> equations,
                               std::vector<ExogenousSpec> exogenous) {
    auto data = std::make_shared<Data>();
    auto& nodes = data->nodes;
    auto& table = *data->table;

    auto add_node = [&](VariableNode node) {
        const std::string key = qualified(node.module_name, node.variable_name);
        if (table.index.count(key) != 0) {
            throw DuplicateVariableError("variable defined twice: " + key);
        }
        table.index.emplace(key, nodes.size());
        nodes.push_back(std::move(node));
    };

    for (auto& spec : exogenous) {
        VariableNode node;
        node.module_name = spec.module_name;
        node.variable_name = spec.variable_name;
        node.exogenous = true;
        node.distribution = spec.distribution;
        add_node(std::move(node));
    }
    for (auto& eq : equations) {
        VariableNode node;
        node.module_name = eq.module_name;
        node.variable_name = eq.variable_name;
        node.map = std::move(eq.map);
        node.initial = std::move(eq.initial);
        add_node(std::move(node));
    }

    // Resolve parents now that every variable has a home.
    std::size_t eq_base = exogenous.size();
    for (std::size_t i = 0; i < equations.size(); ++i) {
        VariableNode& node = nodes[eq_base + i];
        for (const ParentRef& ref : equations[i].parents) {
            const std::string key = qualified(ref.module_name, ref.variable_name);
            auto it = table.index.find(key);
            if (it == table.index.end()) {
                throw UnboundVariableError("parent has no equation or exogenous spec: " + key);
            }
            node.parents.push_back({it->second, ref.lag});
            if (ref.lag == Lag::previous) node.has_lagged_parent = true;
        }
        if (node.has_lagged_parent && !node.initial.has_value()) {
            throw MissingInitialValueError(
                "equation with a lagged parent needs an initial value: " +
                qualified(node.module_name, node.variable_name));
        }
    }

    // Kahn topological sort over the within-slice (same-lag) dependency graph,
    // deterministic via (module_name, variable_name) lexical tie-breaking.
    const std::size_t n = nodes.size();
    std::vector<int> in_degree(n, 0);
    std::vector<std::vector<std::size_t>> dependents(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const ResolvedParent& p : nodes[i].parents) {
            if (p.lag == Lag::same) {
                ++in_degree[i];
                dependents[p.index].push_back(i);
            }
        }
    }
    auto lexical_less = [&](std::size_t a, std::size_t b) {
        return std::tie(nodes[a].module_name, nodes[a].variable_name) <
               std::tie(nodes[b].module_name, nodes[b].variable_name);
    };
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_degree[i] == 0) ready.push_back(i);
    }
    std::sort(ready.begin(), ready.end(), lexical_less);
    auto& order = table.order;
    order.reserve(n);
    while (!ready.empty()) {
        // Pop the lexically smallest ready node.
        auto it = std::min_element(ready.begin(), ready.end(), lexical_less);
        std::size_t node = *it;
        ready.erase(it);
        order.push_back(node);
        for (std::size_t dep : dependents[node]) {
            if (--in_degree[dep] == 0) ready.push_back(dep);
        }
    }
    if (order.size() != n) {
        std::string cyclic;
        for (std::size_t i = 0; i < n; ++i) {
            if (in_degree[i] > 0) {
                if (!cyclic.empty()) cyclic += ", ";
                cyclic += qualified(nodes[i].module_name, nodes[i].variable_name);
            }
        }
        throw CycleDetectedError("within-slice cycle involving: " + cyclic);
    }

    CausalModel model;
    model.data_ = std::move(data);
    return model;
}

bool CausalModel::has_variable(const std::string& module_name,
                               const std::string& variable_name) const {
    return data_ && data_->table->index.count(qualified(module_name, variable_name)) != 0;
}

std::size_t CausalModel::variable_count() const { return data_ ? data_->nodes.size() : 0; }

CausalModel CausalModel::intervene(const Intervention& iv) const {
    if (!has_variable(iv.target.module_name, iv.target.variable_name)) {
        throw NoSuchVariableError("intervention target does not exist: " +
                                  qualified(iv.target.module_name, iv.target.variable_name));
    }
    CausalModel out = *this;
    out.interventions_.push_back(iv);
    return out;
}

// ---------------------------------------------------------------------------
// Rollout
// ---------------------------------------------------------------------------

int Rollout::slice_of(double time) const {
    if (time_step_ <= 0.0) return 0;
    int s = static_cast<int>(std::llround(time / time_step_));
    return std::clamp(s, 0, slice_count() - 1);
}

const Value& Rollout::at(const std::string& module_name, const std::string& variable_name,
                         int slice) const {
    const auto* table = static_cast<const VariableTable*>(table_.get());
    auto it = table->index.find(qualified(module_name, variable_name));
    if (it == table->index.end()) {
        throw NoSuchVariableError("no such variable: " + qualified(module_name, variable_name));
    }
    if (slice < 0 || slice >= slice_count()) {
        throw NoSuchVariableError("slice out of range for " +
                                  qualified(module_name, variable_name) + ": " +
                                  std::to_string(slice));
    }
    return slices_[static_cast<std::size_t>(slice)][it->second];
}

bool Rollout::has(const std::string& module_name, const std::string& variable_name) const {
    const auto* table = static_cast<const VariableTable*>(table_.get());
    return table->index.count(qualified(module_name, variable_name)) != 0;
}

bool Rollout::operator==(const Rollout& other) const {
    return time_step_ == other.time_step_ && slices_ == other.slices_;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace {

/// Resolves which intervention (if any) governs a variable at a slice time.
/// Later interventions shadow earlier ones on the same variable.
const Intervention* active_intervention(const std::vector<Intervention>& ivs,
                                        const VariableNode& node, double time) {
    const Intervention* found = nullptr;
    for (const Intervention& iv : ivs) {
        if (iv.target.module_name != node.module_name ||
            iv.target.variable_name != node.variable_name) {
            continue;
        }
        const double lo = iv.target.from_time.value_or(-std::numeric_limits<double>::infinity());
        const double hi = iv.target.to_time.value_or(std::numeric_limits<double>::infinity());
        // Half-open window: the first slice at or after from_time is the
        // first one affected (with a small tolerance for binary time math).
        if (time >= lo - 1e-9 && time < hi - 1e-9) found = &iv;
    }
    return found;
}

Value draw_exogenous(const VariableNode& node, std::size_t var_index, int slice,
                     std::uint64_t seed) {
    if (const auto* point = std::get_if<PointDistribution>(&node.distribution)) {
        return point->value;
    }
    const auto& g = std::get<GaussianDistribution>(node.distribution);
    std::mt19937_64 rng(draw_seed(seed, var_index, slice));
    std::normal_distribution<double> dist(g.mean, g.stddev);
    return dist(rng);
}

}  // namespace

void CausalModel::evaluate_slices(Rollout& out, int first_slice, int last_slice,
                                  std::uint64_t seed) const {
    const auto& nodes = data_->nodes;
    const auto& order = data_->table->order;
    const double dt = out.time_step_;

    std::vector<Value> parent_buffer;
    for (int slice = first_slice; slice <= last_slice; ++slice) {
        auto& values = out.slices_[static_cast<std::size_t>(slice)];
        const auto* prev =
            slice > 0 ? &out.slices_[static_cast<std::size_t>(slice) - 1] : nullptr;
        const EvalContext ctx{slice, slice * dt, dt};

        for (std::size_t var : order) {
            const VariableNode& node = nodes[var];
            const Intervention* iv =
                interventions_.empty() ? nullptr
                                       : active_intervention(interventions_, node, ctx.time);

            Value value;
            if (iv != nullptr && std::holds_alternative<Value>(iv->forced)) {
                value = std::get<Value>(iv->forced);
            } else if (iv != nullptr) {
                const auto& repl = std::get<ReplacementEquation>(iv->forced);
                parent_buffer.clear();
                for (const ParentRef& ref : repl.parents) {
                    auto it = data_->table->index.find(
                        qualified(ref.module_name, ref.variable_name));
                    if (it == data_->table->index.end()) {
                        throw UnboundVariableError("replacement equation parent unbound: " +
                                                   qualified(ref.module_name,
                                                             ref.variable_name));
                    }
                    if (ref.lag == Lag::previous) {
                        if (prev == nullptr) {
                            throw MissingInitialValueError(
                                "replacement equation reads a lagged parent at slice 0");
                        }
                        parent_buffer.push_back((*prev)[it->second]);
                    } else {
                        parent_buffer.push_back(values[it->second]);
                    }
                }
                value = repl.map(ctx, parent_buffer);
            } else if (node.exogenous) {
                value = draw_exogenous(node, var, slice, seed);
            } else if (slice == 0 && node.initial.has_value()) {
                value = *node.initial;
            } else {
                parent_buffer.clear();
                for (const ResolvedParent& p : node.parents) {
                    parent_buffer.push_back(p.lag == Lag::previous ? (*prev)[p.index]
                                                                   : values[p.index]);
                }
                value = node.map(ctx, parent_buffer);
            }

            if (!value_is_finite(value)) {
                throw NumericOverflowError(
                    "non-finite value for " +
                    qualified(node.module_name, node.variable_name) + " at slice " +
                    std::to_string(slice));
            }
            values[var] = std::move(value);
        }
    }
}

Rollout CausalModel::simulate(double time_step, double horizon, std::uint64_t seed) const {
    if (!data_) throw Error("simulate on an empty model");
    if (time_step <= 0.0) throw Error("time_step must be positive");
    if (horizon < time_step) throw Error("horizon must cover at least one step");

    Rollout out;
    out.time_step_ = time_step;
    out.horizon_ = horizon;
    out.table_ = std::shared_ptr<const void>(data_->table, data_->table.get());
    const int last = static_cast<int>(std::floor(horizon / time_step + 1e-9));
    out.slices_.assign(static_cast<std::size_t>(last) + 1,
                       std::vector<Value>(data_->nodes.size()));
    evaluate_slices(out, 0, last, seed);
    return out;
}

Rollout CausalModel::simulate_from(const Rollout& base, int start_slice, double horizon,
                                   std::uint64_t seed) const {
    if (!data_) throw Error("simulate_from on an empty model");
    if (start_slice < 1 || start_slice > base.slice_count()) {
        throw Error("simulate_from: start_slice outside the base rollout");
    }
    const double time_step = base.time_step();
    Rollout out;
    out.time_step_ = time_step;
    out.horizon_ = horizon;
    out.table_ = std::shared_ptr<const void>(data_->table, data_->table.get());
    const int last = static_cast<int>(std::floor(horizon / time_step + 1e-9));
    out.slices_.assign(static_cast<std::size_t>(last) + 1,
                       std::vector<Value>(data_->nodes.size()));
    const int copy_end = std::min(start_slice, last + 1);
    for (int s = 0; s < copy_end; ++s) {
        out.slices_[static_cast<std::size_t>(s)] = base.slices_[static_cast<std::size_t>(s)];
    }
    if (copy_end <= last) evaluate_slices(out, copy_end, last, seed);
    return out;
}

}  // namespace drivecause::scm
