#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "drivecause/dynamics.hpp"
#include "drivecause/errors.hpp"
#include "drivecause/geometry.hpp"
#include "drivecause/types.hpp"

namespace drivecause::scm {

/// Payload carried by one variable at one time slice. The substrate is
/// domain-agnostic; the variant enumerates the value kinds the vehicle models
/// put on the graph.
using Value = std::variant<bool, std::int64_t, double, Vec2, Wrench, Action, RigidBodyState>;

/// True when every numeric component of the value is finite.
bool value_is_finite(const Value& v);

/// Identity of one variable instance at a concrete time slice.
struct VariableId {
    std::string module_name;
    std::string variable_name;
    int time_index = 0;

    bool operator==(const VariableId&) const = default;
};

/// How a parent reference resolves in time when an equation is stamped onto a
/// slice: the same slice, or one slice back (the Markov lag-1 bound).
enum class Lag { same, previous };

struct ParentRef {
    std::string module_name;
    std::string variable_name;
    Lag lag = Lag::same;
};

/// Per-slice evaluation context handed to every structural equation.
struct EvalContext {
    int slice = 0;
    double time = 0.0;  // slice * time_step
    double dt = 0.0;
};

using EquationFn = std::function<Value(const EvalContext&, std::span<const Value>)>;

/// A structural equation, authored once per endogenous variable and stamped
/// across every time slice of a rollout. Equations whose parents look one
/// slice back must supply `initial` as the slice-0 boundary value.
struct StructuralEquation {
    std::string module_name;
    std::string variable_name;
    std::vector<ParentRef> parents;
    EquationFn map;
    std::optional<Value> initial;
};

/// Exogenous variables are fixed points by default; a seeded Gaussian draw is
/// available where a distribution is wanted. Draws are keyed by (seed,
/// variable, slice) so they are reproducible and intervention-independent.
struct PointDistribution {
    Value value;
};
struct GaussianDistribution {
    double mean = 0.0;
    double stddev = 1.0;
};

struct ExogenousSpec {
    std::string module_name;
    std::string variable_name;
    std::variant<PointDistribution, GaussianDistribution> distribution;
};

/// Selects variable instances for an intervention: one variable name over a
/// half-open time window [from_time, to_time); unset bounds extend to the
/// rollout boundary.
struct VariablePattern {
    std::string module_name;
    std::string variable_name;
    std::optional<double> from_time;
    std::optional<double> to_time;
};

struct ReplacementEquation {
    std::vector<ParentRef> parents;
    EquationFn map;
};

/// do-intervention: within the targeted slices the variable's original
/// equation (or exogenous draw) is discarded entirely and replaced by the
/// forced value or equation.
struct Intervention {
    VariablePattern target;
    std::variant<Value, ReplacementEquation> forced;
};

class CausalModel;

/// Time-indexed assignment of every variable produced by simulate().
class Rollout {
public:
    double time_step() const { return time_step_; }
    double horizon() const { return horizon_; }
    int slice_count() const { return static_cast<int>(slices_.size()); }
    double time_of(int slice) const { return slice * time_step_; }
    /// Nearest slice index for an absolute time, clamped to the rollout.
    int slice_of(double time) const;

    const Value& at(const std::string& module_name, const std::string& variable_name,
                    int slice) const;
    bool has(const std::string& module_name, const std::string& variable_name) const;

    bool operator==(const Rollout& other) const;

private:
    friend class CausalModel;
    double time_step_ = 0.0;
    double horizon_ = 0.0;
    std::vector<std::vector<Value>> slices_;  // [slice][variable]
    std::shared_ptr<const void> table_;       // shared variable index
};

/// Immutable structural causal model over time-stamped variables. Copies are
/// cheap (shared structure); intervene() returns an independent model.
class CausalModel {
public:
    CausalModel() = default;

    /// Validates: no duplicate definitions, every parent bound to an
    /// endogenous equation or exogenous spec, within-slice acyclicity, and
    /// initial values present wherever a lagged parent demands one. The
    /// within-slice evaluation order is fixed here (Kahn topological order
    /// with (module_name, variable_name) lexical tie-breaking).
    static CausalModel build(std::vector<StructuralEquation> equations,
                             std::vector<ExogenousSpec> exogenous);

    /// Returns a new model with the intervention applied; *this is untouched.
    /// Throws NoSuchVariableError when the pattern matches nothing.
    CausalModel intervene(const Intervention& iv) const;

    /// Rolls the model out slice by slice. Deterministic for a fixed seed and
    /// intervention set. Any non-finite value aborts with
    /// NumericOverflowError so callers can discard divergent candidates.
    Rollout simulate(double time_step, double horizon, std::uint64_t seed) const;

    /// Continues a rollout of this model whose slices before `start_slice`
    /// are already known to coincide with `base` (the caller guarantees the
    /// models agree on those slices; with lag <= 1 the suffix is then exact).
    Rollout simulate_from(const Rollout& base, int start_slice, double horizon,
                          std::uint64_t seed) const;

    bool has_variable(const std::string& module_name, const std::string& variable_name) const;
    std::size_t variable_count() const;

private:
    struct Data;
    std::shared_ptr<const Data> data_;
    std::vector<Intervention> interventions_;

    void evaluate_slices(Rollout& out, int first_slice, int last_slice,
                         std::uint64_t seed) const;
};

/// Free-function spellings of the model operations.
inline CausalModel build_model(std::vector<StructuralEquation> equations,
                               std::vector<ExogenousSpec> exogenous = {}) {
    return CausalModel::build(std::move(equations), std::move(exogenous));
}
inline CausalModel intervene(const CausalModel& model, const Intervention& iv) {
    return model.intervene(iv);
}
inline Rollout simulate(const CausalModel& model, double time_step, double horizon,
                        std::uint64_t seed) {
    return model.simulate(time_step, horizon, seed);
}

}  // namespace drivecause::scm
