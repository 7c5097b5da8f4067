#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsym/state.hpp"

namespace qsym {

// A classical reversible map acting in place on a flat configuration.  It
// must be a bijection on the support it is applied to; lift() checks that.
using ClassicalMap = std::function<void(std::span<Value>)>;

// Layout-changing variant: reads the input configuration, writes the output.
using ClassicalRemap = std::function<void(std::span<const Value>, std::span<Value>)>;

struct LiftOptions {
    // Terms are mapped in contiguous chunks by this many threads.  Output
    // positions are fixed up front, so the result is identical for any count.
    std::size_t threads = 1;
};

SparseState lift(const SparseState& state, const ClassicalMap& map, const LiftOptions& options = {});
SparseState lift(const SparseState& state, const Layout& out_layout, const ClassicalRemap& map,
                 const LiftOptions& options = {});

// Receives the weighted successors of one basis configuration.
class BranchSink {
public:
    virtual ~BranchSink() = default;
    virtual void emit(std::span<const Value> flat, Amplitude weight) = 0;
};

using BranchMap = std::function<void(std::span<const Value>, BranchSink&)>;

// Applies a map that sends each basis configuration to a normalized
// superposition.  Checks per-input normalization and that the total norm is
// preserved (the map is an isometry on the touched support).
SparseState superpose(const SparseState& state, const BranchMap& branches, double tolerance = 1e-9);

// Prepares register `target` (which must hold all zeros) into a superposition
// that may depend on the rest of the configuration.
struct RegisterPreparation {
    std::string target;
    // Emits (register contents, amplitude) pairs for a configuration whose
    // target register is zero.
    std::function<void(std::span<const Value> config,
                       const std::function<void(std::span<const Value>, Amplitude)>& emit)>
        branches;
    // Amplitude the forward map assigns to `contents` given `config` (target
    // register zero).  Used for the adjoint.
    std::function<Amplitude(std::span<const Value> config, std::span<const Value> contents)> amplitude;
};

SparseState prepare(const SparseState& state, const RegisterPreparation& prep, double tolerance = 1e-9);

struct ProjectionResult {
    SparseState state;
    // Fraction of the input norm that survived the projection.
    double kept_fraction = 1.0;
};

// Adjoint of prepare() followed by projection onto target = 0.  The kept
// fraction is 1 exactly when the input lies in the image of prepare().
ProjectionResult unprepare(const SparseState& state, const RegisterPreparation& prep);

// Keeps the terms whose configuration satisfies `keep` (not renormalized).
ProjectionResult project(const SparseState& state, const std::function<bool(std::span<const Value>)>& keep);

SparseState tensor(const SparseState& a, const SparseState& b);
SparseState add_register(const SparseState& state, RegisterSpec spec, const IntList& contents = {});

// Projects register `name` onto `clean` (zeros by default) and drops it.
// Throws InvariantError if the discarded mass exceeds `tolerance`.
ProjectionResult release_register(const SparseState& state, std::string_view name, const IntList& clean = {},
                                  double tolerance = 1e-12);

SparseState rename_register(const SparseState& state, std::string_view from, std::string to);

Amplitude inner(const SparseState& a, const SparseState& b);
// |<a|b>|^2 / (|a|^2 |b|^2)
double fidelity(const SparseState& a, const SparseState& b);

// Born distribution of one register.
std::map<IntList, double> distribution(const SparseState& state, std::string_view name);

struct Measurement {
    IntList outcome;
    SparseState post;  // normalized
};
Measurement measure_register(const SparseState& state, std::string_view name, std::uint64_t seed);

// Spectrum of the reduced state on `keep` (the smaller side is diagonalized).
std::vector<double> reduced_spectrum(const SparseState& state, const std::vector<std::string>& keep);
double entanglement_entropy(const SparseState& state, const std::vector<std::string>& keep);

// <target| rho_keep |target> for a pure target over the kept registers.
double reduced_fidelity(const SparseState& state, const std::vector<std::string>& keep, const SparseState& target);

struct FactorResult {
    SparseState kept;  // normalized, registers in original order
    SparseState rest;  // the complementary factor, normalized
    double entropy = 0.0;
};

// Splits a product state.  Throws InvariantError if the entropy across the cut
// exceeds `tolerance`.
FactorResult factor_out(const SparseState& state, const std::vector<std::string>& keep, double tolerance = 1e-9);

} // namespace qsym
