#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsym/depth.hpp"
#include "qsym/network.hpp"
#include "qsym/ops.hpp"

namespace qsym {

// Register names shared by the symmetrization routines.
namespace reg {
inline constexpr const char* data = "data";      // the list being symmetrized
inline constexpr const char* record = "record";  // comparator record bits
inline constexpr const char* perm = "perm";      // permutation platform
inline constexpr const char* dup = "dup";        // duplicate-run lengths
inline constexpr const char* random = "random";  // Berry padding register
} // namespace reg

struct BerryConfig {
    double a = 3.0;
    // Range of each random entry; 0 means ceil(n^a).
    std::uint64_t f_n = 0;
    bool postselect = false;
    // Store the random register as its pattern of relative order instead of
    // the raw values.  Every later step only compares entries, so this is an
    // exact isometric reduction of the f^n-term register.
    bool compress = true;
    // Without postselection: measure the random register with this seed and
    // return the conditional state.  Otherwise the register stays in the
    // output as a purification of the discarded system.
    std::optional<std::uint64_t> seed;

    std::uint64_t range(std::size_t n) const;
};

enum class ResourceKind { exact, berry };
enum class LesKernel { automatic, parallel, naive };

struct SymmetrizeOptions {
    NetworkKind network = NetworkKind::bitonic;
    // How the single-input path obtains sum_sigma |sigma(12...n)>.
    ResourceKind resource = ResourceKind::exact;
    BerryConfig berry;
    // `automatic` runs the reversible merge kernel per term up to
    // kParallelKernelLimit elements and the direct fill above it; both
    // compute the same bijection and the depth report always charges the
    // parallel circuit.
    LesKernel les_kernel = LesKernel::automatic;
    LiftOptions lift;
};

inline constexpr std::size_t kParallelKernelLimit = 8;

// A state whose only register is "data" (length n, entries below `bound`).
Layout data_layout(std::size_t n, Value bound);
SparseState list_state(const IntList& list, Value bound = 0);
SparseState list_superposition(const std::vector<std::pair<IntList, Amplitude>>& terms, Value bound = 0);

// Uniform superposition over LES of length n, written into register `name`.
RegisterPreparation uniform_les_preparation(const Layout& layout, const std::string& name);
// LES_l for the list held in `data`, with run starts read from `dup`.
RegisterPreparation subgroup_les_preparation(const Layout& layout, const std::string& name, const std::string& dup);

// In-place LES -> permutation (and back) on register `name`.
SparseState les_register_to_perm(const SparseState& s, const std::string& name, const SymmetrizeOptions& options,
                                 DepthReport* depth = nullptr);
SparseState perm_register_to_les(const SparseState& s, const std::string& name, DepthReport* depth = nullptr);

struct BerryResult {
    SparseState state;
    // Mass of the repetitive branch of the random register.
    double repetitive_probability = 0.0;
    double success_probability = 1.0;
    // 1 - n^2 / (2 f_n): lower bound on the data fidelity without postselection.
    double fidelity_bound = 1.0;
    std::uint64_t f_n = 0;
    std::optional<IntList> measured;
};

// Sorting-based symmetrization of lists with distinct entries using a random
// padding register.  The data register must hold an SIL on every term.
BerryResult berry_sil_symmetrize(const SparseState& state, const BerryConfig& cfg,
                                 NetworkKind network = NetworkKind::bitonic, DepthReport* depth = nullptr);

// Exact symmetrization of SIL inputs through the LES resource.
SparseState exact_sil_symmetrize(const SparseState& state, const SymmetrizeOptions& options = {},
                                 DepthReport* depth = nullptr);

// (1/sqrt(n!)) sum_sigma |sigma(12...n)> in register "perm".  The exact
// version is memoized per (n, network).
std::shared_ptr<const SparseState> permutation_resource(std::size_t n, const SymmetrizeOptions& options = {},
                                                        DepthReport* depth = nullptr,
                                                        double* success_probability = nullptr);

struct SingleResult {
    SparseState state;     // register "data" only
    SparseState platform;  // register "perm": the H_l orbit state
    SparseState joint;     // data and perm before factoring
    double entropy = 0.0;
    double resource_success = 1.0;
    DepthReport depth;
};

SingleResult nsil_symmetrize_single(const IntList& nsil, const SymmetrizeOptions& options = {}, Value bound = 0);

// Adds register "perm" holding (1/sqrt|H_l|) sum_{h in H_l} |h(12...n)> for
// the list l in `data` (which must be an NSIL on every term).
SparseState subgroup_superposition(const SparseState& state, const SymmetrizeOptions& options = {},
                                   DepthReport* depth = nullptr);

// Inverse: projects "perm" onto the H_l orbit state and removes it.
ProjectionResult subgroup_superposition_inverse(const SparseState& state, const SymmetrizeOptions& options = {},
                                                DepthReport* depth = nullptr);

struct SuperposedResult {
    SparseState state;
    // Mass left in the clean ancilla sector (1 for valid inputs).
    double clean_mass = 1.0;
    DepthReport depth;
};

// sum_l a_l |l>  ->  sum_l a_l |sym(l)> for NSILs l of a common length.
SuperposedResult nsil_symmetrize_superposed(const SparseState& state, const SymmetrizeOptions& options = {});

// Runs the superposed chain backward.  The input must be permutation
// invariant; throws ValidationError if the clean mass falls below 1 - 1e-9.
SuperposedResult nsil_unsymmetrize_superposed(const SparseState& state, const SymmetrizeOptions& options = {});

// Direct construction: every term's data list spread uniformly over its
// distinct rearrangements.  Used to report fidelities; it does not run any
// of the circuits above.
SparseState reference_symmetrization(const SparseState& state);

// Dicke state D_n^k over a binary data register.
SparseState dicke(std::size_t n, std::size_t k, const SymmetrizeOptions& options = {}, DepthReport* depth = nullptr);
// sum_k w_k D_n^k; weights must be normalized.
SparseState dicke_superposition(std::size_t n, const std::map<std::size_t, Amplitude>& weights,
                                const SymmetrizeOptions& options = {}, DepthReport* depth = nullptr);

} // namespace qsym
