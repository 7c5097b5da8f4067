#pragma once

#include <array>
#include <string>
#include <vector>

#include "qsym/depth.hpp"
#include "qsym/network.hpp"
#include "qsym/symmetrize.hpp"

namespace qsym {

namespace reg {
inline constexpr const char* occ = "occ";  // occupation numbers n_0 .. n_{m-1}
} // namespace reg

// (a, b, c): mode entries carry a < m, added entries carry a == m.
using Triple = std::array<Value, 3>;

struct ConversionStage {
    std::string name;  // "W1" .. "W8", "Wf"
    std::string rule;  // order the entries satisfy at this stage
    std::vector<Triple> entries;
};

struct ConversionTrace {
    std::vector<ConversionStage> stages;
};

// 0^{n_0} 1^{n_1} ... (m-1)^{n_{m-1}} through the staged sorting pipeline.
// Every stage is checked against its order; n = sum n_i must be positive.
IntList occ_to_nsil(const IntList& occ, DepthReport* depth = nullptr, ConversionTrace* trace = nullptr,
                    NetworkKind network = NetworkKind::bitonic);

// Exact inverse: runs the stages backward.  Entries must lie in [0, m).
// The trace lists the stages in the order they are reached.
IntList nsil_to_occ(const IntList& nsil, std::size_t m, DepthReport* depth = nullptr,
                    ConversionTrace* trace = nullptr, NetworkKind network = NetworkKind::bitonic);

// State over register "occ" (arity m, entries up to n).
SparseState occupation_state(const std::vector<std::pair<IntList, Amplitude>>& terms);

// occ -> data (in place, then symmetrized).  All terms must share n.
SparseState second_to_first(const SparseState& state, const SymmetrizeOptions& options = {},
                            DepthReport* depth = nullptr);
// data -> occ for m modes.  Throws ValidationError for non-symmetric input.
SparseState first_to_second(const SparseState& state, std::size_t m, const SymmetrizeOptions& options = {},
                            DepthReport* depth = nullptr);

} // namespace qsym
