#pragma once

#include <span>

#include "qsym/depth.hpp"
#include "qsym/errors.hpp"

namespace qsym {

// dup[i] = length of the run of equal values starting at i (0-based) when
// that run has length > 1 and starts there; 0 elsewhere.  Computed by the
// bottom-up block merge over a power-of-two padding of the list.
IntList detect_duplicates(std::span<const Value> nsil, DepthReport* depth = nullptr);

// Layers used by detect_duplicates for a list of n elements.
DepthReport duplicate_detection_cost(std::size_t n);

// Per-position start of the run containing i, read back from a dup vector.
IntList run_starts_from_dup(std::span<const Value> dup);

} // namespace qsym
