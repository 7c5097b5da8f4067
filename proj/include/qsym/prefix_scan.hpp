#pragma once

#include <span>

#include "qsym/depth.hpp"
#include "qsym/errors.hpp"

namespace qsym {

// Register width (bits) that holds every prefix sum of n entries bounded by
// max_entry, plus one guard bit.
unsigned scan_width(std::size_t n, Value max_entry);

// D(h, t) with 1-based inclusive h, t: adds d[mid] to d[mid+1..t],
// mid = floor((h + t) / 2).  The subtractive variant undoes it.  Throws
// ValidationError if a sum reaches 2^width.
void d_step(std::span<Value> d, std::size_t h, std::size_t t, unsigned width);
void d_step_inverse(std::span<Value> d, std::size_t h, std::size_t t);

// Layers of one D(h, t) on a block of `block` entries: fan the middle value
// out to the block/2 targets, add, and uncompute the copies.
std::size_t d_step_layers(std::size_t block);

// In-place inclusive prefix sums.  The length must be a power of two (pad
// with zeros otherwise; see padded_prefix_sums).
void prefix_sums_in_place(std::span<Value> d, unsigned width, DepthReport* depth = nullptr);
void unprefix_sums_in_place(std::span<Value> d, DepthReport* depth = nullptr);

// Pads to a power of two, scans, and strips the padding.
IntList prefix_sums(std::span<const Value> d, DepthReport* depth = nullptr);
IntList unprefix_sums(std::span<const Value> d, DepthReport* depth = nullptr);

} // namespace qsym
