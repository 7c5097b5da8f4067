#pragma once

#include <algorithm>
#include <cstddef>

namespace qsym {

// Resource counts of a circuit.  Composing two circuits in sequence adds their
// layers; ancillas are reused between stages, so the peak is kept.
struct DepthReport {
    std::size_t comparator_layers = 0;
    std::size_t elementary_layers = 0;
    std::size_t ancilla_qubits = 0;

    DepthReport& operator+=(const DepthReport& o) {
        comparator_layers += o.comparator_layers;
        elementary_layers += o.elementary_layers;
        ancilla_qubits = std::max(ancilla_qubits, o.ancilla_qubits);
        return *this;
    }

    void note_ancillas(std::size_t qubits) { ancilla_qubits = std::max(ancilla_qubits, qubits); }

    bool operator==(const DepthReport&) const = default;
};

inline DepthReport operator+(DepthReport a, const DepthReport& b) {
    a += b;
    return a;
}

inline void add_depth(DepthReport* target, const DepthReport& d) {
    if (target) *target += d;
}

} // namespace qsym
