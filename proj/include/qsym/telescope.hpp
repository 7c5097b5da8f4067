#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qsym/depth.hpp"
#include "qsym/symmetrize.hpp"

namespace qsym {

// Detectors on a line: m detectors spaced d apart observing wavelength
// lambda; v picks the field-of-view window.
struct ArrayConfig {
    std::size_t m = 4;
    double d = 1.0;
    double lambda = 1.0;
    Value v = 0;

    void validate() const;
};

// Photon directions, either as angles or as grid bins k in [0, m).
struct PhotonAngles {
    std::vector<double> thetas;  // radians, used when !grid
    IntList bins;                // used when grid
    bool grid = false;

    static PhotonAngles from_thetas(std::vector<double> thetas);
    static PhotonAngles from_bins(IntList bins);
    std::size_t size() const { return grid ? bins.size() : thetas.size(); }
};

// sin(theta) of grid bin k: k lambda / (m d) + v lambda / d.
double angle_from_k(const ArrayConfig& cfg, Value k);
// Nearest bin for sin(theta) (inverse of angle_from_k on the grid).
Value k_from_sin(const ArrayConfig& cfg, double sin_theta);

// Phase of photon i at detector j, reduced to [0, 2 pi).  Grid bins use the
// exact rational form 2 pi (j k mod m) / m.
double detector_phase(const ArrayConfig& cfg, const PhotonAngles& photons, std::size_t i, std::size_t j);

// Occupation-register states ("occ", arity m).
SparseState build_single_photon_state(const ArrayConfig& cfg, const PhotonAngles& photon);
SparseState build_multiphoton_state(const ArrayConfig& cfg, const PhotonAngles& photons);

// |j> -> (1/sqrt m) sum_k exp(-2 pi i j k / m) |k> on element `slot` of
// register `name` (exp(+...) when inverse).  m is the register bound and
// must be a power of two.
SparseState qft_register(const SparseState& state, const std::string& name, std::size_t slot, bool inverse = false);
SparseState qft_all(const SparseState& state, const std::string& name, bool inverse = false);

struct ImageResult {
    SparseState detected;   // occupation representation
    SparseState symmetric;  // first quantized, before the QFT
    SparseState readout;    // after the QFT on every slot
    std::map<IntList, double> ordered;    // outcome list -> probability
    std::map<IntList, double> multisets;  // sorted outcome -> probability
    IntList sample;                       // one measured outcome (sorted)
    IntList recovered;                    // most likely multiset
    DepthReport depth;
};

ImageResult image_pipeline(const ArrayConfig& cfg, const PhotonAngles& photons, std::uint64_t seed,
                           const SymmetrizeOptions& options = {});

} // namespace qsym
