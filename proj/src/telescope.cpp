#include "qsym/telescope.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "qsym/convert.hpp"
#include "qsym/permutation.hpp"

namespace qsym {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool power_of_two(std::uint64_t x) { return x && std::has_single_bit(x); }

} // namespace

void ArrayConfig::validate() const {
    if (m < 2) throw ValidationError("need at least two detectors");
    if (!(d > 0) || !(lambda > 0)) throw ValidationError("spacing and wavelength must be positive");
}

PhotonAngles PhotonAngles::from_thetas(std::vector<double> thetas) {
    PhotonAngles p;
    p.thetas = std::move(thetas);
    return p;
}

PhotonAngles PhotonAngles::from_bins(IntList bins) {
    PhotonAngles p;
    p.bins = std::move(bins);
    p.grid = true;
    return p;
}

double angle_from_k(const ArrayConfig& cfg, Value k) {
    cfg.validate();
    if (k < 0 || k >= static_cast<Value>(cfg.m)) throw ValidationError("bin k outside [0, m)");
    return static_cast<double>(k) * cfg.lambda / (static_cast<double>(cfg.m) * cfg.d) +
           static_cast<double>(cfg.v) * cfg.lambda / cfg.d;
}

Value k_from_sin(const ArrayConfig& cfg, double sin_theta) {
    cfg.validate();
    const double x = (sin_theta - static_cast<double>(cfg.v) * cfg.lambda / cfg.d) * static_cast<double>(cfg.m) *
                     cfg.d / cfg.lambda;
    const auto m = static_cast<Value>(cfg.m);
    return ((static_cast<Value>(std::llround(x)) % m) + m) % m;
}

double detector_phase(const ArrayConfig& cfg, const PhotonAngles& photons, std::size_t i, std::size_t j) {
    if (photons.grid) {
        const Value k = photons.bins.at(i), m = static_cast<Value>(cfg.m);
        if (k < 0 || k >= m) throw ValidationError("bin k outside [0, m)");
        return kTwoPi * static_cast<double>((static_cast<Value>(j) * k) % m) / static_cast<double>(m);
    }
    const double x = static_cast<double>(j) * cfg.d * std::sin(photons.thetas.at(i)) / cfg.lambda;
    return kTwoPi * (x - std::floor(x));
}

SparseState build_single_photon_state(const ArrayConfig& cfg, const PhotonAngles& photon) {
    if (photon.size() != 1) throw ValidationError("single-photon state needs exactly one angle");
    return build_multiphoton_state(cfg, photon);
}

SparseState build_multiphoton_state(const ArrayConfig& cfg, const PhotonAngles& photons) {
    cfg.validate();
    const std::size_t n = photons.size(), m = cfg.m;
    if (n == 0) return SparseState::basis(Layout({{reg::occ, m, 1}}), {IntList(m, 0)});
    // Each occupation profile W collects the assignments r whose sorted form
    // is l(W); the creation operators contribute sqrt(prod n_i!).
    std::vector<std::pair<IntList, Amplitude>> terms;
    IntList occ(m, 0);
    auto visit = [&](auto&& self, std::size_t mode, std::size_t left) -> void {
        if (mode + 1 == m) {
            occ[mode] = static_cast<Value>(left);
            IntList l;
            double bosonic = 1.0;
            for (std::size_t i = 0; i < m; ++i) {
                l.insert(l.end(), static_cast<std::size_t>(occ[i]), static_cast<Value>(i));
                bosonic *= static_cast<double>(factorial(static_cast<std::size_t>(occ[i])));
            }
            Amplitude sum = 0.0;
            for (const auto& r : multiset_permutations(l)) {
                double phase = 0.0;
                for (std::size_t i = 0; i < n; ++i) phase += detector_phase(cfg, photons, i, static_cast<std::size_t>(r[i]));
                phase = std::fmod(phase, kTwoPi);
                sum += std::polar(1.0, phase);
            }
            sum *= std::sqrt(bosonic);
            if (std::abs(sum) > 1e-13) terms.push_back({occ, sum});
            return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
            occ[mode] = static_cast<Value>(c);
            self(self, mode + 1, left - c);
        }
    };
    visit(visit, 0, n);
    if (terms.empty()) throw ValidationError("photon amplitudes cancel completely");
    return occupation_state(terms).normalized();
}

SparseState qft_register(const SparseState& state, const std::string& name, std::size_t slot, bool inverse) {
    const Layout& layout = state.layout();
    const RegisterSpec& spec = layout.spec(name);
    if (slot >= spec.arity) throw ValidationError("QFT slot out of range");
    const auto m = static_cast<std::uint64_t>(spec.bound);
    if (!power_of_two(m)) throw ValidationError("QFT needs a register bound that is a power of two");
    const std::size_t pos = layout.offset(name) + slot;
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    const double sign = inverse ? 1.0 : -1.0;
    return superpose(state, [&](std::span<const Value> in, BranchSink& sink) {
        IntList out(in.begin(), in.end());
        const auto j = static_cast<std::uint64_t>(in[pos]);
        for (std::uint64_t k = 0; k < m; ++k) {
            out[pos] = static_cast<Value>(k);
            const double phase = sign * kTwoPi * static_cast<double>((j * k) % m) / static_cast<double>(m);
            sink.emit(out, std::polar(scale, phase));
        }
    });
}

SparseState qft_all(const SparseState& state, const std::string& name, bool inverse) {
    SparseState s = state;
    for (std::size_t slot = 0; slot < state.layout().spec(name).arity; ++slot) s = qft_register(s, name, slot, inverse);
    return s;
}

ImageResult image_pipeline(const ArrayConfig& cfg, const PhotonAngles& photons, std::uint64_t seed,
                           const SymmetrizeOptions& options) {
    cfg.validate();
    if (!power_of_two(cfg.m)) throw ValidationError("detector count must be a power of two for the QFT readout");
    ImageResult r;
    r.detected = build_multiphoton_state(cfg, photons);
    if (photons.size() == 0) {
        r.symmetric = r.readout = SparseState::basis(data_layout(0, static_cast<Value>(cfg.m)), {IntList{}});
        r.ordered[{}] = 1.0;
        r.multisets[{}] = 1.0;
        return r;
    }
    r.symmetric = second_to_first(r.detected, options, &r.depth);
    r.readout = qft_all(r.symmetric, reg::data);
    r.depth.elementary_layers += 1;
    r.ordered = distribution(r.readout, reg::data);
    for (const auto& [outcome, p] : r.ordered) {
        IntList sorted = outcome;
        std::sort(sorted.begin(), sorted.end());
        r.multisets[sorted] += p;
    }
    r.sample = measure_register(r.readout, reg::data, seed).outcome;
    std::sort(r.sample.begin(), r.sample.end());
    double best = -1.0;
    for (const auto& [ms, p] : r.multisets)
        if (p > best + 1e-12) {
            best = p;
            r.recovered = ms;
        }
    return r;
}

} // namespace qsym
