#pragma once

// Brute-force references for the tests.  Nothing here calls into the
// library's algorithms; only the plain data types are shared.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "qsym/errors.hpp"
#include "qsym/state.hpp"

namespace oracle {

using qsym::IntList;
using qsym::Value;
using cplx = std::complex<double>;
using Vec = std::map<IntList, cplx>;

inline std::uint64_t fact(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

inline double norm2(const Vec& v) {
    double s = 0;
    for (const auto& [k, a] : v) s += std::norm(a);
    return s;
}

inline Vec normalized(Vec v) {
    const double n = std::sqrt(norm2(v));
    for (auto& [k, a] : v) a /= n;
    return v;
}

// Symmetrizes each list by summing over every index permutation, then
// rescales so each input term keeps its own weight.
inline Vec symmetrize(const std::vector<std::pair<IntList, cplx>>& terms) {
    Vec out;
    for (const auto& [l, amp] : terms) {
        std::vector<std::size_t> idx(l.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        Vec part;
        do {
            IntList p(l.size());
            for (std::size_t i = 0; i < l.size(); ++i) p[i] = l[idx[i]];
            part[p] += 1.0;
        } while (std::next_permutation(idx.begin(), idx.end()));
        part = normalized(part);
        for (const auto& [k, a] : part) out[k] += amp * a;
    }
    return out;
}

inline Vec symmetrize(const IntList& l) { return symmetrize({{l, 1.0}}); }

// All index permutations p (as images of 1..n) with l[p[i]-1] == l[i].
inline std::vector<IntList> stabilizer(const IntList& l) {
    std::vector<IntList> out;
    IntList p(l.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<Value>(i + 1);
    do {
        bool fixes = true;
        for (std::size_t i = 0; i < l.size() && fixes; ++i) fixes = l[static_cast<std::size_t>(p[i] - 1)] == l[i];
        if (fixes) out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Run lengths at run starts (runs longer than one), by a left-to-right scan.
inline IntList duplicates(const IntList& l) {
    IntList out(l.size(), 0);
    std::size_t i = 0;
    while (i < l.size()) {
        std::size_t j = i;
        while (j < l.size() && l[j] == l[i]) ++j;
        if (j - i > 1) out[i] = static_cast<Value>(j - i);
        i = j;
    }
    return out;
}

inline IntList expand_occupations(const IntList& occ) {
    IntList out;
    for (std::size_t i = 0; i < occ.size(); ++i)
        for (Value k = 0; k < occ[i]; ++k) out.push_back(static_cast<Value>(i));
    return out;
}

inline IntList occupations_of(const IntList& list, std::size_t m) {
    IntList occ(m, 0);
    for (Value v : list) ++occ[static_cast<std::size_t>(v)];
    return occ;
}

// Every occupation vector of n particles in m modes.
inline std::vector<IntList> all_occupations(std::size_t n, std::size_t m) {
    std::vector<IntList> out;
    IntList cur(m, 0);
    auto rec = [&](auto&& self, std::size_t i, Value left) -> void {
        if (i + 1 == m) {
            cur[i] = left;
            out.push_back(cur);
            return;
        }
        for (Value k = 0; k <= left; ++k) {
            cur[i] = k;
            self(self, i + 1, left - k);
        }
    };
    if (m > 0) rec(rec, 0, static_cast<Value>(n));
    return out;
}

// Single-photon amplitude at detector j: exp(2 pi i j d sin(theta) / lambda) / sqrt(m).
inline cplx photon_amp(std::size_t m, double d, double lambda, double sin_theta, std::size_t j) {
    const double ph = 2.0 * std::numbers::pi * static_cast<double>(j) * d * sin_theta / lambda;
    return std::polar(1.0 / std::sqrt(static_cast<double>(m)), ph);
}

// Bosonic product state prod_i a^dag(u_i)|0>, expanded over all m^n detector
// assignments and collected per occupation vector.
inline Vec multiphoton(std::size_t m, double d, double lambda, const std::vector<double>& sines) {
    const std::size_t n = sines.size();
    Vec raw;
    std::vector<std::size_t> j(n, 0);
    while (true) {
        cplx a = 1.0;
        IntList occ(m, 0);
        for (std::size_t i = 0; i < n; ++i) {
            a *= photon_amp(m, d, lambda, sines[i], j[i]);
            ++occ[j[i]];
        }
        raw[occ] += a;
        std::size_t i = 0;
        while (i < n && ++j[i] == m) j[i++] = 0;
        if (i == n) break;
    }
    Vec out;
    for (auto& [occ, a] : raw) {
        double w = 1.0;
        for (Value k : occ) w *= static_cast<double>(fact(static_cast<std::size_t>(k)));
        out[occ] = a * std::sqrt(w);
    }
    return normalized(out);
}

// Dense DFT on every slot of a first-quantized state over [0, m)^n:
// |j> -> m^{-1/2} sum_k exp(-2 pi i j k / m) |k>.
inline Vec dft_all(const Vec& in, std::size_t m, std::size_t n) {
    Vec out;
    std::vector<std::size_t> k(n, 0);
    while (true) {
        cplx a = 0.0;
        for (const auto& [j, amp] : in) {
            double acc = 0;
            for (std::size_t s = 0; s < n; ++s) acc += static_cast<double>((static_cast<std::size_t>(j[s]) * k[s]) % m);
            a += amp * std::polar(1.0, -2.0 * std::numbers::pi * acc / static_cast<double>(m));
        }
        a /= std::pow(static_cast<double>(m), 0.5 * static_cast<double>(n));
        if (std::abs(a) > 1e-13) out[IntList(k.begin(), k.end())] = a;
        std::size_t s = 0;
        while (s < n && ++k[s] == m) k[s++] = 0;
        if (s == n) break;
    }
    return out;
}

// Probability that n uniform draws from [1, f] collide somewhere.
inline double repetition_probability(std::size_t n, std::uint64_t f) {
    double distinct = 1.0;
    for (std::size_t i = 0; i < n; ++i) distinct *= 1.0 - static_cast<double>(i) / static_cast<double>(f);
    return 1.0 - distinct;
}

inline IntList les_naive_fill(const IntList& s) {
    // Column j (from n down to 1) takes the s_j-th unused row from the top.
    const std::size_t n = s.size();
    std::vector<bool> used(n + 1, false);
    IntList row_of(n + 1, 0);
    for (std::size_t j = n; j >= 1; --j) {
        Value count = 0;
        for (std::size_t r = 1; r <= n; ++r) {
            if (used[r]) continue;
            if (++count == s[j - 1]) {
                used[r] = true;
                row_of[j] = static_cast<Value>(r);
                break;
            }
        }
    }
    // sigma(12..n) lists, for each position r, the column placed in row r.
    IntList image(n, 0);
    for (std::size_t j = 1; j <= n; ++j) image[static_cast<std::size_t>(row_of[j] - 1)] = static_cast<Value>(j);
    return image;
}

// Reads a state into a map keyed by the flat configuration of the given
// register range.
inline Vec to_map(const qsym::SparseState& s) {
    Vec out;
    for (std::size_t t = 0; t < s.size(); ++t) out[s.values(t)] = s.amplitude(t);
    return out;
}

// max |a - b| over the union of supports.
inline double distance(const Vec& a, const Vec& b) {
    double worst = 0;
    for (const auto& [k, x] : a) {
        const auto it = b.find(k);
        worst = std::max(worst, std::abs(x - (it == b.end() ? cplx{} : it->second)));
    }
    for (const auto& [k, y] : b)
        if (!a.count(k)) worst = std::max(worst, std::abs(y));
    return worst;
}

// |<a|b>|^2 for normalized maps.
inline double overlap(const Vec& a, const Vec& b) {
    cplx s = 0.0;
    for (const auto& [k, x] : a) {
        const auto it = b.find(k);
        if (it != b.end()) s += std::conj(x) * it->second;
    }
    return std::norm(s) / (norm2(a) * norm2(b));
}

// Random sorted list of length n with values in [1, top].
inline IntList random_nsil(std::mt19937_64& rng, std::size_t n, Value top) {
    std::uniform_int_distribution<Value> d(1, top);
    IntList l(n);
    for (auto& v : l) v = d(rng);
    std::sort(l.begin(), l.end());
    return l;
}

inline IntList random_sil(std::mt19937_64& rng, std::size_t n, Value top) {
    IntList pool(static_cast<std::size_t>(top));
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<Value>(i + 1);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(n);
    std::sort(pool.begin(), pool.end());
    return pool;
}

inline IntList random_perm(std::mt19937_64& rng, std::size_t n) {
    IntList p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Value>(i + 1);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

inline IntList random_les(std::mt19937_64& rng, std::size_t n) {
    IntList s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = std::uniform_int_distribution<Value>(1, static_cast<Value>(i + 1))(rng);
    return s;
}

inline cplx random_amp(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return {g(rng), g(rng)};
}

} // namespace oracle
