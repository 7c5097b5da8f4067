#include "qsym/layout.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace qsym {

unsigned element_width(Value bound) {
    if (bound <= 1) return 0;
    return static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(bound - 1)));
}

Layout::Layout(std::vector<RegisterSpec> registers) : regs_(std::move(registers)) {
    for (std::size_t i = 0; i < regs_.size(); ++i) {
        const auto& r = regs_[i];
        if (r.name.empty()) throw ValidationError("register name must not be empty");
        if (r.bound < 1) throw ValidationError("register '" + r.name + "' needs a positive bound");
        if (element_width(r.bound) > 63) throw ValidationError("register '" + r.name + "' bound too large");
        for (std::size_t j = 0; j < i; ++j)
            if (regs_[j].name == r.name) throw ValidationError("duplicate register name '" + r.name + "'");
    }
    std::size_t bit = 0;
    for (const auto& r : regs_) {
        offsets_.push_back(total_values_);
        const unsigned w = element_width(r.bound);
        for (std::size_t k = 0; k < r.arity; ++k) {
            widths_.push_back(w);
            bitpos_.push_back(static_cast<std::uint32_t>(bit));
            bounds_.push_back(r.bound);
            bit += w;
        }
        total_values_ += r.arity;
    }
    total_bits_ = bit;
    words_ = std::max<std::size_t>(1, (bit + 63) / 64);
}

bool Layout::contains(std::string_view name) const {
    return std::any_of(regs_.begin(), regs_.end(), [&](const RegisterSpec& r) { return r.name == name; });
}

std::size_t Layout::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < regs_.size(); ++i)
        if (regs_[i].name == name) return i;
    throw ValidationError("unknown register '" + std::string(name) + "'");
}

std::size_t Layout::register_qubits(std::string_view name) const {
    const auto& r = spec(name);
    return r.arity * element_width(r.bound);
}

Layout Layout::with(RegisterSpec extra) const {
    auto regs = regs_;
    regs.push_back(std::move(extra));
    return Layout(std::move(regs));
}

Layout Layout::without(std::string_view name) const {
    auto regs = regs_;
    regs.erase(regs.begin() + static_cast<std::ptrdiff_t>(index_of(name)));
    return Layout(std::move(regs));
}

bool Layout::in_range(std::span<const Value> flat) const {
    if (flat.size() != total_values_) return false;
    for (std::size_t i = 0; i < flat.size(); ++i)
        if (flat[i] < 0 || flat[i] >= bounds_[i]) return false;
    return true;
}

void Layout::pack(std::span<const Value> flat, std::uint64_t* key) const {
    if (!in_range(flat)) throw ValidationError("configuration out of register range: " + describe(flat));
    std::fill(key, key + words_, 0);
    for (std::size_t i = 0; i < total_values_; ++i) {
        const unsigned w = widths_[i];
        if (w == 0) continue;
        const auto v = static_cast<std::uint64_t>(flat[i]);
        const std::size_t pos = bitpos_[i];
        const std::size_t word = pos / 64;
        const unsigned avail = 64 - static_cast<unsigned>(pos % 64);
        if (w <= avail) {
            key[word] |= v << (avail - w);
        } else {
            const unsigned rest = w - avail;
            key[word] |= v >> rest;
            key[word + 1] |= v << (64 - rest);
        }
    }
}

void Layout::unpack(const std::uint64_t* key, std::span<Value> flat) const {
    for (std::size_t i = 0; i < total_values_; ++i) {
        const unsigned w = widths_[i];
        if (w == 0) {
            flat[i] = 0;
            continue;
        }
        const std::size_t pos = bitpos_[i];
        const std::size_t word = pos / 64;
        const unsigned avail = 64 - static_cast<unsigned>(pos % 64);
        const std::uint64_t mask = (std::uint64_t{1} << w) - 1;
        std::uint64_t v;
        if (w <= avail) {
            v = key[word] >> (avail - w);
        } else {
            const unsigned rest = w - avail;
            v = (key[word] << rest) | (key[word + 1] >> (64 - rest));
        }
        flat[i] = static_cast<Value>(v & mask);
    }
}

IntList Layout::flatten(const BasisConfig& config) const {
    if (config.size() != regs_.size())
        throw ValidationError("configuration has " + std::to_string(config.size()) + " registers, layout has " +
                              std::to_string(regs_.size()));
    IntList flat;
    flat.reserve(total_values_);
    for (std::size_t r = 0; r < regs_.size(); ++r) {
        if (config[r].size() != regs_[r].arity)
            throw ValidationError("register '" + regs_[r].name + "' expects " + std::to_string(regs_[r].arity) +
                                  " elements, got " + std::to_string(config[r].size()));
        flat.insert(flat.end(), config[r].begin(), config[r].end());
    }
    return flat;
}

BasisConfig Layout::split(std::span<const Value> flat) const {
    BasisConfig out(regs_.size());
    for (std::size_t r = 0; r < regs_.size(); ++r)
        out[r].assign(flat.begin() + static_cast<std::ptrdiff_t>(offsets_[r]),
                      flat.begin() + static_cast<std::ptrdiff_t>(offsets_[r] + regs_[r].arity));
    return out;
}

std::string Layout::describe(std::span<const Value> flat) const {
    std::ostringstream os;
    if (flat.size() != total_values_) {
        os << "<" << flat.size() << " values for a layout of " << total_values_ << ">";
        return os.str();
    }
    for (std::size_t r = 0; r < regs_.size(); ++r) {
        if (r) os << ' ';
        os << regs_[r].name << '=';
        IntList vals(flat.begin() + static_cast<std::ptrdiff_t>(offsets_[r]),
                     flat.begin() + static_cast<std::ptrdiff_t>(offsets_[r] + regs_[r].arity));
        os << to_string(vals);
    }
    return os.str();
}

} // namespace qsym
