#include "qsym/json_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace qsym {

json state_to_json(const SparseState& state) {
    json layout = json::array();
    for (const auto& r : state.layout().registers())
        layout.push_back({{"name", r.name}, {"arity", r.arity}, {"bound", r.bound}});
    json terms = json::array();
    for (std::size_t t = 0; t < state.size(); ++t) {
        const Amplitude a = state.amplitude(t);
        terms.push_back({{"basis", state.config(t)}, {"re", a.real()}, {"im", a.imag()}});
    }
    return {{"layout", layout}, {"terms", terms}};
}

SparseState state_from_json(const json& j) {
    try {
        std::vector<RegisterSpec> regs;
        for (const auto& r : j.at("layout"))
            regs.push_back({r.at("name").get<std::string>(), r.at("arity").get<std::size_t>(), r.at("bound").get<Value>()});
        Layout layout(regs);
        std::vector<std::pair<BasisConfig, Amplitude>> terms;
        for (const auto& t : j.at("terms")) {
            const auto basis = t.at("basis").get<BasisConfig>();
            if (basis.size() != regs.size()) throw ValidationError("term basis does not match the layout");
            terms.push_back({basis, {t.at("re").get<double>(), t.value("im", 0.0)}});
        }
        return SparseState::from_terms(layout, terms);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed state JSON: ") + e.what());
    }
}

json depth_to_json(const DepthReport& d) {
    return {{"comparator_layers", d.comparator_layers},
            {"elementary_layers", d.elementary_layers},
            {"ancilla_qubits", d.ancilla_qubits}};
}

json network_to_json(const SortingNetwork& net) {
    json layers = json::array();
    for (const auto& layer : net.layers()) {
        json l = json::array();
        for (const auto& c : layer) l.push_back({c.i, c.j});
        layers.push_back(l);
    }
    return {{"width", net.width()}, {"depth", net.depth()}, {"comparators", net.comparator_count()}, {"layers", layers}};
}

json list_to_json(const IntList& l) { return json(l); }

IntList parse_list(const std::string& text) {
    IntList out;
    const bool separated = text.find_first_of(", ") != std::string::npos;
    if (!separated) {
        for (char c : text) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ValidationError("cannot parse list '" + text + "'");
            out.push_back(c - '0');
        }
        return out;
    }
    std::string token;
    std::istringstream in(text);
    auto flush = [&] {
        if (token.empty()) return;
        std::size_t used = 0;
        Value v = 0;
        try {
            v = std::stoll(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) throw ValidationError("cannot parse list entry '" + token + "'");
        out.push_back(v);
        token.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ' ')
            flush();
        else
            token.push_back(c);
    }
    flush();
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << text;
}

} // namespace qsym
