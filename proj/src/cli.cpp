#include "qsym/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qsym/convert.hpp"
#include "qsym/json_io.hpp"
#include "qsym/les.hpp"
#include "qsym/symmetrize.hpp"
#include "qsym/telescope.hpp"

namespace qsym {

namespace {

struct Globals {
    bool quiet = false;
    std::string manifest_path;
    std::string output_path;
    std::optional<std::uint64_t> seed;
};

std::uint64_t resolve_seed(const Globals& g) {
    if (g.seed) return *g.seed;
    if (const char* env = std::getenv("QSYM_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw ValidationError("QSYM_SEED must be a non-negative integer");
    }
    return 1;
}

bool is_file(const std::string& s) {
    std::error_code ec;
    return std::filesystem::is_regular_file(s, ec);
}

SparseState load_state(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ValidationError("cannot parse '" + path + "': " + e.what());
    }
    return state_from_json(j);
}

NetworkKind network_from(const std::string& s) { return parse_network_kind(s); }

json distribution_json(const std::map<IntList, double>& dist) {
    json out = json::array();
    for (const auto& [k, p] : dist)
        if (p > 1e-12) out.push_back({{"outcome", k}, {"probability", p}});
    return out;
}

// Result of one subcommand: the JSON document and its depth report.
struct Outcome {
    json result;
    DepthReport depth;
    std::vector<std::string> outputs;
};

Outcome run_symmetrize(const std::string& input, const std::string& mode, const std::string& network,
                       const std::string& resource, double a, std::uint64_t f, bool postselect, bool uncompressed,
                       bool measure, std::uint64_t seed) {
    SymmetrizeOptions opt;
    opt.network = network_from(network);
    if (resource == "berry")
        opt.resource = ResourceKind::berry;
    else if (resource != "exact")
        throw ValidationError("unknown resource '" + resource + "' (exact, berry)");
    BerryConfig berry;
    berry.a = a;
    berry.f_n = f;
    berry.postselect = postselect;
    berry.compress = !uncompressed;
    opt.berry = berry;
    opt.berry.postselect = true;

    const bool from_file = is_file(input);
    const SparseState in = from_file ? load_state(input) : list_state(parse_list(input));
    std::string m = mode.empty() ? (from_file ? "superposed" : "single") : mode;
    Outcome o;
    json& r = o.result;
    r["command"] = "symmetrize";
    r["mode"] = m;
    r["network"] = network_kind_name(opt.network);
    SparseState out;
    if (m == "single") {
        if (from_file) throw ValidationError("single mode takes a list, not a state file");
        const IntList l = parse_list(input);
        auto res = nsil_symmetrize_single(l, opt);
        out = res.state;
        o.depth = res.depth;
        r["input"] = l;
        r["entropy"] = res.entropy;
        r["resource_success_probability"] = res.resource_success;
        r["fidelity"] = fidelity(out, reference_symmetrization(list_state(l)));
    } else if (m == "superposed") {
        auto res = nsil_symmetrize_superposed(in, opt);
        out = res.state;
        o.depth = res.depth;
        r["clean_mass"] = res.clean_mass;
        r["fidelity"] = fidelity(out, reference_symmetrization(in));
    } else if (m == "sil-exact") {
        out = exact_sil_symmetrize(in, opt, &o.depth);
        r["fidelity"] = fidelity(out, reference_symmetrization(in));
    } else if (m == "sil-berry") {
        if (measure && !postselect) berry.seed = seed;
        auto res = berry_sil_symmetrize(in, berry, opt.network, &o.depth);
        out = res.state;
        r["f_n"] = res.f_n;
        r["success_probability"] = res.success_probability;
        r["repetitive_probability"] = res.repetitive_probability;
        r["fidelity_bound"] = res.fidelity_bound;
        if (res.measured) r["measured_random"] = *res.measured;
        const SparseState ref = reference_symmetrization(in);
        r["fidelity"] = out.layout() == ref.layout() ? fidelity(out, ref) : reduced_fidelity(out, {reg::data}, ref);
    } else {
        throw ValidationError("unknown mode '" + m + "' (single, superposed, sil-exact, sil-berry)");
    }
    r["terms"] = out.size();
    r["depth"] = depth_to_json(o.depth);
    r["state"] = state_to_json(out);
    return o;
}

Outcome run_dicke(std::size_t n, std::optional<std::size_t> k, const std::string& weights, const std::string& network) {
    SymmetrizeOptions opt;
    opt.network = network_from(network);
    Outcome o;
    json& r = o.result;
    r["command"] = "dicke";
    r["n"] = n;
    SparseState out, ref;
    if (!weights.empty()) {
        std::map<std::size_t, Amplitude> w;
        double norm = 0.0;
        std::stringstream ss(weights);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw ValidationError("weights are written as k:w,k:w");
            try {
                const auto kk = static_cast<std::size_t>(std::stoul(item.substr(0, colon)));
                const double v = std::stod(item.substr(colon + 1));
                w[kk] += v;
                norm += v * v;
            } catch (const std::logic_error&) {
                throw ValidationError("cannot parse weight '" + item + "'");
            }
        }
        if (!(norm > 0)) throw ValidationError("weights must not all be zero");
        std::vector<std::pair<IntList, Amplitude>> terms;
        for (auto& [kk, v] : w) {
            v /= std::sqrt(norm);
            if (kk > n) throw ValidationError("Dicke weight k=" + std::to_string(kk) + " exceeds n");
            IntList l(n, 0);
            std::fill(l.end() - static_cast<std::ptrdiff_t>(kk), l.end(), 1);
            terms.push_back({l, v});
        }
        out = dicke_superposition(n, w, opt, &o.depth);
        ref = reference_symmetrization(list_superposition(terms, 2));
        json jw = json::object();
        for (const auto& [kk, v] : w) jw[std::to_string(kk)] = v.real();
        r["weights"] = jw;
    } else {
        if (!k) throw ValidationError("dicke needs k or --weights");
        out = dicke(n, *k, opt, &o.depth);
        IntList l(n, 0);
        std::fill(l.end() - static_cast<std::ptrdiff_t>(*k), l.end(), 1);
        ref = reference_symmetrization(list_state(l, 2));
        r["k"] = *k;
    }
    r["terms"] = out.size();
    r["fidelity"] = fidelity(out, ref);
    r["depth"] = depth_to_json(o.depth);
    r["state"] = state_to_json(out);
    return o;
}

json stages_json(const ConversionTrace& trace) {
    json out = json::array();
    for (const auto& s : trace.stages) out.push_back({{"stage", s.name}, {"rule", s.rule}, {"entries", s.entries}});
    return out;
}

Outcome run_convert(const std::string& input, bool inverse, std::optional<std::size_t> modes, bool with_state,
                    bool with_stages, const std::string& network) {
    SymmetrizeOptions opt;
    opt.network = network_from(network);
    Outcome o;
    json& r = o.result;
    r["command"] = "convert";
    r["direction"] = inverse ? "first_to_second" : "second_to_first";
    if (is_file(input)) {
        const SparseState in = load_state(input);
        SparseState out;
        if (inverse) {
            if (!modes) throw ValidationError("--modes is required to convert a state back");
            out = first_to_second(in, *modes, opt, &o.depth);
        } else {
            out = second_to_first(in, opt, &o.depth);
        }
        r["depth"] = depth_to_json(o.depth);
        r["state"] = state_to_json(out);
        return o;
    }
    const IntList list = parse_list(input);
    ConversionTrace trace;
    if (inverse) {
        Value top = 0;
        for (Value v : list) top = std::max(top, v + 1);
        const std::size_t m = modes ? *modes : static_cast<std::size_t>(top);
        const IntList occ = nsil_to_occ(list, m, &o.depth, &trace, opt.network);
        r["nsil"] = list;
        r["occupations"] = occ;
    } else {
        const IntList nsil = occ_to_nsil(list, &o.depth, &trace, opt.network);
        r["occupations"] = list;
        r["nsil"] = nsil;
        if (with_state) {
            const SparseState out = second_to_first(occupation_state({{list, 1.0}}), opt, &o.depth);
            r["fidelity"] = fidelity(out, reference_symmetrization(list_state(nsil, out.layout().spec(reg::data).bound)));
            r["state"] = state_to_json(out);
        }
    }
    if (with_stages) r["stages"] = stages_json(trace);
    r["depth"] = depth_to_json(o.depth);
    return o;
}

Outcome run_les(const std::string& input, bool inverse) {
    Outcome o;
    json& r = o.result;
    r["command"] = "les";
    const IntList seq = parse_list(input);
    if (inverse) {
        const Permutation p(seq);
        r["permutation"] = seq;
        r["les"] = perm_to_les(p);
    } else {
        const Permutation p = les_to_perm_parallel(seq, &o.depth);
        if (p != les_to_perm_naive(seq)) throw InvariantError("parallel and direct LES conversions disagree");
        r["les"] = seq;
        r["permutation"] = p.image();
    }
    r["depth"] = depth_to_json(o.depth);
    return o;
}

Outcome run_telescope(std::size_t m, double d, double lambda, Value v, const std::string& photons,
                      const std::string& grid, std::uint64_t seed, const std::string& csv) {
    ArrayConfig cfg{m, d, lambda, v};
    PhotonAngles angles;
    if (!grid.empty() && !photons.empty()) throw ValidationError("give either --grid or --photons, not both");
    if (!grid.empty()) {
        angles = PhotonAngles::from_bins(parse_list(grid));
    } else if (!photons.empty()) {
        std::vector<double> th;
        std::stringstream ss(photons);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                th.push_back(std::stod(item));
            } catch (const std::logic_error&) {
                throw ValidationError("cannot parse angle '" + item + "'");
            }
        }
        angles = PhotonAngles::from_thetas(th);
    } else {
        angles = PhotonAngles::from_bins({});
    }
    auto res = image_pipeline(cfg, angles, seed);
    Outcome o;
    o.depth = res.depth;
    json& r = o.result;
    r["command"] = "telescope";
    r["detectors"] = m;
    r["photons"] = angles.size();
    if (angles.grid) r["grid"] = angles.bins;
    r["multisets"] = distribution_json(res.multisets);
    r["ordered"] = distribution_json(res.ordered);
    r["recovered"] = res.recovered;
    r["sample"] = res.sample;
    r["depth"] = depth_to_json(res.depth);
    if (!csv.empty()) {
        std::ostringstream s;
        s << "outcome,probability\n";
        for (const auto& [k, p] : res.ordered) {
            std::string key;
            for (std::size_t i = 0; i < k.size(); ++i) key += (i ? " " : "") + std::to_string(k[i]);
            s << key << ',' << json(p).dump() << '\n';
        }
        write_text_file(csv, s.str());
        o.outputs.push_back(csv);
    }
    return o;
}

json parameters_of(const CLI::App* sub) {
    json p = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_name() == "--help" || opt->count() == 0) continue;
        const auto& res = opt->results();
        std::string name = opt->get_name();
        if (res.size() == 1)
            p[name] = res.front();
        else
            p[name] = res;
    }
    return p;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sorting-network symmetrization of quantum register states", "qsym"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_flag("-q,--quiet", g.quiet, "Do not echo the run manifest");
    app.add_option("--manifest", g.manifest_path, "Write the run manifest to this file");
    app.add_option("-o,--output", g.output_path, "Write the result JSON here instead of stdout");
    app.add_option("--seed", g.seed, "Seed for measurements (default: QSYM_SEED or 1)");

    std::string sym_input, sym_mode, network = "bitonic", resource = "exact";
    double a = 3.0;
    std::uint64_t f = 0;
    bool postselect = false, uncompressed = false, measure = false;
    auto* sym = app.add_subcommand("symmetrize", "Symmetrize a list or a state file");
    sym->add_option("input", sym_input, "List such as 122 or 1,2,2, or a state JSON file")->required();
    sym->add_option("--mode", sym_mode, "single, superposed, sil-exact or sil-berry");
    sym->add_option("--network", network, "bitonic or bubble");
    sym->add_option("--resource", resource, "Resource state for single mode: exact or berry");
    sym->add_option("--a", a, "Berry padding exponent");
    sym->add_option("--f", f, "Berry padding range (overrides --a)");
    sym->add_flag("--postselect", postselect, "Keep only the distinct-padding branch");
    sym->add_flag("--uncompressed", uncompressed, "Store raw padding values");
    sym->add_flag("--measure", measure, "Measure the padding register (uses the seed)");

    std::size_t dn = 0;
    std::optional<std::size_t> dk;
    std::string weights;
    auto* dk_cmd = app.add_subcommand("dicke", "Prepare a Dicke state or a weighted sum of them");
    dk_cmd->add_option("n", dn, "Number of qubits")->required();
    dk_cmd->add_option("k", dk, "Hamming weight");
    dk_cmd->add_option("--weights", weights, "k:w,k:w (normalized by the tool)");
    dk_cmd->add_option("--network", network, "bitonic or bubble");

    std::string conv_input;
    bool inverse = false, with_state = false, with_stages = false;
    std::optional<std::size_t> modes;
    auto* conv = app.add_subcommand("convert", "Occupation numbers <-> sorted mode list");
    conv->add_option("input", conv_input, "Occupations such as 1,2,1, a mode list, or a state file")->required();
    conv->add_flag("--inverse", inverse, "Mode list (or symmetric state) back to occupations");
    conv->add_option("--modes", modes, "Number of modes for --inverse");
    conv->add_flag("--state", with_state, "Also emit the symmetrized first-quantized state");
    conv->add_flag("--stages", with_stages, "Emit every intermediate stage");
    conv->add_option("--network", network, "bitonic or bubble");

    std::string les_input;
    bool les_inverse = false;
    auto* les = app.add_subcommand("les", "Lower exceeding sequence <-> permutation");
    les->add_option("input", les_input, "Sequence such as 121153")->required();
    les->add_flag("--inverse", les_inverse, "Permutation to sequence");

    std::size_t det = 4;
    double spacing = 1.0, wavelength = 1.0;
    Value offset = 0;
    std::string photons, grid, csv;
    auto* tel = app.add_subcommand("telescope", "Multi-photon interferometric imaging pipeline");
    tel->add_option("--detectors", det, "Number of detectors (power of two)");
    tel->add_option("--spacing", spacing, "Detector spacing d");
    tel->add_option("--wavelength", wavelength, "Wavelength lambda");
    tel->add_option("--offset", offset, "Field-of-view offset v");
    tel->add_option("--photons", photons, "Photon angles in radians, comma separated");
    tel->add_option("--grid", grid, "Photon grid bins k, e.g. 1,3");
    tel->add_option("--csv", csv, "Write per-outcome probabilities as CSV");

    const auto started = std::chrono::steady_clock::now();
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        const std::uint64_t seed = resolve_seed(g);
        Outcome o;
        const CLI::App* used = nullptr;
        if (sym->parsed()) {
            used = sym;
            o = run_symmetrize(sym_input, sym_mode, network, resource, a, f, postselect, uncompressed, measure, seed);
        } else if (dk_cmd->parsed()) {
            used = dk_cmd;
            o = run_dicke(dn, dk, weights, network);
        } else if (conv->parsed()) {
            used = conv;
            o = run_convert(conv_input, inverse, modes, with_state, with_stages, network);
        } else if (les->parsed()) {
            used = les;
            o = run_les(les_input, les_inverse);
        } else {
            used = tel;
            o = run_telescope(det, spacing, wavelength, offset, photons, grid, seed, csv);
        }
        const std::string text = o.result.dump(2) + "\n";
        if (g.output_path.empty()) {
            out << text;
        } else {
            write_text_file(g.output_path, text);
            o.outputs.push_back(g.output_path);
        }
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        json manifest = {{"command", used->get_name()},
                         {"parameters", parameters_of(used)},
                         {"seed", seed},
                         {"depth", depth_to_json(o.depth)},
                         {"timing_ms", ms},
                         {"outputs", o.outputs}};
        if (!g.manifest_path.empty()) write_text_file(g.manifest_path, manifest.dump(2) + "\n");
        if (!g.quiet) err << manifest.dump() << '\n';
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInvariant;
    }
}

} // namespace qsym
