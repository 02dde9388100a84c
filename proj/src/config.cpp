#include "dephasim/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dephasim {

using nlohmann::json;

const char* command_name(Command c) {
    switch (c) {
        case Command::State: return "state";
        case Command::Evolve: return "evolve";
        case Command::Wigner: return "wigner";
        case Command::Qfi: return "qfi";
        case Command::Sweep: return "sweep";
        case Command::PurifyCheck: return "purify-check";
    }
    return "?";
}

Command command_from_name(std::string_view name) {
    for (Command c : {Command::State, Command::Evolve, Command::Wigner, Command::Qfi,
                      Command::Sweep, Command::PurifyCheck})
        if (name == command_name(c)) return c;
    throw ConfigError("command: unknown value '" + std::string(name) + "'");
}

const char* format_name(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat format_from_name(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw ConfigError("output.format: expected 'csv' or 'json', got '" + std::string(name) + "'");
}

std::vector<ProbeSpec> default_wigner_probes() {
    ProbeSpec coh;
    coh.family = ProbeFamily::Coherent;
    coh.alpha = 2.0;
    ProbeSpec sq;
    sq.family = ProbeFamily::SqueezedVacuum;
    sq.r = 0.8;
    ProbeSpec cat;
    cat.family = ProbeFamily::Cat;
    cat.alpha = 2.0;
    return {coh, sq, cat};
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

void require_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
    }
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

cplx get_complex(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    fail(path, "expected a number or [re, im]");
}

ProbeFamily get_family(const json& j, const std::string& path) {
    const std::string name = get_string(j, path);
    try {
        return family_from_name(name);
    } catch (const DephasimError&) {
        fail(path, "unknown probe family '" + name + "'");
    }
}

ProbeSpec parse_probe(const json& j, const std::string& path, const ProbeSpec& base) {
    if (!j.is_object()) fail(path, "expected an object");
    require_keys(j, path, {"family", "alpha", "r", "gamma", "s", "q", "p", "fock_n"});
    ProbeSpec spec = base;
    if (j.contains("family")) spec.family = get_family(j["family"], path + ".family");
    if (j.contains("alpha")) spec.alpha = get_complex(j["alpha"], path + ".alpha");
    if (j.contains("r")) spec.r = get_number(j["r"], path + ".r");
    if (j.contains("gamma")) spec.gamma = get_number(j["gamma"], path + ".gamma");
    if (j.contains("s")) {
        spec.s = get_int(j["s"], path + ".s");
        if (spec.s < 0) fail(path + ".s", "must be >= 0");
    }
    if (j.contains("q")) spec.q = get_number(j["q"], path + ".q");
    if (j.contains("p")) spec.p = get_number(j["p"], path + ".p");
    if (j.contains("fock_n")) {
        spec.fock_n = get_int(j["fock_n"], path + ".fock_n");
        if (spec.fock_n < 0) fail(path + ".fock_n", "must be >= 0");
    }
    return spec;
}

// Shortest representation that parses back to the same double, so canonical
// JSON (and the config hash derived from it) is stable and human-shaped.
void append_number(std::string& out, double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    out += buf;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    require_keys(doc, "",
                 {"command", "probe", "channel", "optomech", "grid", "sweep", "qfi", "wigner",
                  "output", "dim", "jobs", "strict"});

    RunConfig cfg;
    if (doc.contains("command")) cfg.command = command_from_name(get_string(doc["command"], "command"));
    if (doc.contains("probe")) cfg.probe = parse_probe(doc["probe"], "probe", ProbeSpec{});

    if (doc.contains("channel")) {
        const json& ch = doc["channel"];
        if (!ch.is_object()) fail("channel", "expected an object");
        require_keys(ch, "channel", {"kappa_t", "representation", "kraus_terms"});
        if (ch.contains("kappa_t")) {
            cfg.kappa_t = get_number(ch["kappa_t"], "channel.kappa_t");
            if (cfg.kappa_t < 0.0) fail("channel.kappa_t", "must be >= 0");
        }
        if (ch.contains("representation")) {
            const std::string name = get_string(ch["representation"], "channel.representation");
            try {
                cfg.representation = representation_from_name(name);
            } catch (const DephasimError&) {
                fail("channel.representation", "unknown representation '" + name + "'");
            }
        }
        if (ch.contains("kraus_terms")) {
            cfg.kraus_terms = get_int(ch["kraus_terms"], "channel.kraus_terms");
            if (cfg.kraus_terms < 0) fail("channel.kraus_terms", "must be >= 0 (0 = automatic)");
        }
    }

    if (doc.contains("optomech")) {
        const json& om = doc["optomech"];
        if (!om.is_object()) fail("optomech", "expected an object");
        require_keys(om, "optomech", {"g", "omega_m", "omega_c", "t"});
        double g = cfg.optomech.g, omega_m = cfg.optomech.omega_m;
        double omega_c = cfg.optomech.omega_c, t = cfg.optomech.t;
        if (om.contains("g")) g = get_number(om["g"], "optomech.g");
        if (om.contains("omega_m")) omega_m = get_number(om["omega_m"], "optomech.omega_m");
        if (om.contains("omega_c")) omega_c = get_number(om["omega_c"], "optomech.omega_c");
        if (om.contains("t")) t = get_number(om["t"], "optomech.t");
        if (!(omega_m > 0.0)) fail("optomech.omega_m", "must be > 0");
        if (!(t >= 0.0)) fail("optomech.t", "must be >= 0");
        cfg.optomech = OptomechParams(g, omega_m, omega_c, t);
    }

    if (doc.contains("grid")) {
        const json& gr = doc["grid"];
        if (!gr.is_object()) fail("grid", "expected an object");
        require_keys(gr, "grid", {"r_max", "n_radial", "n_angular"});
        if (gr.contains("r_max")) {
            cfg.grid.r_max = get_number(gr["r_max"], "grid.r_max");
            if (cfg.grid.r_max < 0.0) fail("grid.r_max", "must be >= 0 (0 = automatic)");
        }
        if (gr.contains("n_radial")) {
            cfg.grid.n_radial = get_int(gr["n_radial"], "grid.n_radial");
            if (cfg.grid.n_radial < 2) fail("grid.n_radial", "must be >= 2");
        }
        if (gr.contains("n_angular")) {
            cfg.grid.n_angular = get_int(gr["n_angular"], "grid.n_angular");
            if (cfg.grid.n_angular < 64 || cfg.grid.n_angular % 2 != 0)
                fail("grid.n_angular", "must be even and >= 64");
        }
    }

    if (doc.contains("sweep")) {
        const json& sw = doc["sweep"];
        if (!sw.is_object()) fail("sweep", "expected an object");
        require_keys(sw, "sweep", {"min", "max", "points", "families", "abs_lambda"});
        if (sw.contains("min")) cfg.sweep_axis.min = get_number(sw["min"], "sweep.min");
        if (sw.contains("max")) cfg.sweep_axis.max = get_number(sw["max"], "sweep.max");
        if (sw.contains("points")) cfg.sweep_axis.points = get_int(sw["points"], "sweep.points");
        if (!(cfg.sweep_axis.min > 0.0)) fail("sweep.min", "target mean photon number must be > 0");
        if (!(cfg.sweep_axis.max >= cfg.sweep_axis.min)) fail("sweep.max", "must be >= sweep.min");
        if (cfg.sweep_axis.points < 1) fail("sweep.points", "must be >= 1");
        if (sw.contains("families")) {
            if (!sw["families"].is_array() || sw["families"].empty())
                fail("sweep.families", "expected a non-empty array of family names");
            cfg.sweep_families.clear();
            for (std::size_t i = 0; i < sw["families"].size(); ++i)
                cfg.sweep_families.push_back(get_family(
                    sw["families"][i], "sweep.families[" + std::to_string(i) + "]"));
        }
        if (sw.contains("abs_lambda")) {
            cfg.abs_lambda = get_number(sw["abs_lambda"], "sweep.abs_lambda");
            if (!(cfg.abs_lambda > 0.0)) fail("sweep.abs_lambda", "must be > 0");
        }
    }

    if (doc.contains("qfi")) {
        const json& q = doc["qfi"];
        if (!q.is_object()) fail("qfi", "expected an object");
        require_keys(q, "qfi", {"abs_lambda"});
        if (q.contains("abs_lambda")) {
            cfg.abs_lambda = get_number(q["abs_lambda"], "qfi.abs_lambda");
            if (!(cfg.abs_lambda > 0.0)) fail("qfi.abs_lambda", "must be > 0");
        }
    }

    if (doc.contains("wigner")) {
        const json& w = doc["wigner"];
        if (!w.is_object()) fail("wigner", "expected an object");
        require_keys(w, "wigner", {"probes", "kappa_ts"});
        if (w.contains("probes")) {
            if (!w["probes"].is_array() || w["probes"].empty())
                fail("wigner.probes", "expected a non-empty array of probe objects");
            cfg.wigner_probes.clear();
            for (std::size_t i = 0; i < w["probes"].size(); ++i)
                cfg.wigner_probes.push_back(parse_probe(
                    w["probes"][i], "wigner.probes[" + std::to_string(i) + "]", ProbeSpec{}));
        }
        if (w.contains("kappa_ts")) {
            if (!w["kappa_ts"].is_array() || w["kappa_ts"].empty())
                fail("wigner.kappa_ts", "expected a non-empty array of numbers");
            cfg.wigner_kappa_ts.clear();
            for (std::size_t i = 0; i < w["kappa_ts"].size(); ++i) {
                const std::string p = "wigner.kappa_ts[" + std::to_string(i) + "]";
                const double kt = get_number(w["kappa_ts"][i], p);
                if (kt < 0.0) fail(p, "must be >= 0");
                cfg.wigner_kappa_ts.push_back(kt);
            }
        }
    }

    if (doc.contains("output")) {
        const json& out = doc["output"];
        if (!out.is_object()) fail("output", "expected an object");
        require_keys(out, "output", {"path", "format"});
        if (out.contains("path")) cfg.out_path = get_string(out["path"], "output.path");
        if (out.contains("format"))
            cfg.format = format_from_name(get_string(out["format"], "output.format"));
    }

    if (doc.contains("dim")) {
        cfg.dim = get_int(doc["dim"], "dim");
        if (cfg.dim != 0 && (cfg.dim < 2 || cfg.dim > 4096))
            fail("dim", "must be 0 (automatic) or in [2, 4096]");
    }
    if (doc.contains("jobs")) {
        cfg.jobs = get_int(doc["jobs"], "jobs");
        if (cfg.jobs < 1 || cfg.jobs > 256) fail("jobs", "must be in [1, 256]");
    }
    if (doc.contains("strict")) cfg.strict = get_bool(doc["strict"], "strict");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string probe_param_json(const ProbeSpec& spec) {
    std::string out = "{\"family\":\"";
    out += family_name(spec.family);
    out += '"';
    auto num = [&](const char* key, double v) {
        out += ",\"";
        out += key;
        out += "\":";
        append_number(out, v);
    };
    auto alpha = [&] {
        out += ",\"alpha\":";
        if (spec.alpha.imag() == 0.0) {
            append_number(out, spec.alpha.real());
        } else {
            out += '[';
            append_number(out, spec.alpha.real());
            out += ',';
            append_number(out, spec.alpha.imag());
            out += ']';
        }
    };
    switch (spec.family) {
        case ProbeFamily::Coherent:
        case ProbeFamily::Cat:
        case ProbeFamily::Kitten: alpha(); break;
        case ProbeFamily::SqCat:
        case ProbeFamily::SqCS:
        case ProbeFamily::SSKitten:
            alpha();
            num("r", spec.r);
            break;
        case ProbeFamily::SS:
        case ProbeFamily::SqueezedVacuum: num("r", spec.r); break;
        case ProbeFamily::CbPhS: num("gamma", spec.gamma); break;
        case ProbeFamily::ModSSW:
            out += ",\"s\":" + std::to_string(spec.s);
            num("q", spec.q);
            num("p", spec.p);
            break;
        case ProbeFamily::Fock: out += ",\"fock_n\":" + std::to_string(spec.fock_n); break;
    }
    out += '}';
    return out;
}

std::string canonical_config_json(const RunConfig& cfg) {
    std::string out = "{\"command\":\"";
    out += command_name(cfg.command);
    out += "\",\"probe\":";
    out += probe_param_json(cfg.probe);
    auto num = [&](const char* key, double v) {
        out += ",\"";
        out += key;
        out += "\":";
        append_number(out, v);
    };
    num("kappa_t", cfg.kappa_t);
    out += ",\"representation\":\"";
    out += representation_name(cfg.representation);
    out += "\",\"kraus_terms\":" + std::to_string(cfg.kraus_terms);
    out += ",\"optomech\":{\"g\":";
    append_number(out, cfg.optomech.g);
    out += ",\"omega_m\":";
    append_number(out, cfg.optomech.omega_m);
    out += ",\"omega_c\":";
    append_number(out, cfg.optomech.omega_c);
    out += ",\"t\":";
    append_number(out, cfg.optomech.t);
    out += "},\"grid\":{\"r_max\":";
    append_number(out, cfg.grid.r_max);
    out += ",\"n_radial\":" + std::to_string(cfg.grid.n_radial);
    out += ",\"n_angular\":" + std::to_string(cfg.grid.n_angular);
    out += "},\"sweep\":{\"min\":";
    append_number(out, cfg.sweep_axis.min);
    out += ",\"max\":";
    append_number(out, cfg.sweep_axis.max);
    out += ",\"points\":" + std::to_string(cfg.sweep_axis.points);
    out += ",\"families\":[";
    for (std::size_t i = 0; i < cfg.sweep_families.size(); ++i) {
        if (i) out += ',';
        out += '"';
        out += family_name(cfg.sweep_families[i]);
        out += '"';
    }
    out += "]}";
    num("abs_lambda", cfg.abs_lambda);
    out += ",\"wigner\":{\"probes\":[";
    const std::vector<ProbeSpec>& wp =
        cfg.wigner_probes.empty() ? default_wigner_probes() : cfg.wigner_probes;
    for (std::size_t i = 0; i < wp.size(); ++i) {
        if (i) out += ',';
        out += probe_param_json(wp[i]);
    }
    out += "],\"kappa_ts\":[";
    for (std::size_t i = 0; i < cfg.wigner_kappa_ts.size(); ++i) {
        if (i) out += ',';
        append_number(out, cfg.wigner_kappa_ts[i]);
    }
    out += "]},\"format\":\"";
    out += format_name(cfg.format);
    out += "\",\"dim\":" + std::to_string(cfg.dim);
    out += ",\"jobs\":" + std::to_string(cfg.jobs);
    out += ",\"strict\":";
    out += cfg.strict ? "true" : "false";
    out += '}';
    return out;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string canon = canonical_config_json(cfg);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace dephasim
