#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>

#include "dephasim/config.hpp"
#include "dephasim/phase_space.hpp"
#include "dephasim/report.hpp"
#include "doctest.h"

using namespace dephasim;

TEST_CASE("config parse accepts a full document and fills every section") {
    const std::string doc = R"({
        "command": "sweep",
        "probe": {"family": "SqCat", "alpha": [1.0, 0.5], "r": 0.3},
        "channel": {"kappa_t": 0.25, "representation": "kraus", "kraus_terms": 9},
        "optomech": {"g": 0.3, "omega_m": 2.0, "omega_c": 1.5, "t": 0.7},
        "grid": {"r_max": 5.0, "n_radial": 128, "n_angular": 256},
        "sweep": {"min": 0.2, "max": 2.0, "points": 7,
                  "families": ["SS", "Fock"], "abs_lambda": 0.4},
        "wigner": {"probes": [{"family": "Coherent", "alpha": 2.0}],
                   "kappa_ts": [0.1, 1.0]},
        "output": {"path": "out.csv", "format": "json"},
        "dim": 48, "jobs": 3, "strict": true
    })";
    const RunConfig cfg = parse_config(doc);
    CHECK(cfg.command == Command::Sweep);
    CHECK(cfg.probe.family == ProbeFamily::SqCat);
    CHECK(cfg.probe.alpha == cplx(1.0, 0.5));
    CHECK(cfg.probe.r == 0.3);
    CHECK(cfg.kappa_t == 0.25);
    CHECK(cfg.representation == Representation::Kraus);
    CHECK(cfg.kraus_terms == 9);
    CHECK(cfg.optomech.g == 0.3);
    CHECK(cfg.optomech.omega_m == 2.0);
    CHECK(cfg.grid.n_radial == 128);
    CHECK(cfg.sweep_axis.points == 7);
    CHECK(cfg.sweep_families.size() == 2);
    CHECK(cfg.sweep_families[1] == ProbeFamily::Fock);
    CHECK(cfg.abs_lambda == 0.4);
    CHECK(cfg.wigner_probes.size() == 1);
    CHECK(cfg.wigner_kappa_ts == std::vector<double>{0.1, 1.0});
    CHECK(cfg.out_path == "out.csv");
    CHECK(cfg.format == OutputFormat::Json);
    CHECK(cfg.dim == 48);
    CHECK(cfg.jobs == 3);
    CHECK(cfg.strict);
}

TEST_CASE("config parse errors carry the field path") {
    auto message = [](const std::string& doc) {
        try {
            parse_config(doc);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("[1,2]") == "config root must be a JSON object");
    CHECK(message("{\"probe\": {\"family\": \"Dog\"}}") ==
          "probe.family: unknown probe family 'Dog'");
    CHECK(message("{\"channel\": {\"kappa_t\": -1}}") == "channel.kappa_t: must be >= 0");
    CHECK(message("{\"grid\": {\"n_angular\": 65}}") ==
          "grid.n_angular: must be even and >= 64");
    CHECK(message("{\"sweep\": {\"min\": 0}}") ==
          "sweep.min: target mean photon number must be > 0");
    CHECK(message("{\"sweep\": {\"min\": 2, \"max\": 1}}") == "sweep.max: must be >= sweep.min");
    CHECK(message("{\"output\": {\"format\": \"xml\"}}") ==
          "output.format: expected 'csv' or 'json', got 'xml'");
    CHECK(message("{\"bogus\": 1}") == "bogus: unknown key");
    CHECK(message("{\"channel\": {\"kapa_t\": 1}}") == "channel.kapa_t: unknown key");
    CHECK(message("{\"dim\": 1}") == "dim: must be 0 (automatic) or in [2, 4096]");
    CHECK(message("{\"jobs\": 0}") == "jobs: must be in [1, 256]");
    CHECK(message("not json").rfind("config is not valid JSON: ", 0) == 0);
    CHECK(message("{\"optomech\": {\"omega_m\": 0}}") == "optomech.omega_m: must be > 0");
    CHECK(message("{\"wigner\": {\"kappa_ts\": []}}") ==
          "wigner.kappa_ts: expected a non-empty array of numbers");
}

TEST_CASE("probe parameter JSON is canonical per family") {
    ProbeSpec spec;
    CHECK(probe_param_json(spec) == R"({"family":"Coherent","alpha":1})");
    spec.alpha = cplx(1.0, -0.25);
    CHECK(probe_param_json(spec) == R"({"family":"Coherent","alpha":[1,-0.25]})");
    spec.family = ProbeFamily::SS;
    spec.r = 0.5;
    CHECK(probe_param_json(spec) == R"({"family":"SS","r":0.5})");
    spec.family = ProbeFamily::SSKitten;
    spec.alpha = 0.8;
    CHECK(probe_param_json(spec) == R"({"family":"SSKitten","alpha":0.8,"r":0.5})");
    spec.family = ProbeFamily::CbPhS;
    spec.gamma = 0.2;
    CHECK(probe_param_json(spec) == R"({"family":"CbPhS","gamma":0.2})");
    spec.family = ProbeFamily::ModSSW;
    spec.s = 2;
    spec.q = 3;
    spec.p = 1;
    CHECK(probe_param_json(spec) == R"({"family":"ModSSW","s":2,"q":3,"p":1})");
    spec.family = ProbeFamily::Fock;
    spec.fock_n = 4;
    CHECK(probe_param_json(spec) == R"({"family":"Fock","fock_n":4})");
}

TEST_CASE("round-trip through parse keeps the config hash stable") {
    const std::string doc =
        R"({"probe": {"family": "Cat", "alpha": 1.5}, "channel": {"kappa_t": 0.1}})";
    const RunConfig a = parse_config(doc);
    const RunConfig b = parse_config(doc);
    CHECK(config_hash(a) == config_hash(b));
    CHECK(canonical_config_json(a) == canonical_config_json(b));
    RunConfig c = a;
    c.kappa_t = 0.2;
    CHECK(config_hash(a) != config_hash(c));
    // Hash of the canonical form, not of the input text: whitespace immaterial.
    const RunConfig d = parse_config(
        "{\"probe\":{\"family\":\"Cat\",\"alpha\":1.5},\"channel\":{\"kappa_t\":0.1}}");
    CHECK(config_hash(a) == config_hash(d));
}

TEST_CASE("fnv1a64 matches the reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("format_g prints shortest-round-trip-at-12-digits values") {
    CHECK(format_g(1.0) == "1");
    CHECK(format_g(0.5) == "0.5");
    CHECK(format_g(-0.25) == "-0.25");
    CHECK(format_g(2.0 / 3.0) == "0.666666666667");
    CHECK(format_g(1e-300) == "1e-300");
    CHECK(format_g(std::nan("")) == "nan");
}

TEST_CASE("csv quoting follows RFC 4180") {
    CHECK(csv_quote("plain") == "plain");
    CHECK(csv_quote("a,b") == "\"a,b\"");
    CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_quote("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("qfi csv includes the version header and optional error column") {
    RunConfig cfg;
    QfiRow row;
    row.probe_family = "Coherent";
    row.param_json = R"({"family":"Coherent","alpha":1})";
    row.stats = {1.0, 2.0, 1.0, 1.0};
    row.abs_lambda = 0.5;
    row.qfi_sld = 2.5;
    row.qfi_bures = 2.5;
    row.purified_bound = 2.0;
    const std::string csv = qfi_csv(cfg, {row}, false, {});
    CHECK(csv.rfind("# dephasim-csv v1\n", 0) == 0);
    CHECK(csv.find("probe_family,param_json,mean_n,mean_n2,var_n,agarwal_q,"
                   "abs_lambda,qfi_sld,qfi_bures,purified_bound\n") != std::string::npos);
    CHECK(csv.find("Coherent,\"{\"\"family\"\":\"\"Coherent\"\",\"\"alpha\"\":1}\","
                   "1,2,1,1,0.5,2.5,2.5,2\n") != std::string::npos);
    row.error = "probe failed";
    const std::string with_err = qfi_csv(cfg, {row}, true, {});
    CHECK(with_err.find(",purified_bound,error\n") != std::string::npos);
    CHECK(with_err.find("2,probe failed\n") != std::string::npos);
}

TEST_CASE("wigner binary layout starts with the sized text header") {
    WignerField field{PhaseSpaceGrid(2.0, 2, 64), {}};
    field.values.assign(static_cast<std::size_t>(2 * 64), 0.25);
    const std::string bin = wigner_field_binary(field);
    const std::string header = "dephasim-wigner-bin v1 2 64 2\n";
    REQUIRE(bin.size() == header.size() + 128u * 8u);
    CHECK(bin.compare(0, header.size(), header) == 0);
    double first;
    std::memcpy(&first, bin.data() + header.size(), sizeof first);
    CHECK(first == 0.25);
}
