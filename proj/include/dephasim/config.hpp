#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dephasim/channel.hpp"
#include "dephasim/probes.hpp"
#include "dephasim/purification.hpp"

namespace dephasim {

enum class Command { State, Evolve, Wigner, Qfi, Sweep, PurifyCheck };
const char* command_name(Command c);
Command command_from_name(std::string_view name);  // ConfigError if unknown

enum class OutputFormat { Csv, Json };
const char* format_name(OutputFormat f);
OutputFormat format_from_name(std::string_view name);  // ConfigError if unknown

// Sweep axis over the target mean photon number.
struct SweepAxis {
    double min = 0.3;
    double max = 1.5;
    int points = 13;
};

// Phase-space grid request; r_max = 0 means derive the radius from the
// state's support at run time.
struct GridConfig {
    double r_max = 0.0;
    int n_radial = 256;
    int n_angular = 256;
};

// One fully validated run. Every field has a working default, so an empty
// JSON document (or none at all) is a valid configuration; command-line flags
// override file values.
struct RunConfig {
    Command command = Command::Qfi;
    ProbeSpec probe;
    double kappa_t = 0.5;
    Representation representation = Representation::ClosedForm;
    int kraus_terms = 0;  // 0 = derive from dim and kappa_t
    OptomechParams optomech{1.0, 1.0, 1.0, 1.0};
    GridConfig grid;
    SweepAxis sweep_axis;
    std::vector<ProbeFamily> sweep_families{ProbeFamily::SSKitten, ProbeFamily::SqCat,
                                            ProbeFamily::SS, ProbeFamily::CbPhS};
    double abs_lambda = 0.5;
    std::vector<ProbeSpec> wigner_probes;  // empty = default probe trio
    std::vector<double> wigner_kappa_ts{0.05, 0.1, 1.0};
    std::string out_path;  // empty = stdout
    OutputFormat format = OutputFormat::Csv;
    int dim = 0;  // 0 = per-probe automatic cutoff (sweeps use 64)
    int jobs = 1;
    bool strict = false;
};

// The three probes of the default phase-space grid: coherent alpha=2,
// squeezed vacuum r=0.8, cat alpha=2. The amplitudes are documented
// defaults, chosen so all three show visible structure before dephasing.
std::vector<ProbeSpec> default_wigner_probes();

// Parses and validates a JSON document. Unknown keys and out-of-range values
// are rejected with a ConfigError naming the offending field path.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);  // ConfigError on I/O failure

// Canonical single-line JSON for a probe: the family plus exactly the fields
// that family reads, fixed key order; alpha emitted as a plain number when
// real, as [re, im] otherwise.
std::string probe_param_json(const ProbeSpec& spec);

// Full-config canonical JSON (fixed key order) and its FNV-1a-64 digest in
// hex; the digest is stamped into every output header so emitted data can be
// traced back to the exact configuration.
std::string canonical_config_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

}  // namespace dephasim
