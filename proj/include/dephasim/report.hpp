#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dephasim/config.hpp"
#include "dephasim/phase_space.hpp"
#include "dephasim/probes.hpp"

namespace dephasim {

// Every number in emitted data goes through this one formatter (%.12g), which
// is what makes rerun outputs byte-comparable.
std::string format_g(double v);

std::uint64_t fnv1a64(std::string_view s);

using MetaExtras = std::vector<std::pair<std::string, std::string>>;

// The comment block every CSV starts with: schema tag, config hash, command,
// dims, tolerance settings and the convention notes consumers need to
// interpret the numbers. `extra` rows append after the fixed ones.
std::string csv_meta_header(const RunConfig& cfg, const MetaExtras& extra);

// RFC-4180 quoting, applied only when the field needs it.
std::string csv_quote(std::string_view field);

struct QfiRow {
    std::string probe_family;
    std::string param_json;
    PhotonStats stats{};
    double abs_lambda = 0.0;
    double qfi_sld = 0.0;
    double qfi_bures = 0.0;
    double purified_bound = 0.0;
    std::string error;  // empty = clean row; numeric fields are NaN otherwise
};

// The information-sweep schema; with_error appends the per-point error column
// sweeps carry.
std::string qfi_csv(const RunConfig& cfg, const std::vector<QfiRow>& rows, bool with_error,
                    const MetaExtras& extra);

// Field dump as abs_beta,theta,w rows in row-major grid order.
std::string wigner_field_csv(const RunConfig& cfg, const WignerField& field,
                             const MetaExtras& extra);

// Dense layout for plotting tools: one ASCII header line
//   dephasim-wigner-bin v1 <n_radial> <n_angular> <r_max>
// followed by n_radial * n_angular row-major little-endian 64-bit floats.
std::string wigner_field_binary(const WignerField& field);

// Single-object JSON document { "meta": ..., "data": ... } with 2-space
// indentation and a trailing newline. `data_json` must already be valid JSON.
std::string json_report(const RunConfig& cfg, const MetaExtras& extra,
                        const std::string& data_json);

// Shared meta fields (csv header and json meta carry the same content).
MetaExtras base_meta(const RunConfig& cfg);

void write_file(const std::string& path, std::string_view bytes);  // ConfigError on failure

}  // namespace dephasim
