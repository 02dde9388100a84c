#include "dephasim/report.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace dephasim {

std::string format_g(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

MetaExtras base_meta(const RunConfig& cfg) {
    MetaExtras meta;
    meta.emplace_back("config-hash", config_hash(cfg));
    meta.emplace_back("command", command_name(cfg.command));
    meta.emplace_back("tolerances",
                      std::string("hermiticity=1e-12 trace=1e-10 psd=1e-10 state-norm=1e-12 "
                                  "tail-mass=1e-8 strict=") +
                          (cfg.strict ? "1" : "0"));
    meta.emplace_back("conventions",
                      "x=(a+a^dag)/sqrt(2); S(z)=exp((conj(z) a^2 - z a^dag^2)/2); "
                      "F=Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)); kappa_t=|lambda|^2");
    return meta;
}

std::string csv_meta_header(const RunConfig& cfg, const MetaExtras& extra) {
    std::string out = "# dephasim-csv v1\n";
    for (const MetaExtras& block : {base_meta(cfg), extra})
        for (const auto& [key, value] : block) {
            out += "# ";
            out += key;
            out += ": ";
            out += value;
            out += '\n';
        }
    return out;
}

std::string csv_quote(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string qfi_csv(const RunConfig& cfg, const std::vector<QfiRow>& rows, bool with_error,
                    const MetaExtras& extra) {
    std::string out = csv_meta_header(cfg, extra);
    out +=
        "probe_family,param_json,mean_n,mean_n2,var_n,agarwal_q,abs_lambda,qfi_sld,qfi_bures,"
        "purified_bound";
    if (with_error) out += ",error";
    out += '\n';
    for (const QfiRow& row : rows) {
        out += row.probe_family;
        out += ',';
        out += csv_quote(row.param_json);
        for (double v : {row.stats.mean_n, row.stats.mean_n2, row.stats.var_n,
                         row.stats.agarwal_q, row.abs_lambda, row.qfi_sld, row.qfi_bures,
                         row.purified_bound}) {
            out += ',';
            out += format_g(v);
        }
        if (with_error) {
            out += ',';
            out += csv_quote(row.error);
        }
        out += '\n';
    }
    return out;
}

std::string wigner_field_csv(const RunConfig& cfg, const WignerField& field,
                             const MetaExtras& extra) {
    std::string out = csv_meta_header(cfg, extra);
    out += "abs_beta,theta,w\n";
    out.reserve(out.size() +
                static_cast<std::size_t>(field.grid.n_radial) * field.grid.n_angular * 24);
    for (int i = 0; i < field.grid.n_radial; ++i) {
        const std::string r = format_g(field.grid.radius(i));
        for (int j = 0; j < field.grid.n_angular; ++j) {
            out += r;
            out += ',';
            out += format_g(field.grid.angle(j));
            out += ',';
            out += format_g(field.value(i, j));
            out += '\n';
        }
    }
    return out;
}

std::string wigner_field_binary(const WignerField& field) {
    char head[96];
    std::snprintf(head, sizeof head, "dephasim-wigner-bin v1 %d %d %.17g\n",
                  field.grid.n_radial, field.grid.n_angular, field.grid.r_max);
    std::string out = head;
    const std::size_t base = out.size();
    out.resize(base + field.values.size() * sizeof(double));
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(out.data() + base, field.values.data(),
                    field.values.size() * sizeof(double));
    } else {
        for (std::size_t k = 0; k < field.values.size(); ++k) {
            std::uint64_t bits;
            std::memcpy(&bits, &field.values[k], 8);
            for (int b = 0; b < 8; ++b)
                out[base + 8 * k + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
        }
    }
    return out;
}

std::string json_report(const RunConfig& cfg, const MetaExtras& extra,
                        const std::string& data_json) {
    std::string out = "{\n  \"meta\": {\n    \"schema\": \"dephasim-report v1\"";
    for (const MetaExtras& block : {base_meta(cfg), extra}) {
        for (const auto& [key, value] : block) {
            out += ",\n    \"";
            out += key;
            out += "\": \"";
            for (char c : value) {
                if (c == '"' || c == '\\') out += '\\';
                out += c;
            }
            out += '"';
        }
    }
    out += "\n  },\n  \"data\": ";
    // Re-indent the data document two levels so the whole report stays
    // readable; the payload arrives dumped with 2-space indentation.
    for (char c : data_json) {
        out += c;
        if (c == '\n') out += "  ";
    }
    out += "\n}\n";
    return out;
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

}  // namespace dephasim
