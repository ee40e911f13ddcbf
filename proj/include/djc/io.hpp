// Self-describing CSV traces, validation-report serialization, and the
// flat key = value config format used by the CLI.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "djc/engine.hpp"
#include "djc/entanglement.hpp"
#include "djc/models.hpp"

namespace djc {

inline constexpr std::string_view artifact_version = "0.1.0";

inline std::string format_double(double v, int precision = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*e", precision, v);
    return buf;
}

inline std::string_view to_string(HamiltonianTag tag) {
    switch (tag) {
        case HamiltonianTag::jc_hop: return "jc_hop";
        case HamiltonianTag::ising: return "ising";
        default: return "xy";
    }
}

inline std::string_view to_string(HamiltonianMode mode) {
    return mode == HamiltonianMode::operator_basis ? "operator" : "paper-matrix";
}

/// Trace CSV: '#'-prefixed header recording the full configuration, then
/// one fixed-precision row per grid point. Identical inputs produce
/// bit-identical files.
inline void write_trace_csv(std::ostream& os, const EntanglementTrace& trace,
                            int precision = 12) {
    const ModelParams& p = trace.params;
    os << "# djc trace v" << artifact_version << "\n";
    os << "# variant = " << to_string(trace.variant.tag)
       << ", mode = " << to_string(trace.variant.mode) << "\n";
    os << "# omega = " << format_double(p.omega, precision)
       << ", nu = " << format_double(p.nu, precision)
       << ", g = " << format_double(p.g, precision)
       << ", kappa = " << format_double(p.kappa, precision) << "\n";
    os << "# j_ising = " << format_double(p.j_ising, precision)
       << ", j_x = " << format_double(p.j_x, precision)
       << ", j_y = " << format_double(p.j_y, precision) << "\n";
    os << "# alpha = " << format_double(trace.alpha, precision) << "\n";
    os << "# fock_cutoff = " << trace.fock_cutoff << ", n_points = " << trace.tau.size()
       << ", tau_max = " << format_double(trace.tau.empty() ? 0.0 : trace.tau.back(), precision)
       << "\n";
    if (trace.convergence_checked)
        os << "# convergence_shift = " << format_double(trace.convergence_shift, precision)
           << (trace.converged() ? " (converged)" : " (NOT converged at this cutoff)") << "\n";
    os << "# columns: tau,concurrence_atoms,negativity_cavities,norm\n";
    for (std::size_t i = 0; i < trace.tau.size(); ++i) {
        os << format_double(trace.tau[i], precision) << ','
           << format_double(trace.concurrence_atoms[i], precision) << ','
           << format_double(trace.negativity_cavities[i], precision) << ','
           << format_double(trace.norm[i], precision) << "\n";
    }
}

/// Sweep summary CSV: one row per sweep point.
inline void write_sweep_summary_csv(std::ostream& os, SweepAxis axis,
                                    const std::vector<SweepResult>& results,
                                    int precision = 12) {
    os << "# djc sweep v" << artifact_version << "\n";
    const char* axis_name = axis == SweepAxis::kappa     ? "kappa"
                            : axis == SweepAxis::j_ising ? "j_ising"
                            : axis == SweepAxis::jx_jy   ? "jx_jy"
                                                         : "alpha";
    os << "# axis = " << axis_name << "\n";
    os << "# columns: value" << (axis == SweepAxis::jx_jy ? ",value2" : "")
       << ",total_dark_duration,min_concurrence,max_negativity,error\n";
    for (const SweepResult& r : results) {
        os << format_double(r.value.first, precision);
        if (axis == SweepAxis::jx_jy) os << ',' << format_double(r.value.second, precision);
        if (r.ok()) {
            double min_c = std::numeric_limits<double>::infinity();
            double max_n = 0.0;
            for (double c : r.trace.concurrence_atoms) min_c = std::min(min_c, c);
            for (double n : r.trace.negativity_cavities) max_n = std::max(max_n, n);
            os << ',' << format_double(total_dark_duration(r.dark), precision) << ','
               << format_double(min_c, precision) << ',' << format_double(max_n, precision)
               << ",\n";
        } else {
            os << ",,,," << r.error << "\n";
        }
    }
}

/// Machine-readable validation report, one key = value per line.
inline void write_validation_kv(std::ostream& os, const ValidationReport& r,
                                int precision = 12) {
    const auto kv = [&](std::string_view key, double v) {
        os << key << " = " << format_double(v, precision) << "\n";
    };
    os << "version = " << artifact_version << "\n";
    kv("omega", r.params.omega);
    kv("nu", r.params.nu);
    kv("g", r.params.g);
    kv("kappa", r.params.kappa);
    kv("alpha", r.alpha);
    os << "sample_times =";
    for (double t : r.sample_times) os << ' ' << format_double(t, precision);
    os << "\n";
    kv("spectrum_match", r.spectrum_match);
    kv("spectrum_match_operator", r.spectrum_match_operator);
    kv("mode_divergence", r.mode_divergence);
    for (std::size_t i = 0; i < 9; ++i)
        kv("coefficient_dev_c" + std::to_string(i + 1), r.coefficient_dev[i]);
    kv("coefficient_dev_max", r.coefficient_dev_max);
    for (std::size_t i = 0; i < 9; ++i)
        kv("coefficient_dev_reconciled_c" + std::to_string(i + 1),
           r.coefficient_dev_reconciled[i]);
    kv("coefficient_dev_reconciled_max", r.coefficient_dev_reconciled_max);
    kv("coefficient_norm_dev_max", r.coefficient_norm_dev_max);
    kv("rho_dev_r11", r.rho_dev_r11);
    kv("rho_dev_r14", r.rho_dev_r14);
    kv("rho_dev_r22", r.rho_dev_r22);
    kv("rho_dev_r44", r.rho_dev_r44);
    kv("rho_dev_max", r.rho_dev_max);
    kv("rho_trace_dev_max", r.rho_trace_dev_max);
    const auto& labels = reduced_basis_labels();
    for (std::size_t i = 0; i < 9; ++i)
        os << "basis_row_" << i + 1 << " = " << to_string(labels[r.basis_map.row_to_label[i]])
           << "\n";
    os << "basis_consistent = " << (r.basis_map.consistent() ? 1 : 0) << "\n";
    for (std::size_t i = 0; i < r.notes.size(); ++i)
        os << "note_" << i + 1 << " = " << r.notes[i] << "\n";
}

/// Human-readable validation report.
inline void write_validation_text(std::ostream& os, const ValidationReport& r) {
    os << "Validation report (djc v" << artifact_version << ")\n";
    os << "model: omega = " << r.params.omega << ", nu = " << r.params.nu << ", g = " << r.params.g
       << ", kappa = " << r.params.kappa << ", alpha = " << r.alpha << "\n\n";

    os << "Spectrum identity\n";
    os << "  closed-form energies vs tabulated 9x9 matrix : " << format_double(r.spectrum_match, 3)
       << "\n";
    os << "  closed-form energies vs operator sector      : "
       << format_double(r.spectrum_match_operator, 3) << "\n";
    os << "  tabulated matrix vs operator sector          : " << format_double(r.mode_divergence, 3)
       << "\n";
    os << "  (the closed forms follow the tabulated matrix; the operator construction\n"
          "   carries sqrt(2) kappa on the double-photon hops where the tabulation\n"
          "   prints kappa, hence the divergence)\n\n";

    os << "Tabulated amplitudes c1..c9 vs propagator (max over sample times)\n";
    for (std::size_t i = 0; i < 9; ++i)
        os << "  c" << i + 1 << ": verbatim " << format_double(r.coefficient_dev[i], 3)
           << "   reconciled " << format_double(r.coefficient_dev_reconciled[i], 3) << "\n";
    os << "  norm deviation max |sum c^2 - 1| = " << format_double(r.coefficient_norm_dev_max, 3)
       << "\n\n";

    os << "Tabulated reduced-matrix elements vs propagated state\n";
    os << "  r11: " << format_double(r.rho_dev_r11, 3) << "   r14: " << format_double(r.rho_dev_r14, 3)
       << "   r22: " << format_double(r.rho_dev_r22, 3) << "   r44: " << format_double(r.rho_dev_r44, 3)
       << "\n";
    os << "  trace deviation max = " << format_double(r.rho_trace_dev_max, 3) << "\n\n";

    os << "Basis assignment (matrix row -> basis label)\n";
    const auto& labels = reduced_basis_labels();
    for (std::size_t i = 0; i < 9; ++i)
        os << "  row " << i + 1 << " -> " << to_string(labels[r.basis_map.row_to_label[i]]) << "\n";
    os << "  consistent: " << (r.basis_map.consistent() ? "yes" : "no") << "\n";
    if (!r.notes.empty()) {
        os << "\nNotes\n";
        for (const std::string& n : r.notes) os << "  - " << n << "\n";
    }
}

/// Parse an angle that may be a plain number or a pi fraction:
/// "pi", "pi/12", "3pi/4", "3*pi/4", "-pi/6", "0.2618".
inline double parse_angle(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("parse_angle: empty value");

    const std::size_t pos = s.find("pi");
    if (pos == std::string::npos) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument("parse_angle: cannot parse '" + std::string(text) + "'");
        return v;
    }

    double coeff = 1.0;
    std::string head = s.substr(0, pos);
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (head == "-") {
        coeff = -1.0;
    } else if (!head.empty()) {
        std::size_t used = 0;
        coeff = std::stod(head, &used);
        if (used != head.size())
            throw std::invalid_argument("parse_angle: cannot parse '" + std::string(text) + "'");
    }

    double divisor = 1.0;
    std::string tail = s.substr(pos + 2);
    if (!tail.empty()) {
        if (tail.front() != '/' || tail.size() < 2)
            throw std::invalid_argument("parse_angle: cannot parse '" + std::string(text) + "'");
        std::size_t used = 0;
        divisor = std::stod(tail.substr(1), &used);
        if (used != tail.size() - 1 || divisor == 0.0)
            throw std::invalid_argument("parse_angle: cannot parse '" + std::string(text) + "'");
    }
    return coeff * std::numbers::pi / divisor;
}

/// Flat config format: one `key = value` per line, '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::istream& is) {
    std::map<std::string, std::string> out;
    std::string line;
    const auto trim = [](std::string s) {
        const auto notspace = [](unsigned char c) { return !std::isspace(c); };
        s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
        s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
        return s;
    };
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(trimmed.substr(0, eq));
        const std::string value = trim(trimmed.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        out[key] = value;
    }
    return out;
}

}  // namespace djc
