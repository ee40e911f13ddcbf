// djc - command-line front end: entanglement traces, figure presets,
// spectra, sweeps and the closed-form validation report, all as CSV or
// plain-text files.
//
// Exit status: 0 success, 1 usage error, 2 numerical hard failure
// (norm drift beyond tolerance).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "djc/engine.hpp"
#include "djc/io.hpp"

namespace fs = std::filesystem;
using namespace djc;

namespace {

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Removes every registered output file unless released, so failed runs do
/// not leave partial artifacts behind.
class OutputGuard {
public:
    void add(const fs::path& p) { paths_.push_back(p); }
    void release() { paths_.clear(); }
    ~OutputGuard() {
        for (const fs::path& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

private:
    std::vector<fs::path> paths_;
};

void write_file(OutputGuard& guard, const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    guard.add(path);
    os << content;
    if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

struct CommonOptions {
    ModelParams params;
    double alpha = 0.0;
    std::string variant = "jc-hop";
    std::string mode = "operator";
    double tau_max = 25.0;
    std::size_t n_points = 2001;
    int fock_cutoff = 4;
    int precision = 12;
    bool no_convergence_check = false;
    double norm_tolerance = 1e-6;
};

HamiltonianTag parse_tag(const std::string& s) {
    if (s == "jc-hop" || s == "jc_hop") return HamiltonianTag::jc_hop;
    if (s == "ising") return HamiltonianTag::ising;
    if (s == "xy") return HamiltonianTag::xy;
    throw std::invalid_argument("unknown variant '" + s + "' (expected jc-hop, ising or xy)");
}

HamiltonianMode parse_mode(const std::string& s) {
    if (s == "operator") return HamiltonianMode::operator_basis;
    if (s == "paper-matrix" || s == "reduced-matrix") return HamiltonianMode::reduced_matrix;
    throw std::invalid_argument("unknown mode '" + s + "' (expected operator or paper-matrix)");
}

RunConfig to_run_config(const CommonOptions& o) {
    RunConfig c;
    c.params = o.params;
    c.alpha = o.alpha;
    c.variant.tag = parse_tag(o.variant);
    c.variant.mode = parse_mode(o.mode);
    c.tau_max = o.tau_max;
    c.n_points = o.n_points;
    c.fock_cutoff = o.fock_cutoff;
    c.check_convergence = !o.no_convergence_check;
    validate(c);
    return c;
}

void check_norm(const EntanglementTrace& trace, double tolerance) {
    for (std::size_t i = 0; i < trace.norm.size(); ++i) {
        if (std::abs(trace.norm[i] - 1.0) > tolerance) {
            std::ostringstream msg;
            msg << "norm drifted to " << trace.norm[i] << " at tau = " << trace.tau[i]
                << " (tolerance " << tolerance << ")";
            throw NumericalFailure(msg.str());
        }
    }
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("empty value list '" + text + "'");
    return out;
}

// "--values a:b,c:d" for the jx_jy axis, "--values a,b,c" otherwise
std::vector<SweepValue> parse_sweep_values(const std::string& text, bool pairs) {
    std::vector<SweepValue> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        SweepValue v;
        if (pairs) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("jxjy sweep expects jx:jy pairs, got '" + item + "'");
            v.first = std::stod(item.substr(0, colon));
            v.second = std::stod(item.substr(colon + 1));
        } else {
            v.first = std::stod(item);
        }
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty value list '" + text + "'");
    return out;
}

// Config file keys mirror the command-line names; flags that were given
// explicitly win over the file.
void apply_config_file(const std::string& path, CommonOptions& o,
                       const std::map<std::string, std::size_t>& explicit_flags) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read config file '" + path + "'");
    const auto kv = parse_key_values(is);

    const auto absent = [&](const char* flag) {
        const auto it = explicit_flags.find(flag);
        return it == explicit_flags.end() || it->second == 0;
    };
    for (const auto& [key, value] : kv) {
        if (key == "omega" && absent("omega")) o.params.omega = std::stod(value);
        else if (key == "nu" && absent("nu")) o.params.nu = std::stod(value);
        else if (key == "g" && absent("g")) o.params.g = std::stod(value);
        else if (key == "kappa" && absent("kappa")) o.params.kappa = std::stod(value);
        else if (key == "j" && absent("j")) o.params.j_ising = std::stod(value);
        else if (key == "jx" && absent("jx")) o.params.j_x = std::stod(value);
        else if (key == "jy" && absent("jy")) o.params.j_y = std::stod(value);
        else if (key == "alpha" && absent("alpha")) o.alpha = parse_angle(value);
        else if (key == "variant" && absent("variant")) o.variant = value;
        else if (key == "mode" && absent("mode")) o.mode = value;
        else if (key == "tau_max" && absent("tau-max")) o.tau_max = std::stod(value);
        else if (key == "n_points" && absent("points")) o.n_points = std::stoul(value);
        else if (key == "fock_cutoff" && absent("cutoff")) o.fock_cutoff = std::stoi(value);
        else if (key == "omega" || key == "nu" || key == "g" || key == "kappa" || key == "j" ||
                 key == "jx" || key == "jy" || key == "alpha" || key == "variant" ||
                 key == "mode" || key == "tau_max" || key == "n_points" || key == "fock_cutoff") {
            // key valid but overridden on the command line
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

std::string alpha_file_tag(double alpha) {
    constexpr double pi = std::numbers::pi;
    const struct {
        double value;
        const char* tag;
    } named[] = {{pi / 12, "pi12"}, {pi / 6, "pi6"}, {pi / 4, "pi4"}};
    for (const auto& n : named)
        if (std::abs(alpha - n.value) < 1e-12) return n.tag;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", alpha);
    std::string s = buf;
    for (char& ch : s)
        if (ch == '.') ch = 'p';
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"double Jaynes-Cummings simulator with cavity-cavity photon hopping"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string alpha_text = "0";
    std::string config_path;

    const auto add_common = [&](CLI::App* cmd, bool with_dynamics) {
        cmd->add_option("--omega", opt.params.omega, "atomic transition frequency");
        cmd->add_option("--nu", opt.params.nu, "cavity mode frequency");
        cmd->add_option("--g", opt.params.g, "atom-cavity coupling");
        cmd->add_option("--kappa", opt.params.kappa, "cavity-cavity hopping");
        if (with_dynamics) {
            cmd->add_option("--j", opt.params.j_ising, "Ising coupling");
            cmd->add_option("--jx", opt.params.j_x, "XY coupling along x");
            cmd->add_option("--jy", opt.params.j_y, "XY coupling along y");
            cmd->add_option("--alpha", alpha_text, "initial-state angle (radians or pi fraction)");
            cmd->add_option("--variant", opt.variant, "jc-hop | ising | xy");
            cmd->add_option("--mode", opt.mode, "operator | paper-matrix");
            cmd->add_option("--tau-max", opt.tau_max, "scaled-time horizon");
            cmd->add_option("--points", opt.n_points, "grid size");
            cmd->add_option("--cutoff", opt.fock_cutoff, "Fock cutoff per cavity");
            cmd->add_flag("--no-convergence-check", opt.no_convergence_check,
                          "skip the cutoff+2 convergence guard");
            cmd->add_option("--norm-tolerance", opt.norm_tolerance,
                            "norm-drift tolerance for the hard failure check");
            cmd->add_option("--config", config_path, "key = value config file");
        }
        cmd->add_option("--precision", opt.precision, "decimal digits in output files");
    };

    // --- evolve -------------------------------------------------------------
    auto* evolve_cmd = app.add_subcommand("evolve", "run one trace and write it as CSV");
    std::string evolve_out = "trace.csv";
    add_common(evolve_cmd, true);
    evolve_cmd->add_option("--out", evolve_out, "output CSV path");

    // --- figure -------------------------------------------------------------
    auto* figure_cmd = app.add_subcommand("figure", "run a figure preset (one CSV per alpha)");
    std::string figure_id;
    std::string figure_outdir = ".";
    std::string figure_mode_override;
    std::size_t figure_points = 2001;
    double figure_tau_max = 25.0;
    figure_cmd->add_option("id", figure_id, "2a 2b 2c 2d 3a 3b 5a 5b 5c 5d xy")->required();
    figure_cmd->add_option("--outdir", figure_outdir, "output directory");
    figure_cmd->add_option("--mode", figure_mode_override, "override the preset mode");
    figure_cmd->add_option("--points", figure_points, "grid size");
    figure_cmd->add_option("--tau-max", figure_tau_max, "scaled-time horizon");
    figure_cmd->add_option("--precision", opt.precision, "decimal digits in output files");
    figure_cmd->add_option("--norm-tolerance", opt.norm_tolerance, "norm-drift tolerance");

    // --- spectrum -----------------------------------------------------------
    auto* spectrum_cmd =
        app.add_subcommand("spectrum", "closed-form energies next to the diagonalized matrix");
    std::string spectrum_out = "spectrum.csv";
    add_common(spectrum_cmd, false);
    spectrum_cmd->add_option("--out", spectrum_out, "output path");

    // --- validate -----------------------------------------------------------
    auto* validate_cmd =
        app.add_subcommand("validate", "closed-form vs propagator reconciliation report");
    std::string validate_out = "validation_report.txt";
    std::string validate_kv = "validation_report.kv";
    std::string validate_times = "0,0.5,1,2,3,5,7.5,10,15";
    add_common(validate_cmd, true);
    validate_cmd->add_option("--times", validate_times, "comma-separated sample times");
    validate_cmd->add_option("--out", validate_out, "human-readable report path");
    validate_cmd->add_option("--kv", validate_kv, "machine-readable report path");

    // --- sweep --------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "trace a list of parameter values");
    std::string sweep_axis = "kappa";
    std::string sweep_values;
    std::string sweep_outdir = ".";
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--axis", sweep_axis, "kappa | j | jxjy | alpha");
    sweep_cmd->add_option("--values", sweep_values, "comma list (jxjy: jx:jy pairs)")->required();
    sweep_cmd->add_option("--outdir", sweep_outdir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            app.exit(e);
            return 0;
        }
        std::cerr << "djc: " << e.what() << "\n";
        return 1;
    }

    OutputGuard guard;
    try {
        const auto collect_explicit = [&](CLI::App* cmd) {
            std::map<std::string, std::size_t> counts;
            for (const char* name : {"omega", "nu", "g", "kappa", "j", "jx", "jy", "alpha",
                                     "variant", "mode", "tau-max", "points", "cutoff"}) {
                const std::string flag = std::string("--") + name;
                if (cmd->get_option_no_throw(flag) != nullptr)
                    counts[name] = cmd->count(flag);
            }
            return counts;
        };

        if (evolve_cmd->parsed() || validate_cmd->parsed() || sweep_cmd->parsed()) {
            CLI::App* active = evolve_cmd->parsed() ? evolve_cmd
                               : validate_cmd->parsed() ? validate_cmd
                                                        : sweep_cmd;
            // flag (or its default) first, then the config file fills in
            // whatever was not given explicitly
            opt.alpha = parse_angle(alpha_text);
            if (!config_path.empty()) apply_config_file(config_path, opt, collect_explicit(active));
        }

        if (evolve_cmd->parsed()) {
            const RunConfig config = to_run_config(opt);
            const EntanglementTrace trace = entanglement_trace(config);
            check_norm(trace, opt.norm_tolerance);
            std::ostringstream csv;
            write_trace_csv(csv, trace, opt.precision);
            write_file(guard, evolve_out, csv.str());
        } else if (figure_cmd->parsed()) {
            const FigurePreset* preset = find_figure_preset(figure_id);
            if (preset == nullptr)
                throw std::invalid_argument("unknown figure preset '" + figure_id + "'");
            fs::create_directories(figure_outdir);
            for (double alpha : preset->alphas) {
                RunConfig config;
                config.params = preset->params;
                config.alpha = alpha;
                config.variant = preset->variant;
                if (!figure_mode_override.empty())
                    config.variant.mode = parse_mode(figure_mode_override);
                config.tau_max = figure_tau_max;
                config.n_points = figure_points;
                validate(config);
                const EntanglementTrace trace = entanglement_trace(config);
                check_norm(trace, opt.norm_tolerance);
                std::ostringstream csv;
                write_trace_csv(csv, trace, opt.precision);
                const fs::path out = fs::path(figure_outdir) /
                                     ("figure_" + figure_id + "_alpha_" +
                                      alpha_file_tag(alpha) + ".csv");
                write_file(guard, out, csv.str());
            }
        } else if (spectrum_cmd->parsed()) {
            validate(opt.params);
            const AnalyticSpectrum spec = analytic_spectrum(opt.params);
            const auto eig = herm_eig(reduced_basis_hamiltonian(opt.params));
            std::vector<double> closed(spec.e.begin(), spec.e.end());
            std::sort(closed.begin(), closed.end());
            std::ostringstream os;
            os << "# djc spectrum v" << artifact_version << "\n";
            os << "# omega = " << format_double(opt.params.omega, opt.precision)
               << ", g = " << format_double(opt.params.g, opt.precision)
               << ", kappa = " << format_double(opt.params.kappa, opt.precision) << "\n";
            os << "# lambda_plus = " << format_double(spec.lambda_plus, opt.precision)
               << ", lambda_minus = " << format_double(spec.lambda_minus, opt.precision) << "\n";
            os << "# columns: index,closed_form,matrix\n";
            for (std::size_t i = 0; i < 9; ++i)
                os << i + 1 << ',' << format_double(closed[i], opt.precision) << ','
                   << format_double(eig.eigenvalues[i], opt.precision) << "\n";
            write_file(guard, spectrum_out, os.str());
        } else if (validate_cmd->parsed()) {
            const std::vector<double> times = parse_double_list(validate_times);
            const ValidationReport report = validate(opt.params, opt.alpha, times);
            std::ostringstream text, kv;
            write_validation_text(text, report);
            write_validation_kv(kv, report, opt.precision);
            write_file(guard, validate_out, text.str());
            write_file(guard, validate_kv, kv.str());
        } else if (sweep_cmd->parsed()) {
            SweepAxis axis;
            if (sweep_axis == "kappa") axis = SweepAxis::kappa;
            else if (sweep_axis == "j") axis = SweepAxis::j_ising;
            else if (sweep_axis == "jxjy") axis = SweepAxis::jx_jy;
            else if (sweep_axis == "alpha") axis = SweepAxis::alpha;
            else throw std::invalid_argument("unknown sweep axis '" + sweep_axis + "'");

            const std::vector<SweepValue> values =
                parse_sweep_values(sweep_values, axis == SweepAxis::jx_jy);
            const RunConfig base = to_run_config(opt);
            const auto results = sweep(base, axis, values);

            fs::create_directories(sweep_outdir);
            std::ostringstream summary;
            write_sweep_summary_csv(summary, axis, results, opt.precision);
            write_file(guard, fs::path(sweep_outdir) / "sweep_summary.csv", summary.str());
            for (std::size_t i = 0; i < results.size(); ++i) {
                if (!results[i].ok()) continue;
                check_norm(results[i].trace, opt.norm_tolerance);
                std::ostringstream csv;
                write_trace_csv(csv, results[i].trace, opt.precision);
                write_file(guard,
                           fs::path(sweep_outdir) / ("sweep_point_" + std::to_string(i) + ".csv"),
                           csv.str());
            }
        }
    } catch (const NumericalFailure& e) {
        std::cerr << "djc: numerical validation failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "djc: " << e.what() << "\n";
        return 1;
    }
    guard.release();
    return 0;
}
