#include "qdspin/cli_app.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <stdexcept>

#include <CLI11.hpp>

#include "qdspin/analysis.hpp"
#include "qdspin/cavity.hpp"
#include "qdspin/protocol.hpp"
#include "qdspin/run_config.hpp"
#include "qdspin/sweep_io.hpp"
#include "qdspin/statevec.hpp"

namespace qdspin::cli {

namespace {

std::string format_complex(Complex value) {
    return "(" + io::format_sig9(value.real()) + "," + io::format_sig9(value.imag()) + ")";
}

std::string basis_token(const RegisterLayout& layout, std::size_t index) {
    std::string out;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto digit = (index / layout.stride(i)) % layout.dim(i);
        if (layout.kind(i) == SubsystemKind::Spin) {
            out += to_string(static_cast<Spin>(digit));
        } else {
            out += to_string(PhotonLabel::from_index(static_cast<int>(digit)));
        }
        if (i + 1 < layout.size()) {
            out += ',';
        }
    }
    return out;
}

std::string format_state(const QuantumState& state) {
    std::string out;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        const Complex amp = state.amplitude(i);
        if (std::abs(amp) < kStateTol) {
            continue;
        }
        if (!out.empty()) {
            out += " + ";
        }
        out += format_complex(amp) + "|" + basis_token(state.layout(), i) + ">";
    }
    return out.empty() ? "0" : out;
}

double first_kappa_s(const RunConfig& config) {
    return config.kappa_s.empty() ? 0.0 : config.kappa_s.front();
}

cavity::CavityParams cavity_params(const RunConfig& config, double kappa_s, double g) {
    cavity::CavityParams params;
    params.g = g;
    params.kappa = 1.0;
    params.kappa_s = kappa_s;
    params.gamma = config.gamma;
    params.omega = config.omega;
    params.omega_c = config.omega_c;
    params.omega_x = config.omega_x;
    return params;
}

// Leaky mode without an explicit g falls back to the balanced coupling for
// the configured side leakage (throws the domain error when none exists).
protocol::Mode make_mode(const RunConfig& config) {
    if (config.mode == "ideal") {
        return protocol::Mode::ideal();
    }
    if (config.mode != "leaky") {
        throw std::invalid_argument("mode: expected ideal or leaky, got '" + config.mode + "'");
    }
    const double kappa_s = first_kappa_s(config);
    const double g = config.g ? *config.g : analysis::balanced_coupling(kappa_s);
    const cavity::ScatteringAmplitudes amps =
        cavity::compute_amplitudes(cavity_params(config, kappa_s, g));
    return protocol::Mode::leaky(amps, parse_convention(config.convention),
                                 config.wrong_port_loss);
}

QuantumState parse_protocol_input(const RunConfig& config, std::size_t min_spins) {
    if (config.state.empty()) {
        throw std::invalid_argument("missing input state (--state or config key 'state')");
    }
    QuantumState state = parse_state_spec(config.state);
    if (state.layout().size() < min_spins) {
        throw std::invalid_argument("state spec: need at least " + std::to_string(min_spins) +
                                    " spins, got " + std::to_string(state.layout().size()));
    }
    return state;
}

PhotonLabel parse_probe(const std::string& name) {
    if (name == "rdown") {
        return PhotonLabel{Polarization::R, Direction::Down};
    }
    if (name == "lup") {
        return PhotonLabel{Polarization::L, Direction::Up};
    }
    throw std::invalid_argument("probe: expected rdown or lup, got '" + name + "'");
}

bool use_sampling(const RunConfig& config) {
    if (config.branches == "sample") {
        return true;
    }
    if (config.branches == "enumerate") {
        return false;
    }
    throw std::invalid_argument("branches: expected enumerate or sample, got '" +
                                config.branches + "'");
}

int cmd_amplitudes(const RunConfig& config, std::ostream& out) {
    std::vector<double> values = config.kappa_s;
    if (values.empty()) {
        values.push_back(0.0);
    }
    const double g = config.g.value_or(0.0);
    out << "kappa_s,g,t0_re,t0_im,r0_re,r0_im,t_re,t_im,r_re,r_im\n";
    for (double kappa_s : values) {
        const cavity::ScatteringAmplitudes amps =
            cavity::compute_amplitudes(cavity_params(config, kappa_s, g));
        out << io::format_sig9(kappa_s) << ',' << io::format_sig9(g);
        for (Complex c : {amps.t0, amps.r0, amps.t, amps.r}) {
            out << ',' << io::format_sig9(c.real()) << ',' << io::format_sig9(c.imag());
        }
        out << '\n';
    }
    return 0;
}

void print_pcg_branch(const protocol::PcgBranch& branch, std::ostream& out) {
    out << "outcome=" << to_string(branch.outcome.polarization)
        << " detector=" << branch.outcome.detector
        << " sign=" << (branch.outcome.sign_branch > 0 ? "+1" : "-1")
        << " probability=" << io::format_sig9(branch.probability) << '\n'
        << "  post_state: " << format_state(branch.state) << '\n';
}

int cmd_pcg(const RunConfig& config, std::ostream& out) {
    const QuantumState input = parse_protocol_input(config, 2);
    const protocol::Mode mode = make_mode(config);
    const PhotonLabel probe = parse_probe(config.probe);
    out << "probe: (" << to_string(probe.pol) << ","
        << (probe.dir == Direction::Up ? "up" : "down") << ")\n";
    double detected = 0.0;
    if (use_sampling(config)) {
        std::mt19937_64 rng(config.seed);
        out << "seed: " << config.seed << '\n';
        const protocol::PcgBranch branch =
            protocol::parity_check_sample(input, 0, 1, probe, mode, rng);
        print_pcg_branch(branch, out);
        detected = branch.probability;
    } else {
        for (const protocol::PcgBranch& branch : protocol::parity_check(input, 0, 1, probe, mode)) {
            print_pcg_branch(branch, out);
            detected += branch.probability;
        }
    }
    out << "success_probability=" << io::format_sig9(detected) << '\n';
    return 0;
}

void print_cnot_branch(const protocol::CnotBranch& branch, double fidelity_to_ideal,
                       std::ostream& out) {
    std::string detectors[2];
    for (const auto& [stage, value] : branch.record.outcomes) {
        if (stage == "pcg1_detector") {
            detectors[0] = value;
        } else if (stage == "pcg2_detector") {
            detectors[1] = value;
        }
    }
    const protocol::FeedForward ff = branch.record.applied_feedforward.value();
    out << "pcg1=" << to_string(branch.key.first) << "(" << detectors[0] << ")"
        << " pcg2=" << to_string(branch.key.second) << "(" << detectors[1] << ")"
        << " ancilla=" << to_string(branch.key.ancilla)
        << " probability=" << io::format_sig9(branch.record.branch_probability)
        << " ff_control=" << protocol::to_string(ff.control_op)
        << " ff_target=" << protocol::to_string(ff.target_op)
        << " fidelity=" << io::format_sig9(fidelity_to_ideal) << '\n'
        << "  output_state: " << format_state(branch.record.final_state) << '\n';
}

void write_cnot_csv(const std::string& path, const std::vector<protocol::CnotBranch>& branches,
                    const std::vector<double>& fidelities) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    file << "pcg1,pcg2,ancilla,probability,ff_control,ff_target,fidelity\n";
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const protocol::CnotBranch& branch = branches[i];
        const protocol::FeedForward ff = branch.record.applied_feedforward.value();
        file << to_string(branch.key.first) << ',' << to_string(branch.key.second) << ','
             << to_string(branch.key.ancilla) << ','
             << io::format_sig9(branch.record.branch_probability) << ','
             << protocol::to_string(ff.control_op) << ',' << protocol::to_string(ff.target_op)
             << ',' << io::format_sig9(fidelities[i]) << '\n';
    }
    if (!file.flush()) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

int cmd_cnot(const RunConfig& config, std::ostream& out) {
    const QuantumState input = parse_protocol_input(config, 2);
    const protocol::Mode mode = make_mode(config);
    const QuantumState ideal = apply_local_map(input, {0, 1}, protocol::cnot_matrix());

    std::vector<protocol::CnotBranch> branches;
    if (use_sampling(config)) {
        std::mt19937_64 rng(config.seed);
        out << "seed: " << config.seed << '\n';
        branches.push_back(protocol::cnot_sample(input, 0, 1, mode, rng));
    } else {
        branches = protocol::cnot(input, 0, 1, mode);
    }

    std::vector<double> fidelities;
    double detected = 0.0;
    for (const protocol::CnotBranch& branch : branches) {
        fidelities.push_back(fidelity(branch.record.final_state, ideal));
        detected += branch.record.branch_probability;
        print_cnot_branch(branch, fidelities.back(), out);
    }
    out << "success_probability=" << io::format_sig9(detected) << '\n';
    if (!config.output.empty()) {
        write_cnot_csv(config.output, branches, fidelities);
        out << "wrote " << config.output << " (" << branches.size() << " rows)\n";
    }
    return 0;
}

void print_bsa_result(const protocol::BellAnalysisResult& result, std::ostream& out) {
    std::string outcomes[2];
    std::string detectors[2];
    for (const auto& [stage, value] : result.record.outcomes) {
        if (stage == "pcg1") {
            outcomes[0] = value;
        } else if (stage == "pcg2") {
            outcomes[1] = value;
        } else if (stage == "pcg1_detector") {
            detectors[0] = value;
        } else if (stage == "pcg2_detector") {
            detectors[1] = value;
        }
    }
    out << "label=" << protocol::to_string(result.label) << " pcg1=" << outcomes[0] << "("
        << detectors[0] << ")" << " pcg2=" << outcomes[1] << "(" << detectors[1] << ")"
        << " probability=" << io::format_sig9(result.record.branch_probability) << '\n'
        << "  post_state: " << format_state(result.record.final_state) << '\n';
}

int cmd_bsa(const RunConfig& config, std::ostream& out) {
    const QuantumState input = parse_protocol_input(config, 2);
    const protocol::Mode mode = make_mode(config);
    double detected = 0.0;
    if (use_sampling(config)) {
        std::mt19937_64 rng(config.seed);
        out << "seed: " << config.seed << '\n';
        const protocol::BellAnalysisResult result =
            protocol::bell_analysis_sample(input, 0, 1, mode, rng);
        print_bsa_result(result, out);
        detected = result.record.branch_probability;
    } else {
        for (const protocol::BellAnalysisResult& result :
             protocol::bell_analysis(input, 0, 1, mode)) {
            print_bsa_result(result, out);
            detected += result.record.branch_probability;
        }
    }
    out << "success_probability=" << io::format_sig9(detected) << '\n';
    return 0;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
    if (config.range.empty()) {
        throw std::invalid_argument("missing sweep range (--range or config key 'range')");
    }
    analysis::SweepRequest request;
    if (config.axis == "kappa_s") {
        request.axis = analysis::SweepAxis::KappaS;
    } else if (config.axis == "g") {
        request.axis = analysis::SweepAxis::G;
    } else {
        throw std::invalid_argument("axis: expected kappa_s or g, got '" + config.axis + "'");
    }
    const Range range = parse_range(config.range);
    request.lo = range.lo;
    request.hi = range.hi;
    request.step = range.step;
    request.gamma_over_kappa = config.gamma;
    request.options.ensemble = parse_ensemble(config.ensemble);
    request.options.convention = parse_convention(config.convention);
    request.options.wrong_port_is_loss = config.wrong_port_loss;

    const std::vector<analysis::SweepRow> rows = analysis::sweep(request);
    if (config.output.empty()) {
        out << io::sweep_to_csv(rows);
    } else {
        io::write_sweep_csv(config.output, rows);
        out << "wrote " << config.output << " (" << rows.size() << " rows)\n";
    }
    return 0;
}

// The config file must be applied before CLI11 assigns flag values, so the
// path flag is resolved by a pre-scan of the raw arguments.
std::string find_config_path(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) {
        if (const char* env = std::getenv("QDSPIN_CONFIG")) {
            path = env;
        }
    }
    return path;
}

int dispatch(const RunConfig& config, std::ostream& out) {
    if (config.command == "amplitudes") {
        return cmd_amplitudes(config, out);
    }
    if (config.command == "pcg") {
        return cmd_pcg(config, out);
    }
    if (config.command == "cnot") {
        return cmd_cnot(config, out);
    }
    if (config.command == "bsa") {
        return cmd_bsa(config, out);
    }
    if (config.command == "sweep") {
        return cmd_sweep(config, out);
    }
    throw std::invalid_argument("unknown command '" + config.command +
                                "' (expected amplitudes, pcg, cnot, bsa or sweep)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    CLI::App app{"Photon-spin parity-check, CNOT and Bell-analysis simulator"};
    app.name("qdspin");

    std::string command;
    std::string kappa_s_text;
    std::string config_flag;
    app.add_option("command", command, "amplitudes | pcg | cnot | bsa | sweep");
    app.add_option("--config", config_flag,
                   "config file with key=value lines (also read from $QDSPIN_CONFIG)");
    app.add_option("--kappa_s", kappa_s_text,
                   "side leakage ratio kappa_s/kappa; comma list for amplitude tables");
    app.add_option("--g", config.g, "coupling g/kappa (leaky default: balanced value)");
    app.add_option("--gamma", config.gamma, "dipole decay gamma/kappa (default 0.1)");
    app.add_option("--omega", config.omega, "probe detuning from the frequency origin");
    app.add_option("--omega_c", config.omega_c, "cavity detuning");
    app.add_option("--omega_x", config.omega_x, "dipole transition detuning");
    app.add_option("--mode", config.mode, "ideal | leaky");
    app.add_option("--convention", config.convention, "leaky sign handling: formula | magnitude");
    app.add_flag("--wrong_port_loss,!--no_wrong_port_loss", config.wrong_port_loss,
                 "discard photon amplitude on unwatched ports");
    app.add_option("--ensemble", config.ensemble,
                   "sweep averaging set: four_basis | superposition | combined");
    app.add_option("--seed", config.seed, "RNG seed for sampled runs");
    app.add_option("--branches", config.branches, "enumerate | sample");
    app.add_option("--state", config.state, "input state, e.g. 'up,down', '+,up' or 'psi+'");
    app.add_option("--probe", config.probe, "parity-check probe photon: rdown | lup");
    app.add_option("--axis", config.axis, "sweep axis: kappa_s | g");
    app.add_option("--range", config.range, "sweep range lo:hi:step, or one value");
    app.add_option("--output", config.output, "output CSV path (sweep; optional for cnot)");

    try {
        const std::string config_path = find_config_path(args);
        if (!config_path.empty()) {
            apply_config_file(config, config_path);
        }

        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("qdspin");
        for (const std::string& arg : args) {
            argv.push_back(arg.c_str());
        }
        app.parse(static_cast<int>(argv.size()), argv.data());

        if (!command.empty()) {
            config.command = command;
        }
        if (!kappa_s_text.empty()) {
            config.kappa_s = parse_double_list(kappa_s_text, "--kappa_s");
        }
        if (config.command.empty()) {
            err << "error: no command given\n\n" << app.help();
            return 1;
        }
        return dispatch(config, out);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace qdspin::cli
