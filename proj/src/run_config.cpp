#include "qdspin/run_config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "qdspin/protocol.hpp"

namespace qdspin::cli {

namespace {

std::string trim(const std::string& text) {
    const std::size_t first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const std::size_t last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& context) {
    const std::string value = trim(text);
    double result = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto status = std::from_chars(begin, end, result, std::chars_format::general);
    if (value.empty() || status.ec != std::errc() || status.ptr != end) {
        throw std::invalid_argument(context + ": not a number: '" + value + "'");
    }
    return result;
}

std::uint64_t parse_uint(const std::string& text, const std::string& context) {
    const std::string value = trim(text);
    std::uint64_t result = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto status = std::from_chars(begin, end, result);
    if (value.empty() || status.ec != std::errc() || status.ptr != end) {
        throw std::invalid_argument(context + ": not an unsigned integer: '" + value + "'");
    }
    return result;
}

bool parse_bool(const std::string& text, const std::string& context) {
    const std::string value = trim(text);
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw std::invalid_argument(context + ": not a boolean: '" + value + "'");
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value,
               const std::string& context) {
    if (key == "command") {
        config.command = value;
    } else if (key == "kappa_s") {
        config.kappa_s = parse_double_list(value, context);
    } else if (key == "g") {
        config.g = parse_double(value, context);
    } else if (key == "gamma") {
        config.gamma = parse_double(value, context);
    } else if (key == "omega") {
        config.omega = parse_double(value, context);
    } else if (key == "omega_c") {
        config.omega_c = parse_double(value, context);
    } else if (key == "omega_x") {
        config.omega_x = parse_double(value, context);
    } else if (key == "mode") {
        config.mode = value;
    } else if (key == "convention") {
        config.convention = value;
    } else if (key == "wrong_port_loss") {
        config.wrong_port_loss = parse_bool(value, context);
    } else if (key == "ensemble") {
        config.ensemble = value;
    } else if (key == "seed") {
        config.seed = parse_uint(value, context);
    } else if (key == "branches") {
        config.branches = value;
    } else if (key == "state") {
        config.state = value;
    } else if (key == "probe") {
        config.probe = value;
    } else if (key == "axis") {
        config.axis = value;
    } else if (key == "range") {
        config.range = value;
    } else if (key == "output") {
        config.output = value;
    } else {
        throw std::invalid_argument(context + ": unknown key '" + key + "'");
    }
}

}  // namespace

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open '" + path + "'");
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        const std::string context = "config " + path + ": line " + std::to_string(line_no);
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(context + ": expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument(context + ": empty key");
        }
        apply_key(config, key, value, context);
    }
}

std::vector<double> parse_double_list(const std::string& text, const std::string& context) {
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        values.push_back(parse_double(text.substr(start, comma - start), context));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return values;
}

namespace {

// Single-spin amplitude pairs for the state-spec tokens.
bool spin_token(const std::string& token, Complex out[2]) {
    const double s = 1.0 / std::sqrt(2.0);
    if (token == "up") {
        out[0] = 1.0;
        out[1] = 0.0;
    } else if (token == "down") {
        out[0] = 0.0;
        out[1] = 1.0;
    } else if (token == "+") {
        out[0] = s;
        out[1] = s;
    } else if (token == "-") {
        out[0] = s;
        out[1] = -s;
    } else {
        return false;
    }
    return true;
}

}  // namespace

QuantumState parse_state_spec(const std::string& spec) {
    const auto bell = protocol::bell_from_string(trim(spec));
    if (bell) {
        return protocol::prepare_bell(*bell);
    }

    std::vector<std::array<Complex, 2>> factors;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = spec.find(',', start);
        const std::string raw =
            spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const std::string token = trim(raw);
        const std::size_t skip = raw.find_first_not_of(" \t\r");
        const std::size_t position = start + (skip == std::string::npos ? 0 : skip) + 1;
        std::array<Complex, 2> amps;
        if (token.empty() || !spin_token(token, amps.data())) {
            throw std::invalid_argument("state spec: unrecognized token '" + token +
                                        "' at position " + std::to_string(position) +
                                        " (expected up, down, +, - or a Bell name)");
        }
        factors.push_back(amps);
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }

    const RegisterLayout layout(
        std::vector<SubsystemKind>(factors.size(), SubsystemKind::Spin));
    std::vector<Complex> amplitudes(layout.total_dim());
    for (std::size_t index = 0; index < amplitudes.size(); ++index) {
        Complex value = 1.0;
        for (std::size_t spin = 0; spin < factors.size(); ++spin) {
            const std::size_t bit = (index >> (factors.size() - 1 - spin)) & 1u;
            value *= factors[spin][bit];
        }
        amplitudes[index] = value;
    }
    return QuantumState(layout, std::move(amplitudes));
}

Range parse_range(const std::string& text) {
    const std::string value = trim(text);
    if (value.empty()) {
        throw std::invalid_argument("range: empty (expected lo:hi:step or a single value)");
    }
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = value.find(':', start);
        parts.push_back(value.substr(start, colon == std::string::npos ? std::string::npos
                                                                       : colon - start));
        if (colon == std::string::npos) {
            break;
        }
        start = colon + 1;
    }
    if (parts.size() == 1) {
        const double v = parse_double(parts[0], "range");
        return Range{v, v, 1.0};
    }
    if (parts.size() != 3) {
        throw std::invalid_argument("range: expected lo:hi:step, got '" + value + "'");
    }
    return Range{parse_double(parts[0], "range"), parse_double(parts[1], "range"),
                 parse_double(parts[2], "range")};
}

analysis::Ensemble parse_ensemble(const std::string& name) {
    if (name == "four_basis") {
        return analysis::Ensemble::FourBasis;
    }
    if (name == "superposition") {
        return analysis::Ensemble::UniformSuperposition;
    }
    if (name == "combined") {
        return analysis::Ensemble::Combined;
    }
    throw std::invalid_argument("ensemble: expected four_basis, superposition or combined, got '" +
                                name + "'");
}

cavity::SignConvention parse_convention(const std::string& name) {
    if (name == "formula") {
        return cavity::SignConvention::Formula;
    }
    if (name == "magnitude") {
        return cavity::SignConvention::MagnitudeRule;
    }
    throw std::invalid_argument("convention: expected formula or magnitude, got '" + name + "'");
}

}  // namespace qdspin::cli
