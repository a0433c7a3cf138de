#include "photobio/params.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "photobio/error.hpp"
#include "photobio/photoresponse.hpp"

namespace photobio {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ConfigError("config: key '" + std::string(key) + "' expects a finite number, got '" +
                          std::string(text) + "'");
    }
    return value;
}

int to_int(std::string_view key, std::string_view text) {
    int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("config: key '" + std::string(key) + "' expects an integer, got '" +
                          std::string(text) + "'");
    }
    return value;
}

std::string number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

[[noreturn]] void violation(const std::string& key, double value, const std::string& bound) {
    throw ConfigError("config: " + key + " = " + number(value) + " violates " + key + " " + bound);
}

void require(bool ok, const std::string& key, double value, const std::string& bound) {
    if (!ok) violation(key, value, bound);
}

void validate(const SimParams& p) {
    require(p.Sc > 0, "Sc", p.Sc, "> 0");
    require(p.Vc >= 0, "Vc", p.Vc, ">= 0");
    require(p.kappa >= 0, "kappa", p.kappa, ">= 0");
    if (p.R) require(*p.R >= 0, "R", *p.R, ">= 0");
    if (p.R_mult) require(*p.R_mult >= 0, "R_mult", *p.R_mult, ">= 0");
    require(p.I_t > 0, "I_t", p.I_t, "> 0");
    if (p.photo_input == PhotoInput::critical_intensity) {
        require(p.I_c > 0 && p.I_c < p.I_t, "I_c", p.I_c, "in (0, I_t)");
        require(p.I_c < 1, "I_c", p.I_c, "< 1");
    }
    if (p.lambda) require(*p.lambda > 0, "lambda", *p.lambda, "> 0");
    require(std::abs(p.epsilon) < 1, "epsilon", p.epsilon, "magnitude < 1");
    require(p.Nx >= 8, "Nx", p.Nx, ">= 8 (grid too coarse)");
    require(p.Nz >= 8, "Nz", p.Nz, ">= 8 (grid too coarse)");
    require(p.dt > 0, "dt", p.dt, "> 0");
    require(p.t_max > 0, "t_max", p.t_max, "> 0");
    require(p.steady_tol > 0, "steady_tol", p.steady_tol, "> 0");
    require(p.snapshot_interval >= 0, "snapshot_interval", p.snapshot_interval, ">= 0");
    require(p.diag_every >= 1, "diag_every", p.diag_every, ">= 1");
    require(p.k_min > 0, "k_min", p.k_min, "> 0");
    require(p.k_max > p.k_min, "k_max", p.k_max, "> k_min");
    require(p.k_samples >= 3, "k_samples", p.k_samples, ">= 3");
    require(p.linstab_nz == 0 || p.linstab_nz >= 8, "linstab_nz", p.linstab_nz, "0 or >= 8");
}

SimParams build(const KeyValues& kv) {
    SimParams p;

    auto real = [&](std::string_view key, double& field) {
        if (auto it = kv.find(key); it != kv.end()) {
            field = to_double(key, it->second);
        } else {
            p.defaulted.emplace_back(key);
        }
    };
    auto integer = [&](std::string_view key, int& field) {
        if (auto it = kv.find(key); it != kv.end()) {
            field = to_int(key, it->second);
        } else {
            p.defaulted.emplace_back(key);
        }
    };

    static constexpr std::array<std::string_view, 22> known = {
        "Sc", "Vc", "kappa", "R", "R_mult", "I_t", "beta", "I_c", "lambda", "epsilon", "Nx", "Nz",
        "dt", "t_max", "steady_tol", "snapshot_interval", "diag_every", "k_min", "k_max",
        "k_samples", "linstab_nz", "onset_summary"};
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (auto k : known) ok = ok || k == key;
        if (!ok) throw ConfigError("config: unknown key '" + key + "'");
    }

    real("Sc", p.Sc);
    real("Vc", p.Vc);
    real("kappa", p.kappa);
    real("I_t", p.I_t);
    real("epsilon", p.epsilon);
    integer("Nx", p.Nx);
    integer("Nz", p.Nz);
    real("dt", p.dt);
    real("t_max", p.t_max);
    real("steady_tol", p.steady_tol);
    real("snapshot_interval", p.snapshot_interval);
    integer("diag_every", p.diag_every);
    real("k_min", p.k_min);
    real("k_max", p.k_max);
    integer("k_samples", p.k_samples);
    integer("linstab_nz", p.linstab_nz);

    const bool has_R = kv.contains("R");
    const bool has_mult = kv.contains("R_mult");
    if (has_R && has_mult) {
        throw ConfigError("config: R and R_mult are mutually exclusive; give one");
    }
    if (has_R) {
        p.R = to_double("R", kv.find("R")->second);
    } else if (has_mult) {
        p.R_mult = to_double("R_mult", kv.find("R_mult")->second);
    } else {
        p.R = 0.0;
        p.defaulted.emplace_back("R");
    }

    const bool has_beta = kv.contains("beta");
    const bool has_ic = kv.contains("I_c");
    if (has_beta && has_ic) {
        throw ConfigError("config: over-specified photoresponse; give exactly one of beta, I_c");
    }
    if (!has_beta && !has_ic) {
        throw ConfigError("config: photoresponse unspecified; give exactly one of beta, I_c");
    }

    if (auto it = kv.find("lambda"); it != kv.end()) {
        if (it->second != "critical") p.lambda = to_double("lambda", it->second);
    } else {
        p.defaulted.emplace_back("lambda");
    }
    if (auto it = kv.find("onset_summary"); it != kv.end()) p.onset_summary = it->second;

    if (has_ic) {
        p.photo_input = PhotoInput::critical_intensity;
        p.I_c = to_double("I_c", kv.find("I_c")->second);
    } else {
        p.photo_input = PhotoInput::beta;
        p.beta = to_double("beta", kv.find("beta")->second);
    }

    validate(p);

    if (p.photo_input == PhotoInput::critical_intensity) {
        p.beta = calibrate_beta(p.I_c);
    } else {
        p.I_c = Photoresponse::from_beta(p.beta).critical_intensity();
    }
    return p;
}

}  // namespace

double SimParams::rayleigh() const {
    if (!R) throw ConfigError("params: Rayleigh number pending (R_mult needs R_c from onset)");
    return *R;
}

double SimParams::width() const {
    if (!lambda) throw ConfigError("params: domain width pending (lambda = critical needs onset)");
    return *lambda;
}

bool operator==(const SimParams& a, const SimParams& b) {
    return a.Sc == b.Sc && a.Vc == b.Vc && a.kappa == b.kappa && a.R == b.R &&
           a.R_mult == b.R_mult && a.I_t == b.I_t && a.photo_input == b.photo_input &&
           a.beta == b.beta && a.I_c == b.I_c && a.lambda == b.lambda && a.epsilon == b.epsilon &&
           a.Nx == b.Nx && a.Nz == b.Nz && a.dt == b.dt && a.t_max == b.t_max &&
           a.steady_tol == b.steady_tol && a.snapshot_interval == b.snapshot_interval &&
           a.diag_every == b.diag_every && a.k_min == b.k_min && a.k_max == b.k_max &&
           a.k_samples == b.k_samples && a.linstab_nz == b.linstab_nz &&
           a.onset_summary == b.onset_summary;
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config: line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("config: line " + std::to_string(line_no) + ": empty key or value");
        }
        if (!kv.emplace(std::string(key), std::string(value)).second) {
            throw ConfigError("config: line " + std::to_string(line_no) + ": duplicate key '" +
                              std::string(key) + "'");
        }
    }
    return kv;
}

SimParams load_config(std::string_view text) { return build(parse_key_values(text)); }

SimParams load_config(std::string_view text, const std::vector<std::string>& overrides) {
    auto kv = parse_key_values(text);
    for (const auto& item : overrides) {
        auto parsed = parse_key_values(item);
        if (parsed.size() != 1) throw ConfigError("override '" + item + "': expected key=val");
        auto& [key, value] = *parsed.begin();
        // The photoresponse and Rayleigh pairs are exclusive, so an override of
        // one member replaces the other.
        if (key == "beta") kv.erase("I_c");
        if (key == "I_c") kv.erase("beta");
        if (key == "R") kv.erase("R_mult");
        if (key == "R_mult") kv.erase("R");
        kv[key] = value;
    }
    return build(kv);
}

SimParams load_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str(), overrides);
}

std::string serialize(const SimParams& p) {
    std::ostringstream out;
    auto put = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
    put("Sc", number(p.Sc));
    put("Vc", number(p.Vc));
    put("kappa", number(p.kappa));
    if (p.R) {
        put("R", number(*p.R));
    } else if (p.R_mult) {
        put("R_mult", number(*p.R_mult));
    }
    put("I_t", number(p.I_t));
    if (p.photo_input == PhotoInput::critical_intensity) {
        put("I_c", number(p.I_c));
    } else {
        put("beta", number(p.beta));
    }
    put("lambda", p.lambda ? number(*p.lambda) : std::string("critical"));
    put("epsilon", number(p.epsilon));
    put("Nx", std::to_string(p.Nx));
    put("Nz", std::to_string(p.Nz));
    put("dt", number(p.dt));
    put("t_max", number(p.t_max));
    put("steady_tol", number(p.steady_tol));
    put("snapshot_interval", number(p.snapshot_interval));
    put("diag_every", std::to_string(p.diag_every));
    put("k_min", number(p.k_min));
    put("k_max", number(p.k_max));
    put("k_samples", std::to_string(p.k_samples));
    put("linstab_nz", std::to_string(p.linstab_nz));
    if (!p.onset_summary.empty()) put("onset_summary", p.onset_summary);
    return out.str();
}

std::string format_summary(const CriticalSummary& s) {
    return "k_c=" + number(s.k_c) + " R_c=" + number(s.R_c) + " lambda_c=" + number(s.lambda_c) + "\n";
}

CriticalSummary parse_summary(std::string_view text) {
    CriticalSummary s;
    bool k = false, r = false, l = false;
    std::string line(trim(text));
    std::istringstream in(line);
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw ConfigError("onset summary: malformed token '" + token + "'");
        const auto key = token.substr(0, eq);
        const auto value = to_double(key, std::string_view(token).substr(eq + 1));
        if (key == "k_c") {
            s.k_c = value;
            k = true;
        } else if (key == "R_c") {
            s.R_c = value;
            r = true;
        } else if (key == "lambda_c") {
            s.lambda_c = value;
            l = true;
        } else {
            throw ConfigError("onset summary: unknown key '" + key + "'");
        }
    }
    if (!(k && r && l)) throw ConfigError("onset summary: need k_c, R_c and lambda_c");
    return s;
}

SimParams resolve_onset(SimParams p, const CriticalSummary& s) {
    if (!p.R && p.R_mult) p.R = *p.R_mult * s.R_c;
    if (!p.lambda) p.lambda = s.lambda_c;
    return p;
}

std::uint64_t params_hash(const SimParams& p) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : serialize(p)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace photobio
