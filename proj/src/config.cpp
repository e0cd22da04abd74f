#include "crohn/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "crohn/errors.hpp"

namespace crohn {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void invalid(const std::string& key, std::string_view value, const char* why, int line) {
    std::ostringstream os;
    os << "line " << line << ": invalid value '" << value << "' for key " << key << ": " << why;
    throw ConfigError(os.str(), line);
}

double parse_double(const std::string& key, std::string_view v, int line) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
        invalid(key, v, "expected a finite number", line);
    }
    return out;
}

double parse_positive(const std::string& key, std::string_view v, int line) {
    const double x = parse_double(key, v, line);
    if (!(x > 0.0)) invalid(key, v, "must be strictly positive", line);
    return x;
}

double parse_non_negative(const std::string& key, std::string_view v, int line) {
    const double x = parse_double(key, v, line);
    if (!(x >= 0.0)) invalid(key, v, "must be non-negative", line);
    return x;
}

template <typename Int>
Int parse_integer(const std::string& key, std::string_view v, int line) {
    Int out{};
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        invalid(key, v, "expected an integer", line);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::string_view, int)>;

Setter positive(double ModelParams::*field) {
    return [field](RunConfig& c, const std::string& k, std::string_view v, int line) {
        c.params.*field = parse_positive(k, v, line);
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["r_b"] = positive(&ModelParams::r_b);
        t["r_c"] = positive(&ModelParams::r_c);
        t["d_b"] = positive(&ModelParams::d_b);
        t["d_c"] = positive(&ModelParams::d_c);
        t["b_i"] = positive(&ModelParams::b_i);
        t["f_b"] = positive(&ModelParams::f_b);
        t["a"] = positive(&ModelParams::a);
        t["s_b"] = positive(&ModelParams::s_b);
        t["f_e"] = positive(&ModelParams::f_e);  // "auto" is handled before dispatch
        t["theta_target"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            const double x = parse_double(k, v, line);
            if (!(x > 0.0 && x < 1.0)) invalid(k, v, "must lie in (0, 1)", line);
            c.theta_target = x;
        };
        t["length"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            c.domain.length = parse_positive(k, v, line);
        };
        t["n_points"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            const int n = parse_integer<int>(k, v, line);
            if (n < 16) invalid(k, v, "must be at least 16", line);
            c.domain.n_points = n;
        };
        t["dt"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            c.sim.dt = parse_positive(k, v, line);
        };
        t["t_end"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            c.sim.t_end = parse_positive(k, v, line);
        };
        t["snapshot_every"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            c.sim.snapshot_every = parse_positive(k, v, line);
        };
        t["ic"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            if (v == "spot") {
                c.sim.initial.kind = InitialKind::Spot;
            } else if (v == "perturbed") {
                c.sim.initial.kind = InitialKind::Perturbed;
            } else {
                invalid(k, v, "expected 'spot' or 'perturbed'", line);
            }
        };
        t["spot_center"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            c.sim.initial.spot_center = parse_non_negative(k, v, line);
        };
        t["spot_half_width"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            c.sim.initial.spot_half_width = parse_non_negative(k, v, line);
        };
        t["spot_amplitude"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            c.sim.initial.spot_amplitude = parse_non_negative(k, v, line);
        };
        t["background"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            c.sim.initial.background = parse_non_negative(k, v, line);
        };
        t["noise"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            const double x = parse_non_negative(k, v, line);
            if (!(x < 1.0)) invalid(k, v, "must be below 1", line);
            c.sim.initial.noise = x;
        };
        auto range_lo = [](AxisRange RunConfig::*axis) -> Setter {
            return [axis](RunConfig& c, const std::string& k, std::string_view v, int line) {
                (c.*axis).lo = parse_non_negative(k, v, line);
            };
        };
        auto range_hi = [](AxisRange RunConfig::*axis) -> Setter {
            return [axis](RunConfig& c, const std::string& k, std::string_view v, int line) {
                (c.*axis).hi = parse_positive(k, v, line);
            };
        };
        auto range_points = [](AxisRange RunConfig::*axis) -> Setter {
            return [axis](RunConfig& c, const std::string& k, std::string_view v, int line) {
                const int n = parse_integer<int>(k, v, line);
                if (n < 2) invalid(k, v, "must be at least 2", line);
                (c.*axis).points = n;
            };
        };
        t["scan_r_c_min"] = range_lo(&RunConfig::scan_r_c);
        t["scan_r_c_max"] = range_hi(&RunConfig::scan_r_c);
        t["scan_r_c_points"] = range_points(&RunConfig::scan_r_c);
        t["scan_a_min"] = range_lo(&RunConfig::scan_a);
        t["scan_a_max"] = range_hi(&RunConfig::scan_a);
        t["scan_a_points"] = range_points(&RunConfig::scan_a);
        t["scan_threads"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            c.scan_threads = parse_integer<unsigned>(k, v, line);
        };
        t["dispersion_samples"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            const int n = parse_integer<int>(k, v, line);
            if (n < 2) invalid(k, v, "must be at least 2", line);
            c.dispersion_samples = n;
        };
        t["out_dir"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            if (v.empty()) invalid(k, v, "must not be empty", line);
            c.out_dir = std::string(v);
        };
        t["seed"] = [](RunConfig& c, const std::string& k, std::string_view v, int line) {
            c.seed = parse_integer<std::uint64_t>(k, v, line);
        };
        return t;
    }();
    return table;
}

void check_range(const AxisRange& r, const char* name) {
    if (!(r.lo < r.hi)) {
        throw ConfigError(std::string("scan range ") + name + ": min must be below max");
    }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::set<std::string> seen;
    bool fe_auto = false;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            std::ostringstream os;
            os << "line " << line_no << ": expected 'key = value'";
            throw ConfigError(os.str(), line_no);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream os;
            os << "line " << line_no << ": missing key";
            throw ConfigError(os.str(), line_no);
        }
        const auto it = setters().find(key);
        if (it == setters().end()) {
            std::ostringstream os;
            os << "line " << line_no << ": unknown key " << key;
            throw ConfigError(os.str(), line_no);
        }
        if (!seen.insert(key).second) {
            std::ostringstream os;
            os << "line " << line_no << ": duplicate key " << key;
            throw ConfigError(os.str(), line_no);
        }
        if (key == "f_e" && value == "auto") {
            fe_auto = true;
            continue;
        }
        it->second(cfg, key, value, line_no);
    }

    const bool fe_given = seen.contains("f_e") && !fe_auto;
    if (!fe_given && (fe_auto || seen.contains("theta_target"))) {
        try {
            cfg.params.f_e = calibrate_fe(cfg.params, cfg.theta_target);
        } catch (const Error& e) {
            throw ConfigError(std::string("invalid value for key f_e: ") + e.what());
        }
        cfg.fe_calibrated = true;
    }

    check_range(cfg.scan_r_c, "r_c");
    check_range(cfg.scan_a, "a");
    cfg.sim.initial.seed = cfg.seed;
    try {
        cfg.params.validate();
        cfg.domain.validate();
        cfg.sim.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string manifest_text(const RunConfig& c) {
    std::string out = "# resolved run configuration\n";
    char buf[160];
    auto num = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
        out += buf;
    };
    auto integer = [&](const char* key, long long v) {
        std::snprintf(buf, sizeof buf, "%s = %lld\n", key, v);
        out += buf;
    };
    const ModelParams& p = c.params;
    num("r_b", p.r_b);
    num("r_c", p.r_c);
    num("d_b", p.d_b);
    num("d_c", p.d_c);
    num("b_i", p.b_i);
    num("f_b", p.f_b);
    num("a", p.a);
    num("s_b", p.s_b);
    if (c.fe_calibrated) out += "# f_e calibrated at theta_target\n";
    num("f_e", p.f_e);
    num("theta_target", c.theta_target);
    num("length", c.domain.length);
    integer("n_points", c.domain.n_points);
    num("dt", c.sim.dt);
    num("t_end", c.sim.t_end);
    num("snapshot_every", c.sim.snapshot_every);
    out += std::string("ic = ") +
           (c.sim.initial.kind == InitialKind::Spot ? "spot" : "perturbed") + "\n";
    num("spot_center", c.sim.initial.spot_center);
    num("spot_half_width", c.sim.initial.spot_half_width);
    num("spot_amplitude", c.sim.initial.spot_amplitude);
    num("background", c.sim.initial.background);
    num("noise", c.sim.initial.noise);
    num("scan_r_c_min", c.scan_r_c.lo);
    num("scan_r_c_max", c.scan_r_c.hi);
    integer("scan_r_c_points", c.scan_r_c.points);
    num("scan_a_min", c.scan_a.lo);
    num("scan_a_max", c.scan_a.hi);
    integer("scan_a_points", c.scan_a.points);
    integer("scan_threads", c.scan_threads);
    integer("dispersion_samples", c.dispersion_samples);
    out += "out_dir = " + c.out_dir + "\n";
    std::snprintf(buf, sizeof buf, "seed = %llu\n", static_cast<unsigned long long>(c.seed));
    out += buf;
    return out;
}

}  // namespace crohn
