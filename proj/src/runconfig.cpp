#include "zetamoment/runconfig.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "zetamoment/errors.hpp"

namespace zm {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw config_error("bad numeric value for '" + key + "': " + text);
    }
}

long parse_long(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        long v = std::stol(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw config_error("bad integer value for '" + key + "': " + text);
    }
}

// Shared line reader for the flat key=value formats.
void for_each_pair(const std::string& path, const char* what,
                   const std::function<void(const std::string&, const std::string&)>& f) {
    std::ifstream in(path);
    if (!in) throw io_error(std::string("cannot open ") + what + ": " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value, got: " + s);
        }
        f(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
}

void append_hash(std::uint64_t& h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
}

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw config_error("empty entry in list: " + text);
        out.push_back(parse_double("list", item));
    }
    if (out.empty()) throw config_error("empty list: " + text);
    return out;
}

std::vector<long> parse_k_list(const std::string& text) {
    std::string s = trim(text);
    std::size_t dots = s.find("..");
    if (dots != std::string::npos) {
        long a = parse_long("k", trim(s.substr(0, dots)));
        long b = parse_long("k", trim(s.substr(dots + 2)));
        if (b < a) throw config_error("descending k range: " + text);
        if (b - a > 1000) throw config_error("k range too long: " + text);
        std::vector<long> out;
        for (long k = a; k <= b; ++k) out.push_back(k);
        return out;
    }
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw config_error("empty entry in k list: " + text);
        out.push_back(parse_long("k", item));
    }
    if (out.empty()) throw config_error("empty k list: " + text);
    return out;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    for_each_pair(path, "config file", [&](const std::string& key, const std::string& value) {
        if (key == "precision") {
            cfg.precision_digits = static_cast<int>(parse_long(key, value));
        } else if (key == "t_grid") {
            cfg.t_grid = parse_double_list(value);
        } else if (key == "x_grid") {
            cfg.x_grid = parse_double_list(value);
        } else if (key == "k") {
            cfg.k_range = parse_k_list(value);
        } else if (key == "theta") {
            cfg.theta = parse_double(key, value);
        } else if (key == "mode") {
            cfg.mode = value;
        } else if (key == "out") {
            cfg.output_dir = value;
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_long(key, value));
        } else if (key == "calibration") {
            cfg.calibration_path = value;
        } else {
            throw config_error("unknown config key: " + key);
        }
    });
}

Calibration load_calibration(const std::string& path) {
    Calibration cal;
    bool saw_version = false;
    for_each_pair(path, "calibration file", [&](const std::string& key, const std::string& value) {
        if (key == "version") {
            cal.version = static_cast<int>(parse_long(key, value));
            saw_version = true;
        } else if (key == "c_envelope") {
            cal.c_envelope = parse_double(key, value);
        } else if (key == "c_s2") {
            cal.c_s2 = parse_double(key, value);
        } else if (key == "c_wilton") {
            cal.c_wilton = parse_double(key, value);
        } else if (key == "afe_defect_ceiling") {
            cal.afe_defect_ceiling = parse_double(key, value);
        } else if (key == "c_lemma1") {
            cal.c_lemma1 = parse_double(key, value);
        } else if (key == "poisson_defect_max") {
            cal.poisson_defect_max = parse_double(key, value);
        } else if (key == "afe_tail_c0") {
            cal.afe_tail_c0 = parse_double(key, value);
        } else if (key == "afe_tail_c1") {
            cal.afe_tail_c1 = parse_double(key, value);
        } else {
            throw config_error("unknown calibration key: " + key);
        }
    });
    if (!saw_version) throw config_error("calibration file lacks a version key");
    return cal;
}

std::string render_calibration(const Calibration& cal) {
    std::ostringstream out;
    out << "version=" << cal.version << "\n";
    out << "c_envelope=" << fmt_g17(cal.c_envelope) << "\n";
    out << "c_s2=" << fmt_g17(cal.c_s2) << "\n";
    out << "c_wilton=" << fmt_g17(cal.c_wilton) << "\n";
    out << "afe_defect_ceiling=" << fmt_g17(cal.afe_defect_ceiling) << "\n";
    out << "c_lemma1=" << fmt_g17(cal.c_lemma1) << "\n";
    out << "poisson_defect_max=" << fmt_g17(cal.poisson_defect_max) << "\n";
    out << "afe_tail_c0=" << fmt_g17(cal.afe_tail_c0) << "\n";
    out << "afe_tail_c1=" << fmt_g17(cal.afe_tail_c1) << "\n";
    return out.str();
}

void save_calibration(const Calibration& cal, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write calibration file: " + path);
    out << render_calibration(cal);
    if (!out.flush()) throw io_error("write failed: " + path);
}

void validate_config(const RunConfig& cfg, const std::string& subcommand) {
    if (!(cfg.theta > 0.0 && cfg.theta <= 0.1)) {
        throw config_error("theta must lie in (0, 0.1], got " + fmt_g17(cfg.theta));
    }
    if (cfg.precision_digits != 0 &&
        (cfg.precision_digits < 15 || cfg.precision_digits > 20000)) {
        throw config_error("precision must be 0 (auto) or in [15, 20000]");
    }
    if (cfg.mode != "reference" && cfg.mode != "afe") {
        throw config_error("mode must be 'reference' or 'afe', got " + cfg.mode);
    }
    if (cfg.threads < 0 || cfg.threads > 256) {
        throw config_error("threads must lie in [0, 256] (0 = auto)");
    }

    auto need_t_grid = [&]() {
        if (cfg.t_grid.empty()) {
            throw config_error(subcommand + " needs a t grid (--grid)");
        }
    };
    auto check_ascending = [](const std::vector<double>& g) {
        for (std::size_t i = 1; i < g.size(); ++i) {
            if (!(g[i] > g[i - 1])) {
                throw config_error("grid must be strictly ascending");
            }
        }
    };
    check_ascending(cfg.t_grid);
    check_ascending(cfg.x_grid);
    if (subcommand == "moment" || subcommand == "report") {
        need_t_grid();
        const double cap = cfg.mode == "reference" ? 1.0e4 : 1.0e5;
        for (double T : cfg.t_grid) {
            if (!(T >= 1.0)) throw config_error("moment grid needs T >= 1");
            if (T > cap) {
                throw config_error("moment grid exceeds discrete " + cfg.mode +
                                   " cap T <= " + fmt_g17(cap));
            }
        }
    } else if (subcommand == "afe") {
        need_t_grid();
        for (double t : cfg.t_grid) {
            if (!(t >= 7.0)) {
                throw config_error("afe grid needs t >= 7 (first ordinate past 2*pi)");
            }
            if (t > 1.0e4) {
                throw config_error("afe grid exceeds reference cost cap t <= 10000");
            }
        }
    } else if (subcommand == "saddle") {
        need_t_grid();
        for (double T : cfg.t_grid) {
            if (!(T >= 10.0)) throw config_error("saddle grid needs T >= 10");
            if (T > 3.0e4) {
                throw config_error("saddle grid exceeds decomposition cap T <= 30000");
            }
        }
    } else if (subcommand == "expsum") {
        if (cfg.x_grid.empty()) {
            throw config_error("expsum needs an x grid (--grid)");
        }
        for (double x : cfg.x_grid) {
            if (!(x > 1.0)) throw config_error("expsum grid needs x > 1");
            if (x > 1.0e7) {
                throw config_error("expsum grid exceeds divisor table cap x <= 1e7");
            }
        }
        for (long k : cfg.k_range) {
            if (k < 1) throw config_error("expsum needs k >= 1");
            if (k > 1800) throw config_error("expsum exceeds precision cap k <= 1800");
        }
    } else if (subcommand == "cf") {
        if (cfg.k_range.empty()) throw config_error("cf needs a k list (--k)");
        for (long k : cfg.k_range) {
            if (k == 0) throw config_error("cf needs nonzero k");
            if (k > 100 || k < -100) {
                throw config_error("cf exceeds digit guard cap |k| <= 100");
            }
        }
    } else if (subcommand == "calibrate") {
        // uses its own fixed grids
    } else {
        throw config_error("unknown subcommand: " + subcommand);
    }
}

std::uint64_t config_hash(const RunConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    append_hash(h, "precision=" + std::to_string(cfg.precision_digits));
    append_hash(h, ";theta=" + fmt_g17(cfg.theta));
    append_hash(h, ";mode=" + cfg.mode);
    append_hash(h, ";t_grid=");
    for (double v : cfg.t_grid) append_hash(h, fmt_g17(v) + ",");
    append_hash(h, ";x_grid=");
    for (double v : cfg.x_grid) append_hash(h, fmt_g17(v) + ",");
    append_hash(h, ";k=");
    for (long v : cfg.k_range) append_hash(h, std::to_string(v) + ",");
    return h;
}

}  // namespace zm
