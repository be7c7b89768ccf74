#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace zm {

// Fitted constants and tolerance knobs. The committed calibration file is
// the source of truth; these defaults are its mirror so the library works
// without file plumbing. Version bumps whenever a constant is re-fitted.
struct Calibration {
    int version = 1;
    double c_envelope = 1.3346788547079285;          // envelope constant the assembly check uses
    double c_s2 = 1.8861976929958109;                // |s2 computed - predicted| <= c_s2 * T^0.6
    double c_wilton = 0.57115375800765378;           // reflection residual / (sqrt(x) log x) ceiling
    double afe_defect_ceiling = 0.50460481278887104; // max |defect| * t^{1/4} across the t-grid
    double c_lemma1 = 22.146311186648862;            // global quotient-growth constant
    double poisson_defect_max = 10.0;                // truncated-exchange defect ceiling
    double afe_tail_c0 = 0.27341948071338523;        // smooth tail, constant coefficient
    double afe_tail_c1 = 0.036116376562017445;       // smooth tail, log coefficient
};

Calibration load_calibration(const std::string& path);
std::string render_calibration(const Calibration& cal);  // the file's exact text
void save_calibration(const Calibration& cal, const std::string& path);

// One run's worth of parameters. Subcommands read the fields they use.
struct RunConfig {
    int precision_digits = 0;  // 0 selects each module's own default rule
    std::vector<double> t_grid;
    std::vector<double> x_grid;
    std::vector<long> k_range;
    double theta = 0.05;
    std::string mode = "afe";
    std::string calibration_path;
    std::string output_dir = ".";
    int threads = 1;
};

// Flat key=value file; '#' starts a comment. Recognized keys: precision,
// t_grid, x_grid, k, theta, mode, out, threads, calibration. Unknown keys
// are rejected. Values already set by the file are meant to be overridden
// by command-line flags afterwards (the caller applies flags second).
void apply_config_file(RunConfig& cfg, const std::string& path);

// Parse helpers shared by the file loader and the CLI flag handlers.
std::vector<double> parse_double_list(const std::string& text);
std::vector<long> parse_k_list(const std::string& text);  // "1,2,3" or "1..4"

// Cross-field checks plus per-subcommand grid caps; throws config_error
// naming the offending cap.
void validate_config(const RunConfig& cfg, const std::string& subcommand);

// FNV-1a over the run parameters that affect computed values. threads,
// output_dir and calibration_path are excluded so relocations and thread
// counts do not change the hash stamped into artifacts.
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace zm
