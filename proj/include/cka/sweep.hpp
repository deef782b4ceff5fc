#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cka/keyrate.hpp"

namespace cka {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// One sweep description. Field names double as the config-file keys.
struct SweepConfig {
    int parties = 3;
    int modes_exp = 2;  // detector count = 2^modes_exp
    double loss_start = 20.0;
    double loss_stop = 80.0;
    double loss_step = 1.0;
    std::vector<double> dark_count = {1e-10};  // one output file per entry
    double misalignment = 0.02;  // fraction; the angle is asin(sqrt(fraction))
    std::string mode = "two-decoy";  // or "exact-yields"
    int cutoff = 4;
    double decoy_high = 0.5;
    double decoy_low = 0.0;
    int quad_nodes = 32;
    std::uint64_t seed = 1;  // Monte Carlo seed (forwarded to the integrator)
    double alpha_min = 0.0;
    double alpha_max = 1.2;
    int alpha_grid = 40;
    std::string out = "sweep.csv";
    std::string format = "csv";  // or "json"

    void validate() const;  // throws ConfigError
    int loss_points() const;
};

struct SweepRow {
    KeyRatePoint point;
    std::string status;  // "ok", "no_key", or "error: ..."
};

// Rows for one dark-count value, plus the provenance needed to reproduce
// them byte for byte.
struct SweepResult {
    SweepConfig config;
    double dark_count = 0.0;
    std::vector<SweepRow> rows;
};

// Party-to-relay transmittance from party-to-party loss: the relay sits
// halfway, so eta = 10^(-loss_db/20) and the full party-to-party channel
// has transmittance eta^2. Throws std::domain_error on negative input.
double db_to_eta(double loss_db);

// Runs the sweep for every dark-count entry. Loss points are evaluated by
// a worker pool; rows come back in loss order and are deterministic for a
// fixed config and seed regardless of worker count. Per-point failures are
// recorded in the row's status and never abort the sweep.
std::vector<SweepResult> run_sweep(const SweepConfig& cfg);

// CSV with exactly these columns:
//   loss_db,eta,alpha_opt,pr_kg,qber,qz_bar,rate,r1,r2,status
// Floats carry 12 significant digits.
std::string render_csv(const SweepResult& result);

// JSON mirror of the rows plus a provenance header (config echo, code
// version, seed, dark count). Parsing and re-rendering is byte-stable.
std::string render_json(const SweepResult& result);

// Writes the chosen rendering; I/O failures are reported with the path.
void emit(const SweepResult& result, const std::string& format, const std::string& path);

// Output path for the i-th dark-count entry: the configured path as-is for
// a single entry, otherwise suffixed with the dark-count value.
std::string output_path_for(const SweepConfig& cfg, std::size_t dark_index);

// Flat key-value config file ("key = value", '#' comments). Unknown keys
// are hard errors so a typo cannot silently drop a physics parameter.
SweepConfig load_config_file(const std::string& path);

// Applies one key-value pair; shared by the file loader. Throws
// ConfigError on unknown keys or unparsable values.
void apply_config_entry(SweepConfig& cfg, const std::string& key, const std::string& value);

}  // namespace cka
