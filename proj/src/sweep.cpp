#include "cka/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cka {
namespace {

// All floating-point output goes through this formatting so CSV and JSON
// carry the same 12-significant-digit values.
std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round12(double v) { return std::strtod(fmt12(v).c_str(), nullptr); }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid value for " + key + ": '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid value for " + key + ": '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid value for " + key + ": '" + value + "'");
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

nlohmann::json config_json(const SweepConfig& cfg) {
    nlohmann::json j;
    j["parties"] = cfg.parties;
    j["modes_exp"] = cfg.modes_exp;
    j["loss_start"] = round12(cfg.loss_start);
    j["loss_stop"] = round12(cfg.loss_stop);
    j["loss_step"] = round12(cfg.loss_step);
    nlohmann::json darks = nlohmann::json::array();
    for (double d : cfg.dark_count) darks.push_back(round12(d));
    j["dark_count"] = darks;
    j["misalignment"] = round12(cfg.misalignment);
    j["mode"] = cfg.mode;
    j["cutoff"] = cfg.cutoff;
    j["decoy_high"] = round12(cfg.decoy_high);
    j["decoy_low"] = round12(cfg.decoy_low);
    j["quad_nodes"] = cfg.quad_nodes;
    j["seed"] = cfg.seed;
    j["alpha_min"] = round12(cfg.alpha_min);
    j["alpha_max"] = round12(cfg.alpha_max);
    j["alpha_grid"] = cfg.alpha_grid;
    j["out"] = cfg.out;
    j["format"] = cfg.format;
    return j;
}

}  // namespace

void SweepConfig::validate() const {
    if (parties < 2) throw ConfigError("parties must be at least 2");
    if (modes_exp < 1 || modes_exp > 8) throw ConfigError("modes_exp must be in [1, 8]");
    if ((1 << modes_exp) < parties)
        throw ConfigError("detector count 2^modes_exp must be at least the party count");
    if (!(loss_step > 0.0)) throw ConfigError("loss_step must be positive");
    if (loss_stop < loss_start) throw ConfigError("loss range is empty");
    if (loss_start < 0.0) throw ConfigError("loss must be non-negative");
    if (dark_count.empty()) throw ConfigError("dark_count needs at least one entry");
    for (double d : dark_count)
        if (d < 0.0 || d >= 1.0) throw ConfigError("dark counts must lie in [0, 1)");
    if (misalignment < 0.0 || misalignment >= 1.0)
        throw ConfigError("misalignment fraction must lie in [0, 1)");
    if (mode != "exact-yields" && mode != "two-decoy")
        throw ConfigError("mode must be 'exact-yields' or 'two-decoy'");
    if (cutoff < 0 || cutoff % 2 != 0) throw ConfigError("cutoff must be even and non-negative");
    if (!(decoy_high > decoy_low) || decoy_low < 0.0)
        throw ConfigError("decoy intensities must satisfy decoy_high > decoy_low >= 0");
    if (quad_nodes < 4) throw ConfigError("quad_nodes must be at least 4");
    if (!(alpha_max > alpha_min) || alpha_min < 0.0)
        throw ConfigError("alpha search range must satisfy 0 <= alpha_min < alpha_max");
    if (alpha_grid < 2) throw ConfigError("alpha_grid must be at least 2");
    if (out.empty()) throw ConfigError("output path is empty");
    if (format != "csv" && format != "json") throw ConfigError("format must be 'csv' or 'json'");
}

int SweepConfig::loss_points() const {
    return int(std::floor((loss_stop - loss_start) / loss_step + 1e-9)) + 1;
}

double db_to_eta(double loss_db) {
    if (loss_db < 0.0) throw std::domain_error("loss must be non-negative");
    return std::pow(10.0, -loss_db / 20.0);
}

std::vector<SweepResult> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const double angle = std::asin(std::sqrt(cfg.misalignment));
    const YieldMode mode =
        cfg.mode == "exact-yields" ? YieldMode::exact_yields : YieldMode::two_decoy;
    const int n_points = cfg.loss_points();

    std::vector<SweepResult> results;
    results.reserve(cfg.dark_count.size());
    for (double dark : cfg.dark_count) {
        SweepResult res;
        res.config = cfg;
        res.dark_count = dark;
        res.rows.resize(size_t(n_points));
        // Each point is a pure function of the config, so rows may be
        // computed in any order; results land at their loss index.
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n_points; ++i) {
            const double db = cfg.loss_start + double(i) * cfg.loss_step;
            SweepRow row;
            row.point.loss_db = db;
            try {
                ProtocolParams p;
                p.n_parties = cfg.parties;
                p.s = cfg.modes_exp;
                p.eta = db_to_eta(db);
                p.p_dark = dark;
                p.theta = angle;
                p.phi = angle;
                p.beta0 = cfg.decoy_high;
                p.beta1 = cfg.decoy_low;
                p.cutoff = cfg.cutoff;

                QuadratureSpec quad;
                quad.nodes = cfg.quad_nodes;
                quad.mc_seed = cfg.seed;

                SearchSpec search;
                search.alpha_min = cfg.alpha_min;
                search.alpha_max = cfg.alpha_max;
                search.grid_points = cfg.alpha_grid;

                const OptResult opt = optimize_alpha(p, mode, quad, search);
                row.point.eta = p.eta;
                row.point.alpha_opt = opt.alpha_opt;
                row.point.pr_kg = opt.at_opt.pr_kg;
                row.point.q_x = opt.at_opt.q_x;
                row.point.q_z_bar = opt.at_opt.q_z_bar;
                row.point.rate = opt.at_opt.rate;
                row.point.r1 = multicast_bound_star(p.eta);
                row.point.r2 = multicast_bound_full(p.eta, cfg.parties);
                row.status = opt.no_key ? "no_key" : "ok";
            } catch (const std::exception& e) {
                row.point = KeyRatePoint{};
                row.point.loss_db = db;
                std::string msg = e.what();
                std::replace(msg.begin(), msg.end(), ',', ';');  // keep the CSV parseable
                row.status = "error: " + msg;
            }
            res.rows[size_t(i)] = row;
        }
        results.push_back(std::move(res));
    }
    return results;
}

std::string render_csv(const SweepResult& result) {
    std::string out = "loss_db,eta,alpha_opt,pr_kg,qber,qz_bar,rate,r1,r2,status\n";
    for (const SweepRow& row : result.rows) {
        const KeyRatePoint& k = row.point;
        out += fmt12(k.loss_db) + ',' + fmt12(k.eta) + ',' + fmt12(k.alpha_opt) + ',' +
               fmt12(k.pr_kg) + ',' + fmt12(k.q_x) + ',' + fmt12(k.q_z_bar) + ',' +
               fmt12(k.rate) + ',' + fmt12(k.r1) + ',' + fmt12(k.r2) + ',' + row.status + '\n';
    }
    return out;
}

std::string render_json(const SweepResult& result) {
    nlohmann::json j;
    j["provenance"]["version"] = kVersion;
    j["provenance"]["seed"] = result.config.seed;
    j["provenance"]["dark_count"] = round12(result.dark_count);
    j["provenance"]["config"] = config_json(result.config);
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepRow& row : result.rows) {
        const KeyRatePoint& k = row.point;
        nlohmann::json r;
        r["loss_db"] = round12(k.loss_db);
        r["eta"] = round12(k.eta);
        r["alpha_opt"] = round12(k.alpha_opt);
        r["pr_kg"] = round12(k.pr_kg);
        r["qber"] = round12(k.q_x);
        r["qz_bar"] = round12(k.q_z_bar);
        r["rate"] = round12(k.rate);
        r["r1"] = round12(k.r1);
        r["r2"] = round12(k.r2);
        r["status"] = row.status;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

void emit(const SweepResult& result, const std::string& format, const std::string& path) {
    std::string content;
    if (format == "csv") {
        content = render_csv(result);
    } else if (format == "json") {
        content = render_json(result);
    } else {
        throw std::domain_error("format must be 'csv' or 'json'");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

std::string output_path_for(const SweepConfig& cfg, std::size_t dark_index) {
    if (dark_index >= cfg.dark_count.size())
        throw std::out_of_range("dark-count index out of range");
    if (cfg.dark_count.size() == 1) return cfg.out;
    const std::string suffix = "_pd" + fmt12(cfg.dark_count[dark_index]);
    const auto slash = cfg.out.find_last_of('/');
    const auto dot = cfg.out.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return cfg.out + suffix;
    return cfg.out.substr(0, dot) + suffix + cfg.out.substr(dot);
}

SweepConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    SweepConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

void apply_config_entry(SweepConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "parties") cfg.parties = parse_int(key, value);
    else if (key == "modes_exp") cfg.modes_exp = parse_int(key, value);
    else if (key == "loss_start") cfg.loss_start = parse_double(key, value);
    else if (key == "loss_stop") cfg.loss_stop = parse_double(key, value);
    else if (key == "loss_step") cfg.loss_step = parse_double(key, value);
    else if (key == "dark_count") cfg.dark_count = parse_double_list(key, value);
    else if (key == "misalignment") cfg.misalignment = parse_double(key, value);
    else if (key == "mode") cfg.mode = value;
    else if (key == "cutoff") cfg.cutoff = parse_int(key, value);
    else if (key == "decoy_high") cfg.decoy_high = parse_double(key, value);
    else if (key == "decoy_low") cfg.decoy_low = parse_double(key, value);
    else if (key == "quad_nodes") cfg.quad_nodes = parse_int(key, value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "alpha_min") cfg.alpha_min = parse_double(key, value);
    else if (key == "alpha_max") cfg.alpha_max = parse_double(key, value);
    else if (key == "alpha_grid") cfg.alpha_grid = parse_int(key, value);
    else if (key == "out") cfg.out = value;
    else if (key == "format") cfg.format = value;
    else throw ConfigError("unknown config key: " + key);
}

}  // namespace cka
