#include "see/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "see/channel.hpp"
#include "see/montecarlo.hpp"
#include "see/optimizer.hpp"

namespace see::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    std::string unknown;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) unknown += (unknown.empty() ? "" : ", ") + it.key();
    if (!unknown.empty()) fail("unknown keys in " + where + ": " + unknown);
}

double get_number(const json& obj, const std::string& key) {
    if (!obj.contains(key)) fail("missing required key: " + key);
    if (!obj[key].is_number()) fail("key " + key + " must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& key) {
    if (!obj.contains(key)) fail("missing required key: " + key);
    if (!obj[key].is_number_integer()) fail("key " + key + " must be an integer");
    return obj[key].get<int>();
}

// noise may be given in watts or via the *_dbm suffixed key, never both
double get_noise(const json& obj, const std::string& key) {
    const std::string dbm_key = key + "_dbm";
    const bool has_w = obj.contains(key), has_dbm = obj.contains(dbm_key);
    if (has_w && has_dbm) fail("unit conflict: both " + key + " and " + dbm_key + " given");
    if (has_w) return get_number(obj, key);
    if (has_dbm) return dbm_to_watts(get_number(obj, dbm_key));
    fail("missing required key: " + key + " (or " + dbm_key + ")");
}

std::vector<double> get_vector(const json& obj, const std::string& key, int len,
                               std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return std::vector<double>(static_cast<std::size_t>(len), *fallback);
        fail("missing required key: " + key);
    }
    const json& v = obj[key];
    if (v.is_number())
        return std::vector<double>(static_cast<std::size_t>(len), v.get<double>());
    if (!v.is_array()) fail("key " + key + " must be a number or array");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) fail("key " + key + " must contain numbers");
        out.push_back(x.get<double>());
    }
    if (out.size() != static_cast<std::size_t>(len))
        fail("key " + key + " must have length " + std::to_string(len));
    return out;
}

Mat get_matrix(const json& obj, const std::string& key, int rows, int cols) {
    const json& v = obj.at(key);
    if (!v.is_array()) fail("key " + key + " must be an array of rows");
    std::vector<std::vector<double>> data;
    for (const auto& row : v) {
        if (!row.is_array()) fail("key " + key + " rows must be arrays");
        data.emplace_back();
        for (const auto& x : row) data.back().push_back(x.get<double>());
    }
    Mat m = Mat::from_rows(data);
    if (m.rows() != static_cast<std::size_t>(rows) || m.cols() != static_cast<std::size_t>(cols))
        fail("key " + key + " must be " + std::to_string(rows) + "x" + std::to_string(cols));
    return m;
}

OutageScenario parse_scenario(const json& obj) {
    check_keys(obj,
               {"n_ports", "port_power", "circuit_power", "ps_bob", "ps_eve", "noise_bob",
                "noise_bob_dbm", "noise_eve", "noise_eve_dbm", "threshold", "n_eves"},
               "scenario");
    OutageScenario s;
    s.n_ports = get_int(obj, "n_ports");
    s.port_power = get_number(obj, "port_power");
    s.circuit_power = obj.contains("circuit_power") ? get_number(obj, "circuit_power") : 0.0;
    s.ps_bob = get_number(obj, "ps_bob");
    s.ps_eve = get_number(obj, "ps_eve");
    s.noise_bob = get_noise(obj, "noise_bob");
    s.noise_eve = get_noise(obj, "noise_eve");
    s.threshold = get_number(obj, "threshold");
    s.n_eves = obj.contains("n_eves") ? get_int(obj, "n_eves") : 1;
    s.validate();
    return s;
}

SystemConfig parse_system(const json& obj) {
    check_keys(obj,
               {"n_ports", "n_users", "n_eves", "circuit_power", "max_port_power", "ps_bob",
                "ps_eve", "conv_eff_bob", "conv_eff_eve", "min_harvest_bob", "eve_harvest_cap",
                "noise_bob", "noise_bob_dbm", "noise_eve", "noise_eve_dbm"},
               "system");
    SystemConfig c;
    c.n_ports = get_int(obj, "n_ports");
    c.n_users = get_int(obj, "n_users");
    c.n_eves = obj.contains("n_eves") ? get_int(obj, "n_eves") : 1;
    c.circuit_power = obj.contains("circuit_power") ? get_number(obj, "circuit_power") : 0.0;
    c.max_port_power = get_vector(obj, "max_port_power", c.n_ports);
    c.ps_bob = get_vector(obj, "ps_bob", c.n_users);
    c.ps_eve = get_number(obj, "ps_eve");
    c.conv_eff_bob = get_vector(obj, "conv_eff_bob", c.n_users);
    c.conv_eff_eve = get_number(obj, "conv_eff_eve");
    c.min_harvest_bob = get_vector(obj, "min_harvest_bob", c.n_users, 0.0);
    c.eve_harvest_cap = obj.contains("eve_harvest_cap")
                            ? get_number(obj, "eve_harvest_cap")
                            : std::numeric_limits<double>::infinity();
    c.noise_bob = get_noise(obj, "noise_bob");
    c.noise_eve = get_noise(obj, "noise_eve");
    c.validate();
    return c;
}

const std::set<std::string> kScenarioAxes = {"port_power",    "n_ports", "ps_bob",
                                             "ps_eve",        "threshold", "circuit_power",
                                             "n_eves"};
const std::set<std::string> kSystemAxes = {"max_port_power", "min_harvest_bob",
                                           "eve_harvest_cap", "circuit_power"};

Sweep parse_sweep(const json& obj, bool has_system) {
    check_keys(obj, {"axis", "values"}, "sweep");
    Sweep s;
    if (!obj.contains("axis") || !obj["axis"].is_string()) fail("sweep.axis must be a string");
    s.axis = obj["axis"].get<std::string>();
    const auto& axes = has_system ? kSystemAxes : kScenarioAxes;
    if (!axes.count(s.axis)) fail("unrecognized sweep axis: " + s.axis);
    if (!obj.contains("values") || !obj["values"].is_array())
        fail("sweep.values must be an array");
    for (const auto& v : obj["values"]) {
        if (!v.is_number()) fail("sweep.values must contain numbers");
        if ((s.axis == "n_ports" || s.axis == "n_eves") && !v.is_number_integer())
            fail("sweep axis " + s.axis + " requires integer values");
        s.values.push_back(v.get<double>());
    }
    return s;
}

OutageScenario apply_axis(OutageScenario s, const std::string& axis, double v) {
    if (axis == "port_power") s.port_power = v;
    else if (axis == "n_ports") s.n_ports = static_cast<int>(v);
    else if (axis == "ps_bob") s.ps_bob = v;
    else if (axis == "ps_eve") s.ps_eve = v;
    else if (axis == "threshold") s.threshold = v;
    else if (axis == "circuit_power") s.circuit_power = v;
    else if (axis == "n_eves") s.n_eves = static_cast<int>(v);
    s.validate();
    return s;
}

SystemConfig apply_axis(SystemConfig c, const std::string& axis, double v) {
    if (axis == "max_port_power")
        c.max_port_power.assign(c.max_port_power.size(), v);
    else if (axis == "min_harvest_bob")
        c.min_harvest_bob.assign(c.min_harvest_bob.size(), v);
    else if (axis == "eve_harvest_cap")
        c.eve_harvest_cap = v;
    else if (axis == "circuit_power")
        c.circuit_power = v;
    c.validate();
    return c;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_metadata(std::ostream& os, const ExperimentConfig& cfg) {
    os << "# see version " << kToolVersion << "\n";
    os << "# generator " << kGeneratorId << "\n";
    os << "# seed " << cfg.seed << "\n";
    os << "# trials " << cfg.trials << "\n";
}

ChannelRealization resolve_channel(const ExperimentConfig& cfg, const SystemConfig& sys) {
    if (cfg.gains_bob && cfg.gains_eve) {
        ChannelRealization ch;
        ch.gains_bob = *cfg.gains_bob;
        ch.gains_eve = *cfg.gains_eve;
        ch.validate(sys);
        return ch;
    }
    ChannelSampler sampler;
    sampler.seed = cfg.channel_seed.value_or(cfg.seed);
    return sample(sampler, sys, 0);
}

int run_optimize(const ExperimentConfig& cfg, std::ostream& os) {
    const SystemConfig& base = *cfg.system;
    std::vector<double> values = cfg.sweep ? cfg.sweep->values : std::vector<double>{0.0};
    const std::string axis = cfg.sweep ? cfg.sweep->axis : "";

    os << "sweep_axis,sweep_value,see,status,kkt_residual,total_power,bob_dominance_ok,seed\n";
    std::vector<std::string> rows(values.size());
    int code = kExitOk;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < values.size(); ++i) {
        SystemConfig sys = cfg.sweep ? apply_axis(base, axis, values[i]) : base;
        const ChannelRealization ch = resolve_channel(cfg, sys);
        SolveReport rep;
        try {
            rep = solve_p1(sys, ch, {});
        } catch (const NumericalError&) {
            rep.status = SolveStatus::numerical_failure;
        }
        std::ostringstream row;
        row << axis << ',' << (cfg.sweep ? fmt(values[i]) : "") << ',' << fmt(rep.see_value)
            << ',' << to_string(rep.status) << ',' << fmt(rep.kkt_residual) << ','
            << fmt(rep.allocation.total()) << ',' << (rep.bob_dominance_ok ? 1 : 0) << ','
            << cfg.seed << '\n';
        rows[i] = row.str();
        if (rep.status == SolveStatus::infeasible) {
#pragma omp critical
            code = std::max(code, kExitInfeasible);
        } else if (rep.status == SolveStatus::numerical_failure) {
#pragma omp critical
            code = std::max(code, kExitNumerical);
        }
    }
    for (const auto& r : rows) os << r;
    return code;
}

int run_scenario(const ExperimentConfig& cfg, std::ostream& os, bool with_mc) {
    const OutageScenario& base = *cfg.scenario;
    std::vector<double> values = cfg.sweep ? cfg.sweep->values : std::vector<double>{0.0};
    const std::string axis = cfg.sweep ? cfg.sweep->axis : "";

    os << "sweep_axis,sweep_value,closed_form,worst_case_quadrature,mc_value,mc_stderr,"
          "seed,trials\n";
    std::vector<std::string> rows(values.size());
    int code = kExitOk;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::ostringstream row;
        try {
            const OutageScenario s = cfg.sweep ? apply_axis(base, axis, values[i]) : base;
            const double cf = outage_closed_form(s);
            const double wc = outage_worst_case_quadrature(s);
            row << axis << ',' << (cfg.sweep ? fmt(values[i]) : "") << ',' << fmt(cf) << ','
                << fmt(wc) << ',';
            if (with_mc) {
                // common random numbers: the stream index is the grid index
                const McEstimate e = s.n_eves > 1
                                         ? mc_outage_worst_case(s, cfg.trials, cfg.seed + i)
                                         : mc_outage(s, cfg.trials, cfg.seed + i);
                row << fmt(e.value) << ',' << fmt(e.stderr_);
            } else {
                row << ',';
            }
            row << ',' << cfg.seed << ',' << (with_mc ? cfg.trials : 0) << '\n';
            rows[i] = row.str();
        } catch (const NumericalError&) {
#pragma omp critical
            code = std::max(code, kExitNumerical);
            rows[i] = axis + "," + fmt(values[i]) + ",numerical_failure,,,," +
                      std::to_string(cfg.seed) + ",0\n";
        }
    }
    for (const auto& r : rows) os << r;
    return code;
}

} // namespace

ExperimentConfig load_config_from_string(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("config parse error: ") + e.what());
    }
    check_keys(root,
               {"kind", "seed", "trials", "output_path", "system", "scenario", "sweep",
                "channel_seed", "gains_bob", "gains_eve"},
               "config");
    ExperimentConfig cfg;
    if (!root.contains("kind") || !root["kind"].is_string())
        fail("missing required key: kind");
    const std::string kind = root["kind"].get<std::string>();
    if (kind == "optimize") cfg.kind = Kind::optimize;
    else if (kind == "outage") cfg.kind = Kind::outage;
    else if (kind == "mc") cfg.kind = Kind::mc;
    else if (kind == "sweep") cfg.kind = Kind::sweep;
    else fail("kind must be one of optimize|outage|mc|sweep");

    if (root.contains("seed")) cfg.seed = root["seed"].get<std::uint64_t>();
    if (root.contains("trials")) {
        cfg.trials = root["trials"].get<long long>();
        if (cfg.trials < 1) fail("trials must be >= 1");
    }
    if (root.contains("output_path")) cfg.output_path = root["output_path"].get<std::string>();
    if (root.contains("system")) cfg.system = parse_system(root["system"]);
    if (root.contains("scenario")) cfg.scenario = parse_scenario(root["scenario"]);
    if (root.contains("channel_seed"))
        cfg.channel_seed = root["channel_seed"].get<std::uint64_t>();
    if (cfg.system && root.contains("gains_bob")) {
        cfg.gains_bob = get_matrix(root, "gains_bob", cfg.system->n_ports, cfg.system->n_users);
        cfg.gains_eve = get_matrix(root, "gains_eve", cfg.system->n_ports, cfg.system->n_eves);
    }
    if (root.contains("sweep")) cfg.sweep = parse_sweep(root["sweep"], cfg.system.has_value());

    if (cfg.kind == Kind::optimize && !cfg.system)
        fail("optimize config requires a system block");
    if ((cfg.kind == Kind::outage || cfg.kind == Kind::mc) && !cfg.scenario)
        fail("outage/mc config requires a scenario block");
    if (cfg.kind == Kind::sweep && !cfg.sweep) fail("sweep config requires a sweep block");
    if (cfg.kind == Kind::sweep && !cfg.system && !cfg.scenario)
        fail("sweep config requires a system or scenario block");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config_from_string(ss.str());
}

int run(const ExperimentConfig& config) {
    std::ostringstream body;
    write_metadata(body, config);
    int code = kExitOk;
    switch (config.kind) {
        case Kind::optimize:
            code = run_optimize(config, body);
            break;
        case Kind::outage:
            code = run_scenario(config, body, false);
            break;
        case Kind::mc:
            code = run_scenario(config, body, true);
            break;
        case Kind::sweep:
            code = config.system ? run_optimize(config, body)
                                 : run_scenario(config, body, true);
            break;
    }
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) fail("cannot write output file: " + config.output_path);
    out << body.str();
    return code;
}

VerifyReport verify(const ExperimentConfig& config, double alpha_corruption) {
    if (!config.scenario) fail("verify requires a scenario block");
    const OutageScenario& base = *config.scenario;
    std::vector<double> values =
        config.sweep ? config.sweep->values : std::vector<double>{base.port_power};
    const std::string axis = config.sweep ? config.sweep->axis : "port_power";

    VerifyReport rep;
    rep.pass = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const OutageScenario s = apply_axis(base, axis, values[i]);
        OutageScenario s_cf = s;
        s_cf.noise_bob *= alpha_corruption; // test hook, 1.0 normally
        const double cf = s.n_eves > 1 ? outage_worst_case_quadrature(s_cf)
                                       : outage_closed_form(s_cf);
        const McEstimate e = s.n_eves > 1
                                 ? mc_outage_worst_case(s, config.trials, config.seed + i)
                                 : mc_outage(s, config.trials, config.seed + i);
        const double dev = std::abs(cf - e.value);
        const double units = e.stderr_ > 0.0 ? dev / e.stderr_ : (dev > 0.0 ? 1e12 : 0.0);
        const double tol = std::max(3.0 * e.stderr_, 1e-4);
        if (3.0 * e.stderr_ > 0.01) rep.stderr_dominates_tolerance = true;
        if (units > rep.max_dev_stderr_units) {
            rep.max_dev_stderr_units = units;
            rep.max_abs_dev = dev;
            rep.worst_point = axis + "=" + fmt(values[i]);
        }
        std::ostringstream line;
        line << axis << "=" << fmt(values[i]) << ": closed_form=" << fmt(cf)
             << " mc=" << fmt(e.value) << " stderr=" << fmt(e.stderr_)
             << " dev=" << fmt(dev) << (dev <= tol ? " ok" : " FAIL");
        rep.lines.push_back(line.str());
        if (dev > tol) rep.pass = false;
    }
    return rep;
}

} // namespace see::cli
