#include "pfrac/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pfrac {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ParseError("invalid value '" + value + "' for key '" + key + "'");
    }
    if (pos != value.size())
        throw ParseError("invalid value '" + value + "' for key '" + key + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(value, &pos);
    } catch (const std::exception&) {
        throw ParseError("invalid value '" + value + "' for key '" + key + "'");
    }
    if (pos != value.size())
        throw ParseError("invalid value '" + value + "' for key '" + key + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ParseError("invalid value '" + value + "' for key '" + key + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) parts.push_back(item);
    return parts;
}

std::string mode_summary(const StepSummary& s) {
    std::string out;
    auto append = [&out](const char* name, int count) {
        if (count == 0) return;
        if (!out.empty()) out += ';';
        out += name;
        out += ':';
        out += std::to_string(count);
    };
    append("AA", s.n_aa);
    append("OR", s.n_or);
    append("Plain", s.n_plain);
    return out;
}

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    return os;
}

}  // namespace

SolverConfig RunConfig::solver_config() const {
    SolverConfig cfg;
    cfg.tol_res_abs = tol_res_abs;
    cfg.tol_res_rel = tol_res_rel;
    cfg.tol_inc_abs = tol_inc_abs;
    cfg.tol_inc_rel = tol_inc_rel;
    cfg.tol_inner = tol_inner;
    cfg.max_iter = max_iter;
    cfg.depth_m = depth_m;
    cfg.omega = omega;
    cfg.n_switch = n_switch;
    cfg.mode = accel_mode();
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

AccelMode RunConfig::accel_mode() const {
    if (mode == "plain") return AccelMode::Plain;
    if (mode == "anderson") return AccelMode::AndersonOnly;
    if (mode == "relax") return AccelMode::RelaxOnly;
    if (mode == "combined") return AccelMode::Combined;
    throw ParseError("invalid value '" + mode + "' for key 'mode'");
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "case") cfg.case_name = value;
    else if (key == "profile") cfg.profile = value;
    else if (key == "mode") cfg.mode = value;
    else if (key == "depth") cfg.depth_m = parse_int(key, value);
    else if (key == "omega") cfg.omega = parse_double(key, value);
    else if (key == "n_switch") cfg.n_switch = parse_int(key, value);
    else if (key == "max_iter") cfg.max_iter = parse_int(key, value);
    else if (key == "tol_res_abs") cfg.tol_res_abs = parse_double(key, value);
    else if (key == "tol_res_rel") cfg.tol_res_rel = parse_double(key, value);
    else if (key == "tol_inc_abs") cfg.tol_inc_abs = parse_double(key, value);
    else if (key == "tol_inc_rel") cfg.tol_inc_rel = parse_double(key, value);
    else if (key == "tol_inner") cfg.tol_inner = parse_double(key, value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "vtk") cfg.vtk = parse_bool(key, value);
    else if (key == "sweep_depth") {
        cfg.sweep_depth.clear();
        for (const auto& item : split(value, ',')) cfg.sweep_depth.push_back(parse_int(key, item));
    } else if (key == "sweep_omega") {
        cfg.sweep_omega.clear();
        for (const auto& item : split(value, ','))
            cfg.sweep_omega.push_back(parse_double(key, item));
    } else {
        throw ParseError("unknown configuration key '" + key + "'");
    }
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot read config file '" + path + "'");
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key=value");
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        apply_override(cfg, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return cfg;
}

std::vector<RunConfig> expand_sweep(const RunConfig& cfg) {
    if (cfg.sweep_depth.empty() && cfg.sweep_omega.empty()) return {cfg};
    const std::vector<int> depths = cfg.sweep_depth.empty() ? std::vector<int>{cfg.depth_m}
                                                            : cfg.sweep_depth;
    const std::vector<double> omegas = cfg.sweep_omega.empty() ? std::vector<double>{cfg.omega}
                                                               : cfg.sweep_omega;
    std::vector<RunConfig> specs;
    for (int d : depths)
        for (double w : omegas) {
            RunConfig spec = cfg;
            spec.depth_m = d;
            spec.omega = w;
            spec.sweep_depth.clear();
            spec.sweep_omega.clear();
            specs.push_back(spec);
        }
    return specs;
}

void write_iteration_csv(const SimulationReport& report, const std::string& path) {
    auto os = open_or_throw(path);
    os << "load_step,iterations,converged,mode_summary\n";
    int total = 0;
    for (const auto& s : report.steps) {
        os << s.step << ',' << s.iterations << ',' << (s.converged ? 1 : 0) << ','
           << mode_summary(s) << '\n';
        total += s.iterations;
    }
    os << "TOTAL," << total << ",,\n";
}

void write_load_csv(const SimulationReport& report, const std::string& path) {
    auto os = open_or_throw(path);
    os << "load_step,applied_displacement,tau_x,tau_y\n";
    for (const auto& s : report.steps)
        os << s.step << ',' << fmt(s.applied_displacement) << ',' << fmt(s.tau_x) << ','
           << fmt(s.tau_y) << '\n';
}

void write_residual_csv(const SimulationReport& report, const std::string& path) {
    auto os = open_or_throw(path);
    os << "load_step,iter,res_u_norm,mode\n";
    for (const auto& r : report.records)
        os << r.load_step << ',' << r.iter << ',' << fmt(r.res_u_norm) << ','
           << to_string(r.mode) << '\n';
}

void write_sweep_summary_csv(const std::vector<SweepEntry>& entries, const std::string& path) {
    auto os = open_or_throw(path);
    os << "depth,omega,total_iterations,all_converged\n";
    for (const auto& e : entries)
        os << e.depth << ',' << fmt(e.omega) << ',' << e.total_iterations << ','
           << (e.all_converged ? 1 : 0) << '\n';
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read '" + path + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        rows.push_back(split(line, ','));
    }
    return rows;
}

}  // namespace pfrac
