#include "sphereqed/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sphereqed/errors.hpp"
#include "sphereqed/textio.hpp"

namespace sqed::cli {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0;
    size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for " + key + ": '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for " + key + ": '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("invalid boolean for " + key + ": '" + value + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

std::string axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::frequency: return "frequency";
        case SweepAxis::distance: return "distance";
        case SweepAxis::time: return "time";
    }
    return "frequency";
}

}  // namespace

void apply_override(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "material.omega_T") c.material.omega_T = parse_double(key, value);
    else if (key == "material.omega_P") c.material.omega_P = parse_double(key, value);
    else if (key == "material.gamma") c.material.gamma = parse_double(key, value);
    else if (key == "geometry.radius") c.geometry.radius = parse_double(key, value);
    else if (key == "geometry.atom_distance") c.geometry.atom_distance = parse_double(key, value);
    else if (key == "geometry.second_atom_distance")
        c.geometry.second_atom_distance = parse_double(key, value);
    else if (key == "atom.omega_A") c.atom_omega = parse_double(key, value);
    else if (key == "atom.gamma0") c.atom_gamma0 = parse_double(key, value);
    else if (key == "sweep.axis") {
        if (value == "frequency") c.sweep_axis = SweepAxis::frequency;
        else if (value == "distance") c.sweep_axis = SweepAxis::distance;
        else if (value == "time") c.sweep_axis = SweepAxis::time;
        else throw ConfigError("unknown sweep.axis '" + value + "'");
    }
    else if (key == "sweep.start") c.sweep_start = parse_double(key, value);
    else if (key == "sweep.stop") c.sweep_stop = parse_double(key, value);
    else if (key == "sweep.points") c.sweep_points = parse_int(key, value);
    else if (key == "scan.l_min") c.scan.l_min = parse_int(key, value);
    else if (key == "scan.l_max") c.scan.l_max = parse_int(key, value);
    else if (key == "scan.window_lo") c.scan.omega_lo = parse_double(key, value);
    else if (key == "scan.window_hi") c.scan.omega_hi = parse_double(key, value);
    else if (key == "scan.points") c.scan.points = parse_int(key, value);
    else if (key == "scan.prominence") c.scan.prominence = parse_double(key, value);
    else if (key == "scan.min_quality") c.scan.min_quality = parse_double(key, value);
    else if (key == "scan.min_response") c.scan.min_response = parse_double(key, value);
    else if (key == "strong.dwc_over_omega_pm") c.strong_ratio_pm = parse_double(key, value);
    else if (key == "strong.pi_dwc_over_omega_d") c.strong_ratio_donor = parse_double(key, value);
    else if (key == "strong.omega_d_over_omega")
        c.strong_donor_rabi_ratio = parse_double(key, value);
    else if (key == "strong.physical") c.strong_physical = parse_bool(key, value);
    else if (key == "series.l_max") c.series_l_max = parse_int(key, value);
    else if (key == "series.l_max_cap") c.series_l_max_cap = parse_int(key, value);
    else if (key == "bell.gamma_list") c.bell_gamma_list = parse_double_list(key, value);
    else if (key == "bell.theta") c.bell_theta = parse_double(key, value);
    else if (key == "bell.scan_lo") c.bell_scan_lo = parse_double(key, value);
    else if (key == "bell.scan_hi") c.bell_scan_hi = parse_double(key, value);
    else if (key == "bell.scan_points") c.bell_scan_points = parse_int(key, value);
    else if (key == "tripartite.gamma_ab") c.tripartite_gamma_ab = parse_double(key, value);
    else if (key == "threads") c.threads = parse_int(key, value);
    else if (key == "output.precision") c.precision = parse_int(key, value);
    else if (key == "output.path") c.out_path = value;
    else if (key == "output.trajectory_path") c.trajectory_path = value;
    else if (key == "output.density_path") c.density_path = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
    material.validate();
    if (material.gamma < 0.0) throw ConfigError("material.gamma must be >= 0");
    geometry.validate();
    if (atom_omega <= 0.0) throw ConfigError("atom.omega_A must be positive");
    if (atom_gamma0 <= 0.0) throw ConfigError("atom.gamma0 must be positive");
    if (sweep_points < 2) throw ConfigError("sweep.points must be >= 2");
    if (!(sweep_start < sweep_stop)) throw ConfigError("sweep.start must be < sweep.stop");
    if (sweep_axis == SweepAxis::frequency && sweep_start <= 0.0)
        throw ConfigError("frequency sweep must stay positive");
    if (precision < 1 || precision > 17) throw ConfigError("output.precision out of range");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (strong_ratio_pm <= 0.0 || strong_ratio_donor <= 0.0)
        throw ConfigError("strong-coupling ratios must be positive");
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
    using textio::format_sig;
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("material.omega_T", format_sig(material.omega_T));
    kv.emplace_back("material.omega_P", format_sig(material.omega_P));
    kv.emplace_back("material.gamma", format_sig(material.gamma));
    kv.emplace_back("geometry.radius", format_sig(geometry.radius));
    kv.emplace_back("geometry.atom_distance", format_sig(geometry.atom_distance));
    kv.emplace_back("geometry.second_atom_distance", format_sig(geometry.distance_b()));
    kv.emplace_back("atom.omega_A", format_sig(atom_omega));
    kv.emplace_back("atom.gamma0", format_sig(atom_gamma0));
    kv.emplace_back("sweep.axis", axis_name(sweep_axis));
    kv.emplace_back("sweep.start", format_sig(sweep_start));
    kv.emplace_back("sweep.stop", format_sig(sweep_stop));
    kv.emplace_back("sweep.points", textio::format_int(sweep_points));
    kv.emplace_back("scan.l_min", textio::format_int(scan.l_min));
    kv.emplace_back("scan.l_max", textio::format_int(scan.l_max));
    kv.emplace_back("scan.window_lo", format_sig(scan.omega_lo));
    kv.emplace_back("scan.window_hi", format_sig(scan.omega_hi));
    kv.emplace_back("scan.points", textio::format_int(scan.points));
    kv.emplace_back("scan.prominence", format_sig(scan.prominence));
    kv.emplace_back("scan.min_quality", format_sig(scan.min_quality));
    kv.emplace_back("scan.min_response", format_sig(scan.min_response));
    kv.emplace_back("strong.dwc_over_omega_pm", format_sig(strong_ratio_pm));
    kv.emplace_back("strong.pi_dwc_over_omega_d", format_sig(strong_ratio_donor));
    kv.emplace_back("strong.omega_d_over_omega", format_sig(strong_donor_rabi_ratio));
    kv.emplace_back("strong.physical", strong_physical ? "true" : "false");
    kv.emplace_back("series.l_max", textio::format_int(series_l_max));
    kv.emplace_back("series.l_max_cap", textio::format_int(series_l_max_cap));
    std::string gammas;
    for (size_t i = 0; i < bell_gamma_list.size(); ++i) {
        if (i) gammas += ",";
        gammas += format_sig(bell_gamma_list[i]);
    }
    kv.emplace_back("bell.gamma_list", gammas);
    kv.emplace_back("bell.theta", format_sig(bell_theta));
    kv.emplace_back("bell.scan_lo", format_sig(bell_scan_lo));
    kv.emplace_back("bell.scan_hi", format_sig(bell_scan_hi));
    kv.emplace_back("bell.scan_points", textio::format_int(bell_scan_points));
    kv.emplace_back("tripartite.gamma_ab", format_sig(tripartite_gamma_ab));
    kv.emplace_back("output.precision", textio::format_int(precision));
    std::sort(kv.begin(), kv.end());
    return kv;
}

std::string RunConfig::fingerprint(const std::string& scope) const {
    std::string fp = scope;
    for (const auto& [k, v] : resolved()) {
        // Threads and output settings do not change results.
        if (k.rfind("output.", 0) == 0) continue;
        fp += ";" + k + "=" + v;
    }
    return fp;
}

RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides) {
    RunConfig c;
    if (path) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("cannot open config file: " + *path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(*path + ":" + std::to_string(line_no) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError(*path + ":" + std::to_string(line_no) + ": empty key");
            apply_override(c, key, value);
        }
    }
    for (const auto& ov : overrides) {
        const size_t eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + ov + "'");
        apply_override(c, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    c.validate();
    return c;
}

}  // namespace sqed::cli
