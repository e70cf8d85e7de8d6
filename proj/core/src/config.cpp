#include "chiralpoint/config.hpp"

#include "chiralpoint/errors.hpp"
#include "chiralpoint/export.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#ifndef CHIRALPOINT_PRESET_DIR
#define CHIRALPOINT_PRESET_DIR "presets"
#endif

namespace chiralpoint
{

namespace
{

using nlohmann::json;
namespace fs = std::filesystem;

// Finds where a key was written, for diagnostics.
struct Sources
{
    std::vector<std::pair<std::string, std::string>> texts; // (name, text)

    std::string locate(const std::string& key) const
    {
        const std::string needle = "\"" + key + "\"";
        for (const auto& [name, text] : texts) {
            const auto pos = text.find(needle);
            if (pos != std::string::npos) {
                const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
                return name + ":" + std::to_string(line);
            }
        }
        return texts.empty() ? std::string("<config>") : texts.front().first;
    }
};

class Reader
{
public:
    Reader(const json& obj, std::string section, const Sources& src, std::set<std::string> allowed)
        : obj_(obj), section_(std::move(section)), src_(src), allowed_(std::move(allowed))
    {
        if (!obj_.is_object()) {
            fail(ErrorCode::SchemaError, src_.locate(section_) + ": '" + section_ + "' must be an object");
        }
        for (const auto& [k, v] : obj_.items()) {
            if (!allowed_.count(k)) {
                std::string list;
                for (const auto& a : allowed_) {
                    list += (list.empty() ? "" : ", ") + a;
                }
                fail(ErrorCode::SchemaError,
                     src_.locate(k) + ": unknown key '" + path(k) + "' (allowed: " + list + ")");
            }
        }
    }

    bool has(const std::string& k) const { return obj_.contains(k); }

    double number(const std::string& k) const
    {
        if (!has(k)) {
            fail(ErrorCode::SchemaError, src_.locate(section_) + ": missing required key '" + path(k) + "'");
        }
        const json& v = obj_.at(k);
        if (!v.is_number()) {
            fail(ErrorCode::SchemaError, src_.locate(k) + ": '" + path(k) + "' must be a number");
        }
        return v.get<double>();
    }

    double number(const std::string& k, double fallback) const { return has(k) ? number(k) : fallback; }

    std::size_t count(const std::string& k, std::size_t fallback) const
    {
        if (!has(k)) {
            return fallback;
        }
        const json& v = obj_.at(k);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            fail(ErrorCode::SchemaError, src_.locate(k) + ": '" + path(k) + "' must be a non-negative integer");
        }
        return v.get<std::size_t>();
    }

    bool boolean(const std::string& k, bool fallback) const
    {
        if (!has(k)) {
            return fallback;
        }
        const json& v = obj_.at(k);
        if (!v.is_boolean()) {
            fail(ErrorCode::SchemaError, src_.locate(k) + ": '" + path(k) + "' must be true or false");
        }
        return v.get<bool>();
    }

    std::string text(const std::string& k, const std::string& fallback) const
    {
        if (!has(k)) {
            return fallback;
        }
        const json& v = obj_.at(k);
        if (!v.is_string()) {
            fail(ErrorCode::SchemaError, src_.locate(k) + ": '" + path(k) + "' must be a string");
        }
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& k) const
    {
        std::vector<double> out;
        if (!has(k)) {
            return out;
        }
        const json& v = obj_.at(k);
        if (!v.is_array()) {
            fail(ErrorCode::SchemaError, src_.locate(k) + ": '" + path(k) + "' must be an array of numbers");
        }
        for (const auto& x : v) {
            if (!x.is_number()) {
                fail(ErrorCode::SchemaError, src_.locate(k) + ": '" + path(k) + "' must be an array of numbers");
            }
            out.push_back(x.get<double>());
        }
        return out;
    }

    std::vector<std::string> strings(const std::string& k) const
    {
        std::vector<std::string> out;
        const json& v = obj_.at(k);
        if (!v.is_array()) {
            fail(ErrorCode::SchemaError, src_.locate(k) + ": '" + path(k) + "' must be an array of strings");
        }
        for (const auto& x : v) {
            if (!x.is_string()) {
                fail(ErrorCode::SchemaError, src_.locate(k) + ": '" + path(k) + "' must be an array of strings");
            }
            out.push_back(x.get<std::string>());
        }
        return out;
    }

    Reader sub(const std::string& k, std::set<std::string> allowed) const
    {
        return Reader(obj_.at(k), path(k), src_, std::move(allowed));
    }

    const json& raw(const std::string& k) const { return obj_.at(k); }
    const Sources& sources() const { return src_; }
    std::string path(const std::string& k) const { return section_.empty() ? k : section_ + "." + k; }

private:
    const json& obj_;
    std::string section_;
    const Sources& src_;
    std::set<std::string> allowed_;
};

json parse_json(const std::string& text, const std::string& source)
{
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        fail(ErrorCode::ParseError, source + ": empty configuration");
    }
    try {
        return json::parse(text);
    }
    catch (const json::parse_error& e) {
        const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
        fail(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + e.what());
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::IoError, "cannot read '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

SweepSpec read_sweep(const Reader& r, const RunSpec& run)
{
    SweepSpec s;
    s.observable = parse_observable(r.text("observable", "PurcellMax"));
    s.scan = run.scan;
    s.budget = run.budget;
    s.phi_points = run.phi_points;
    s.points = run.points;
    if (!r.has("axes") || !r.raw("axes").is_array()) {
        fail(ErrorCode::SchemaError, r.sources().locate("sweep") + ": 'run.sweep.axes' must be an array");
    }
    const json& axes = r.raw("axes");
    for (std::size_t i = 0; i < axes.size(); ++i) {
        Reader a(axes[i], r.path("axes") + "[" + std::to_string(i) + "]", r.sources(),
                 {"path", "min", "max", "points", "scale", "values"});
        SweepAxis ax;
        ax.path = a.text("path", "");
        ax.values = a.numbers("values");
        if (ax.values.empty()) {
            ax.lo = a.number("min");
            ax.hi = a.number("max");
            ax.points = a.count("points", 2);
        }
        const std::string scale = a.text("scale", "linear");
        if (scale != "linear" && scale != "log") {
            fail(ErrorCode::SchemaError, r.sources().locate("scale") + ": scale must be 'linear' or 'log'");
        }
        ax.log = scale == "log";
        s.axes.push_back(ax);
    }
    validate_spec(s);
    return s;
}

FitSpec read_fit(const Reader& r)
{
    FitSpec f;
    f.data_path = r.text("data", "");
    const std::string q = r.text("quantity", "purcell");
    if (q == "purcell") {
        f.quantity = FitQuantity::Purcell;
    }
    else if (q == "J") {
        f.quantity = FitQuantity::Spectral;
    }
    else {
        fail(ErrorCode::SchemaError, r.sources().locate("quantity") + ": quantity must be 'purcell' or 'J'");
    }
    if (r.has("free")) {
        f.free.clear();
        for (const auto& s : r.strings("free")) {
            f.free.push_back(parse_free_parameter(s));
        }
    }
    if (r.has("g1_bracket")) {
        const auto b = r.numbers("g1_bracket");
        if (b.size() != 2) {
            fail(ErrorCode::SchemaError, r.sources().locate("g1_bracket") + ": g1_bracket needs [min, max]");
        }
        f.options.g1_min = b[0];
        f.options.g1_max = b[1];
    }
    f.options.starts = r.count("starts", f.options.starts);
    f.options.seed = r.count("seed", f.options.seed);
    if (r.has("synthetic_g1")) {
        f.synthetic_g1 = r.number("synthetic_g1");
    }
    f.synthetic_noise = r.number("synthetic_noise", 0.0);
    f.synthetic_seed = r.count("synthetic_seed", f.synthetic_seed);
    f.synthetic_points = r.count("synthetic_points", f.synthetic_points);
    if (f.data_path.empty() && !f.synthetic_g1) {
        fail(ErrorCode::SchemaError, r.sources().locate("fit") + ": fit needs 'data' or 'synthetic_g1'");
    }
    return f;
}

LoadedConfig interpret(const json& root, const Sources& src)
{
    Reader top(root, "", src, {"description", "plasmon", "photon", "mirror", "emitter", "couplings", "run"});
    LoadedConfig c;
    c.description = top.text("description", "");
    SystemParams& p = c.params;

    if (!top.has("photon") || !top.has("plasmon")) {
        fail(ErrorCode::SchemaError, src.locate("") + ": sections 'plasmon' and 'photon' are required");
    }

    {
        Reader r = top.sub("photon", {"omega_c", "kappa_i", "kappa_c", "Q_c", "kappa_c_over_kappa_i"});
        p.photon.omega_c = r.number("omega_c");
        if (r.has("Q_c")) {
            if (r.has("kappa_i") && r.has("kappa_c")) {
                fail(ErrorCode::SchemaError, src.locate("Q_c") + ": give Q_c with at most one of kappa_i, kappa_c");
            }
            const double q = r.number("Q_c");
            if (!(q > 0.0)) {
                fail(ErrorCode::ValidationError, src.locate("Q_c") + ": photon.Q_c must be positive");
            }
            const double kappa = p.photon.omega_c / q;
            if (r.has("kappa_c_over_kappa_i")) {
                const double ratio = r.number("kappa_c_over_kappa_i");
                if (!(ratio > 0.0)) {
                    fail(ErrorCode::ValidationError, src.locate("kappa_c_over_kappa_i") + ": ratio must be positive");
                }
                p.photon.kappa_i = kappa / (1.0 + ratio);
                p.photon.kappa_c = kappa - p.photon.kappa_i;
            }
            else if (r.has("kappa_i")) {
                p.photon.kappa_i = r.number("kappa_i");
                p.photon.kappa_c = kappa - p.photon.kappa_i;
            }
            else if (r.has("kappa_c")) {
                p.photon.kappa_c = r.number("kappa_c");
                p.photon.kappa_i = kappa - p.photon.kappa_c;
            }
            else {
                p.photon.kappa_c = kappa;
                p.photon.kappa_i = 0.0;
            }
        }
        else {
            p.photon.kappa_i = r.number("kappa_i", 0.0);
            p.photon.kappa_c = r.number("kappa_c", 0.0);
            if (r.has("kappa_c_over_kappa_i")) {
                fail(ErrorCode::SchemaError, src.locate("kappa_c_over_kappa_i") + ": kappa_c_over_kappa_i needs Q_c");
            }
        }
    }
    {
        Reader r = top.sub("plasmon", {"omega_a", "delta_ac", "kappa_r", "kappa_o", "Q_a"});
        if (r.has("omega_a") == r.has("delta_ac")) {
            fail(ErrorCode::SchemaError, src.locate("plasmon") + ": give exactly one of plasmon.omega_a, plasmon.delta_ac");
        }
        p.plasmon.omega_a = r.has("omega_a") ? r.number("omega_a") : p.photon.omega_c + r.number("delta_ac");
        p.plasmon.kappa_r = r.number("kappa_r", 0.0);
        if (r.has("Q_a")) {
            if (r.has("kappa_o")) {
                fail(ErrorCode::SchemaError, src.locate("Q_a") + ": give Q_a or kappa_o, not both");
            }
            const double q = r.number("Q_a");
            if (!(q > 0.0)) {
                fail(ErrorCode::ValidationError, src.locate("Q_a") + ": plasmon.Q_a must be positive");
            }
            p.plasmon.kappa_o = p.plasmon.omega_a / q - p.plasmon.kappa_r;
        }
        else {
            p.plasmon.kappa_o = r.number("kappa_o", 0.0);
        }
    }
    if (top.has("mirror")) {
        Reader r = top.sub("mirror", {"present", "phi", "phi_over_pi"});
        p.mirror.present = r.boolean("present", true);
        if (r.has("phi") && r.has("phi_over_pi")) {
            fail(ErrorCode::SchemaError, src.locate("phi") + ": give phi or phi_over_pi, not both");
        }
        const double phi = r.has("phi_over_pi") ? r.number("phi_over_pi") * std::numbers::pi : r.number("phi", 0.0);
        p.mirror.phi = normalize_phase(phi);
    }
    if (top.has("emitter")) {
        Reader r = top.sub("emitter", {"omega_0", "gamma_0", "gamma_nr", "gamma_m", "mu_debye"});
        p.emitter.omega_0 = r.number("omega_0", p.photon.omega_c);
        p.emitter.gamma_0 = r.number("gamma_0", 0.0);
        p.emitter.gamma_nr = r.number("gamma_nr", 0.0);
        p.emitter.gamma_m = r.number("gamma_m", 0.0);
        p.emitter.mu_debye = r.number("mu_debye", 0.0);
    }
    else {
        p.emitter.omega_0 = p.photon.omega_c;
    }
    if (top.has("couplings")) {
        Reader r = top.sub("couplings", {"g1", "ga", "gc"});
        p.couplings.g1 = r.number("g1", 0.0);
        p.couplings.ga = r.number("ga", 0.0);
        p.couplings.gc = r.number("gc", 0.0);
    }

    const ValidationReport report = validate(p);
    if (!report.ok()) {
        fail(ErrorCode::ValidationError, src.locate("") + ": " + report.summary());
    }

    if (top.has("run")) {
        Reader r = top.sub("run", {"omega_min", "omega_max", "points", "phi_points", "Q_c_values",
                                   "phi_over_pi_values", "t_max_fs", "t_points", "dynamics_method", "dynamics_step",
                                   "spectral_span", "emitter_at_ldos_peak", "emission_shift", "deltaL_half_width",
                                   "scatter_route", "deltaL_wide_half_width", "deltaL_wide_points",
                                   "deltaL_fine_half_width_kappa", "deltaL_fine_points", "refine",
                                   "include_gamma_nr", "include_kappa_i", "sweep", "fit"});
        RunSpec& run = c.run;
        if (r.has("omega_min")) run.omega_min = r.number("omega_min");
        if (r.has("omega_max")) run.omega_max = r.number("omega_max");
        run.points = r.count("points", run.points);
        run.phi_points = r.count("phi_points", run.phi_points);
        run.q_c_values = r.numbers("Q_c_values");
        run.phi_over_pi_values = r.numbers("phi_over_pi_values");
        run.t_max_fs = r.number("t_max_fs", run.t_max_fs);
        run.t_points = r.count("t_points", run.t_points);
        run.dynamics_method = r.text("dynamics_method", run.dynamics_method);
        if (run.dynamics_method != "spectral" && run.dynamics_method != "ode") {
            fail(ErrorCode::SchemaError, src.locate("dynamics_method") + ": dynamics_method must be 'spectral' or 'ode'");
        }
        run.dynamics_step = r.number("dynamics_step", 0.0);
        run.spectral_span = r.number("spectral_span", 0.0);
        run.emitter_at_ldos_peak = r.boolean("emitter_at_ldos_peak", false);
        run.emission_shift = r.number("emission_shift", 0.0);
        if (r.has("deltaL_half_width")) run.deltaL_half_width = r.number("deltaL_half_width");
        run.scatter_route = r.text("scatter_route", run.scatter_route);
        if (run.scatter_route != "eigen" && run.scatter_route != "direct") {
            fail(ErrorCode::SchemaError, src.locate("scatter_route") + ": scatter_route must be 'eigen' or 'direct'");
        }
        run.scan.wide_half_width = r.number("deltaL_wide_half_width", run.scan.wide_half_width);
        run.scan.wide_points = r.count("deltaL_wide_points", run.scan.wide_points);
        run.scan.fine_half_width_kappa = r.number("deltaL_fine_half_width_kappa", run.scan.fine_half_width_kappa);
        run.scan.fine_points = r.count("deltaL_fine_points", run.scan.fine_points);
        run.scan.refine = r.boolean("refine", run.scan.refine);
        run.budget.include_gamma_nr = r.boolean("include_gamma_nr", true);
        run.budget.include_kappa_i = r.boolean("include_kappa_i", true);
        if (run.points < 3 || run.t_points < 2 || run.phi_points < 2) {
            fail(ErrorCode::ValidationError, src.locate("run") + ": grids need points >= 3, t_points >= 2, phi_points >= 2");
        }
        if (r.has("sweep")) {
            run.sweep = read_sweep(r.sub("sweep", {"axes", "observable"}), run);
        }
        if (r.has("fit")) {
            run.fit = read_fit(r.sub("fit", {"data", "quantity", "free", "g1_bracket", "starts", "seed",
                                             "synthetic_g1", "synthetic_noise", "synthetic_seed",
                                             "synthetic_points"}));
        }
    }
    c.canonical = root.dump();
    return c;
}

} // namespace

std::string LoadedConfig::hash() const
{
    return hex64(fnv1a(canonical));
}

LoadedConfig parse_config(const std::string& text, const std::string& source)
{
    const json root = parse_json(text, source);
    if (!root.is_object()) {
        fail(ErrorCode::SchemaError, source + ": top level must be an object");
    }
    Sources src;
    src.texts.emplace_back(source, text);
    LoadedConfig c = interpret(root, src);
    c.source = source;
    return c;
}

LoadedConfig load_config(const std::string& path)
{
    LoadedConfig c = parse_config(read_file(path), path);
    c.base_dir = fs::path(path).parent_path().string();
    return c;
}

namespace
{
// merge_patch, except that setting one of a set of alternative keys clears
// the others from the base
void overlay(json& base, const json& patch)
{
    using group = std::vector<std::string>;
    const std::vector<std::pair<std::string, group>> exclusive = {
        {"plasmon", {"omega_a", "delta_ac"}},
        {"plasmon", {"Q_a", "kappa_o"}},
        {"mirror", {"phi", "phi_over_pi"}},
        {"photon", {"kappa_i", "kappa_c", "kappa_c_over_kappa_i"}},
    };
    for (const auto& [section, keys] : exclusive) {
        if (!patch.contains(section) || !patch[section].is_object() || !base.contains(section) ||
            !base[section].is_object()) {
            continue;
        }
        const json& ps = patch[section];
        json& bs = base[section];
        const bool touched = std::any_of(keys.begin(), keys.end(), [&](const auto& k) { return ps.contains(k); });
        if (!touched) {
            continue;
        }
        for (const auto& k : keys) {
            if (!ps.contains(k)) {
                bs.erase(k);
            }
        }
    }
    if (patch.contains("photon") && patch["photon"].is_object() && base.contains("photon") &&
        base["photon"].is_object()) {
        const json& ps = patch["photon"];
        json& bs = base["photon"];
        if (ps.contains("kappa_i") && ps.contains("kappa_c") && !ps.contains("Q_c")) {
            bs.erase("Q_c");
        }
        if (ps.contains("Q_c") && !bs.contains("Q_c") && bs.contains("kappa_i") && bs.contains("kappa_c") &&
            !ps.contains("kappa_c")) {
            bs.erase("kappa_c");
        }
    }
    base.merge_patch(patch);
}
} // namespace

LoadedConfig load_with_preset(const std::string& preset, const std::string& config_path)
{
    if (preset.empty()) {
        if (config_path.empty()) {
            fail(ErrorCode::ValidationError, "need --config or --preset");
        }
        return load_config(config_path);
    }
    const std::string ppath = preset_path(preset);
    const std::string ptext = read_file(ppath);
    json root = parse_json(ptext, ppath);
    Sources src;
    std::string base_dir = fs::path(ppath).parent_path().string();
    std::string source = ppath;
    if (!config_path.empty()) {
        const std::string ctext = read_file(config_path);
        const json patch = parse_json(ctext, config_path);
        if (!patch.is_object()) {
            fail(ErrorCode::SchemaError, config_path + ": top level must be an object");
        }
        overlay(root, patch);
        src.texts.emplace_back(config_path, ctext);
        base_dir = fs::path(config_path).parent_path().string();
        source += " + " + config_path;
    }
    src.texts.emplace_back(ppath, ptext);
    LoadedConfig c = interpret(root, src);
    c.source = source;
    c.base_dir = base_dir;
    return c;
}

std::string preset_directory()
{
    if (const char* env = std::getenv("CHIRALPOINT_PRESETS"); env && *env) {
        return env;
    }
    return CHIRALPOINT_PRESET_DIR;
}

std::string preset_path(const std::string& name)
{
    if (name.find('/') != std::string::npos || name.find("..") != std::string::npos) {
        fail(ErrorCode::ValidationError, "preset names are plain identifiers");
    }
    const fs::path p = fs::path(preset_directory()) / (name + ".json");
    if (!fs::exists(p)) {
        std::string known;
        for (const auto& n : list_presets()) {
            known += (known.empty() ? "" : ", ") + n;
        }
        fail(ErrorCode::ValidationError, "unknown preset '" + name + "' (known: " + known + ")");
    }
    return p.string();
}

std::vector<std::string> list_presets()
{
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(preset_directory(), ec)) {
        if (e.path().extension() == ".json") {
            out.push_back(e.path().stem().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace chiralpoint
