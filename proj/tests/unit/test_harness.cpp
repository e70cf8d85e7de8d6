#include "testkit.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chiralpoint;
using namespace testkit;

namespace
{
ErrorCode code_of_parse(const std::string& text)
{
    try {
        parse_config(text, "t.json");
    }
    catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoError;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_timestamp(const std::string& s)
{
    std::istringstream in(s);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.rfind("# generated:", 0) != 0) {
            out += line + "\n";
        }
    }
    return out;
}

const char* minimal = R"({
  "photon": { "omega_c": 1.5, "Q_c": 2000 },
  "plasmon": { "delta_ac": 1.0, "Q_a": 18 },
  "mirror": { "phi_over_pi": 0.75 },
  "emitter": { "mu_debye": 48 },
  "couplings": { "g1": -0.02, "ga": 0.01 }
})";

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "chiralpoint-tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}
} // namespace

TEST_CASE("every shipped preset loads and validates")
{
    const auto names = list_presets();
    CHECK(names.size() == 16);
    for (const auto& n : names) {
        const LoadedConfig c = load_config(preset(n));
        CHECK_MESSAGE(validate(c.params).ok(), n);
        CHECK_MESSAGE(!c.description.empty(), n);
    }
}

TEST_CASE("minimal config equals the fig2 preset physics")
{
    const SystemParams a = parse_config(minimal).params;
    const SystemParams b = load_config(preset("fig2")).params;
    CHECK(a.photon.kappa_c == doctest::Approx(b.photon.kappa_c));
    CHECK(a.plasmon.kappa_a() == doctest::Approx(b.plasmon.kappa_a()));
    CHECK(a.mirror.present);
    CHECK(a.mirror.phi == doctest::Approx(0.75 * std::numbers::pi));
    CHECK(a.emitter.omega_0 == doctest::Approx(a.photon.omega_c));
}

TEST_CASE("malformed configs")
{
    CHECK(code_of_parse("") == ErrorCode::ParseError);
    CHECK(code_of_parse("   \n") == ErrorCode::ParseError);
    CHECK(code_of_parse("{ \"photon\": ") == ErrorCode::ParseError);
    std::string unknown = minimal;
    unknown.replace(unknown.find("\"Q_a\""), 5, "\"Q_x\"");
    CHECK(code_of_parse(unknown) == ErrorCode::SchemaError);
    std::string typed = minimal;
    typed.replace(typed.find("-0.02"), 5, "\"x\"");
    CHECK(code_of_parse(typed) == ErrorCode::SchemaError);
    CHECK(code_of_parse(R"({ "photon": { "omega_c": 1.5, "Q_c": 2000 } })") == ErrorCode::SchemaError);
}

TEST_CASE("unknown keys are reported with their line")
{
    std::string unknown = minimal;
    unknown.replace(unknown.find("\"Q_a\""), 5, "\"Q_x\"");
    try {
        parse_config(unknown, "t.json");
        FAIL("expected SchemaError");
    }
    catch (const Error& e) {
        CHECK(std::string(e.what()).find("t.json:3") != std::string::npos);
        CHECK(std::string(e.what()).find("Q_x") != std::string::npos);
    }
}

TEST_CASE("phase of 2 pi loads as zero")
{
    std::string text = minimal;
    text.replace(text.find("0.75"), 4, "2.0");
    CHECK(parse_config(text).params.mirror.phi == doctest::Approx(0.0));
}

TEST_CASE("config overlays a preset")
{
    const auto path = scratch("overlay.json");
    std::ofstream(path) << R"({ "couplings": { "g1": -0.01 } })";
    const LoadedConfig c = load_with_preset("fig2", path.string());
    CHECK(c.params.couplings.g1 == doctest::Approx(-0.01));
    CHECK(c.params.couplings.ga == doctest::Approx(0.010));
    CHECK(c.hash() != load_config(preset("fig2")).hash());
}

TEST_CASE("overlay replaces alternative keys instead of clashing")
{
    const auto path = scratch("overlay_alt.json");
    std::ofstream(path) << R"({ "plasmon": { "kappa_o": 0.05 }, "mirror": { "phi": 1.0 },
                                "photon": { "kappa_c_over_kappa_i": 3.0 } })";
    const LoadedConfig c = load_with_preset("fig2", path.string());
    CHECK(c.params.plasmon.kappa_o == doctest::Approx(0.05));
    CHECK(c.params.mirror.phi == doctest::Approx(1.0));
    CHECK(c.params.photon.quality() == doctest::Approx(2000.0));
    CHECK(c.params.photon.kappa_c / c.params.photon.kappa_i == doctest::Approx(3.0));

    // only Q_c given on top of explicit rates: kappa_i is kept
    std::ofstream(path) << R"({ "photon": { "Q_c": 1000 } })";
    const LoadedConfig d = load_with_preset("fig8b", path.string());
    CHECK(d.params.photon.quality() == doctest::Approx(1000.0));
    CHECK(d.params.photon.kappa_i == doctest::Approx(0.000387));
}

TEST_CASE("config hash is stable")
{
    CHECK(parse_config(minimal).hash() == parse_config(minimal).hash());
    CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
    CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("number formatting keeps fifteen significant digits")
{
    CHECK(format_number(1.0) == "1.00000000000000e+00");
    CHECK(format_number(-2.371708245126e-2) == "-2.37170824512600e-02");
    CHECK(std::stod(format_number(0.1 + 0.2)) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("CSV export: provenance, increasing first column, determinism")
{
    const SystemParams p = load_config(preset("fig2")).params;
    const auto grid = cavity_window(p, 101);
    const auto j = spectral_density(p, grid).real();
    Table t;
    t.columns = {"omega_eV", "J_eV"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        t.add_row({grid[i], j[i]});
    }
    Provenance prov;
    prov.command = "ldos";
    prov.config_hash = "0123456789abcdef";
    const std::string a = render(t, Format::Csv, prov);
    CHECK(a.rfind("# tool: chiralpoint", 0) == 0);
    CHECK(a.find("# config_hash: 0123456789abcdef") != std::string::npos);

    std::istringstream in(a);
    std::string line;
    double last = -1e300;
    bool header = false;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            CHECK(line == "omega_eV,J_eV");
            header = true;
            continue;
        }
        const double w = std::stod(line.substr(0, line.find(',')));
        CHECK(w > last);
        last = w;
        ++rows;
    }
    CHECK(rows == grid.size());

    const auto f1 = scratch("a.csv"), f2 = scratch("b.csv");
    export_table(t, Format::Csv, f1.string(), prov);
    export_table(t, Format::Csv, f2.string(), prov);
    CHECK(strip_timestamp(slurp(f1.string())) == strip_timestamp(slurp(f2.string())));
}

TEST_CASE("JSON export is one structured document")
{
    Table t;
    t.columns = {"x", "y"};
    t.add_row({1.0, 2.0});
    t.summary = {{"best", "2"}};
    Provenance prov;
    prov.command = "test";
    prov.config_json = R"({"a":1})";
    prov.elapsed_seconds = 0.5;
    const auto j = nlohmann::json::parse(render(t, Format::Json, prov));
    CHECK(j.contains("config"));
    CHECK(j.contains("summary"));
    CHECK(j.dump().find("timing_s") != std::string::npos);
}

TEST_CASE("export to an unwritable path")
{
    Table t;
    t.columns = {"x"};
    t.add_row({1.0});
    try {
        export_table(t, Format::Csv, "/nonexistent-dir/x.csv", {});
        FAIL("expected IoError");
    }
    catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
}

TEST_CASE("1x1 sweep equals the direct call")
{
    const SystemParams p = load_config(preset("fig2")).params;
    SweepSpec s;
    s.observable = Observable::PurcellMax;
    SweepAxis ax;
    ax.path = "couplings.g1";
    ax.values = {-0.02};
    s.axes = {ax};
    const Table t = run_sweep(s, p);
    REQUIRE(t.rows.size() == 1);
    const PeakMetrics m = peak_metrics(purcell_spectrum(p, cavity_window(p, s.points)));
    CHECK(t.rows[0][t.column_index("F_p")] == m.f_p);
    CHECK(t.rows[0][t.column_index("omega_peak_eV")] == m.omega_peak);
}

TEST_CASE("sweep rows are outer-axis major and threads do not reorder them")
{
    const SystemParams p = load_config(preset("fig2")).params;
    SweepSpec s;
    s.observable = Observable::Linewidth;
    s.points = 801;
    SweepAxis a{"photon.Q_c", 1e3, 1e4, 2, true, {}};
    SweepAxis b{"couplings.g1", -0.03, -0.01, 3, false, {}};
    s.axes = {a, b};
    SweepOptions one, many;
    many.jobs = 4;
    const Table x = run_sweep(s, p, one);
    const Table y = run_sweep(s, p, many);
    REQUIRE(x.rows.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(x.rows[i][0] == doctest::Approx(i < 3 ? 1e3 : 1e4));
        CHECK(x.rows[i] == y.rows[i]);
    }
}

TEST_CASE("failing cells are recorded, not fatal")
{
    SystemParams p = load_config(preset("fig2")).params;
    p.emitter.mu_debye = 48;
    SweepSpec s;
    s.observable = Observable::PurcellMax;
    s.points = 401;
    // zero dipole moment in the second cell
    SweepAxis ax;
    ax.path = "emitter.mu_debye";
    ax.values = {48.0, 0.0, 24.0};
    s.axes = {ax};
    const Table t = run_sweep(s, p);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.status[0] == "ok");
    CHECK(t.status[1] != "ok");
    CHECK(std::isnan(t.rows[1][1]));
    CHECK(t.status[2] == "ok");
}

TEST_CASE("checkpointed sweep resumes to the same table")
{
    const SystemParams p = load_config(preset("fig2")).params;
    SweepSpec s;
    s.observable = Observable::PurcellMax;
    s.points = 401;
    s.axes = {SweepAxis{"couplings.g1", -0.03, -0.01, 4, false, {}}};
    const auto ck = scratch("sweep.ck");
    std::filesystem::remove(ck);
    SweepOptions o;
    o.checkpoint = ck.string();
    const Table full = run_sweep(s, p, o);

    // keep the header and the first two finished cells, as after an interruption
    std::istringstream in(slurp(ck.string()));
    std::string line, kept;
    for (int i = 0; i < 3 && std::getline(in, line); ++i) {
        kept += line + "\n";
    }
    CHECK(kept.rfind("# sweep " + sweep_hash(s, p), 0) == 0);
    std::ofstream(ck) << kept;
    const Table resumed = run_sweep(s, p, o);
    CHECK(render(full, Format::Csv, {"sweep", "", "", {}, -1.0, false}) ==
          render(resumed, Format::Csv, {"sweep", "", "", {}, -1.0, false}));
}

TEST_CASE("sweep spec validation")
{
    SweepSpec s;
    CHECK_THROWS_AS(validate_spec(s), Error);
    s.axes = {SweepAxis{"photon.nope", 0, 1, 3, false, {}}};
    CHECK_THROWS_AS(validate_spec(s), Error);
    s.axes = {SweepAxis{"couplings.g1", 0, 1, 1, false, {}}};
    CHECK_THROWS_AS(validate_spec(s), Error);
    s.axes = {SweepAxis{"couplings.g1", 0, 1, 2, false, {}}};
    CHECK_NOTHROW(validate_spec(s));
    CHECK(parse_observable("Eta") == Observable::Eta);
    CHECK_THROWS_AS(parse_observable("nope"), Error);
}

TEST_CASE("noise-free synthetic data are recovered exactly")
{
    const SystemParams truth = load_config(preset("fig8b")).params;
    const auto grid = cavity_window(truth, 401);
    FitProblem prob;
    prob.data = synthetic_data(truth, FitQuantity::Purcell, grid, 0.0, 1);
    prob.fixed = truth;
    prob.fixed.couplings.g1 = -0.03;
    prob.free = {FreeParameter::G1};
    const FitResult r = fit_g1(prob);
    CHECK(r.residual_norm < 1e-10);
    CHECK(rel(r.estimate(FreeParameter::G1), truth.couplings.g1) < 1e-8);
    CHECK(r.sigma.size() == 1);
}

TEST_CASE("fit input checks")
{
    const SystemParams truth = load_config(preset("fig8b")).params;
    FitProblem prob;
    prob.data = synthetic_data(truth, FitQuantity::Purcell, linspace(1.46, 1.465, 4), 0.0, 1);
    prob.fixed = truth;
    prob.free = {FreeParameter::G1};
    CHECK_THROWS_AS(fit_g1(prob), Error);
    prob.free.clear();
    CHECK_THROWS_AS(fit_g1(prob), Error);
}

TEST_CASE("phase of a mirror-free spectrum is not identifiable")
{
    const SystemParams base = load_config(preset("fig8b")).params;
    const auto grid = cavity_window(base, 401);
    FitProblem prob;
    prob.data = synthetic_data(base.without_mirror(), FitQuantity::Purcell, grid, 0.01, 3);
    prob.fixed = base;
    prob.fixed.mirror.present = true;
    prob.fixed.mirror.phi = 1.0;
    prob.free = {FreeParameter::G1, FreeParameter::Phi};
    bool flagged = false;
    try {
        const FitResult r = fit_g1(prob);
        // a fit that goes through must at least admit that phi is unconstrained
        flagged = r.sigma[1] > 0.5 || r.residual_norm > 0.05;
    }
    catch (const Error& e) {
        flagged = e.code() == ErrorCode::IllConditionedFit;
    }
    CHECK(flagged);
}
