#ifndef VACRAD_SCENARIO_HPP
#define VACRAD_SCENARIO_HPP

// Declarative scenarios: TOML configuration, validation, and the run / sweep /
// compare drivers used by the command-line tool. Multimode systems are read
// from JSON.

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>
#include <toml.hpp>

#include "vacrad/approximations.hpp"
#include "vacrad/concurrency.hpp"
#include "vacrad/errors.hpp"
#include "vacrad/exact_sech.hpp"
#include "vacrad/io.hpp"
#include "vacrad/jost.hpp"
#include "vacrad/multimode.hpp"
#include "vacrad/profiles.hpp"
#include "vacrad/quantum.hpp"

namespace vacrad {

inline constexpr const char* version = "0.1.0";

enum class Method { Numeric, Exact, Born, Abrupt, Adiabatic };

inline std::string to_string(Method m) {
    switch (m) {
    case Method::Numeric: return "numeric";
    case Method::Exact: return "exact";
    case Method::Born: return "born";
    case Method::Abrupt: return "abrupt";
    case Method::Adiabatic: return "adiabatic";
    }
    return "?";
}

inline Method parse_method(const std::string& s, const std::string& field) {
    static const std::map<std::string, Method> names = {{"numeric", Method::Numeric},
                                                        {"exact", Method::Exact},
                                                        {"born", Method::Born},
                                                        {"abrupt", Method::Abrupt},
                                                        {"adiabatic", Method::Adiabatic}};
    const auto it = names.find(s);
    if (it == names.end()) throw ConfigError(field, "unknown method '" + s + "'");
    return it->second;
}

struct Sweep {
    std::string parameter = "t_f";
    std::vector<double> values;
};

struct Scenario {
    FrequencyProfile profile = FrequencyProfile::constant(1.0);
    bool abrupt_only = false;   ///< drive given only as a delta weight
    double abrupt_weight = 0.0; ///< Omega^2 T of the delta-function drive
    ForceProfile force = ForceProfile::null();
    TimeGrid grid;
    Method method = Method::Numeric;
    std::vector<Method> compare_methods;
    JostOptions jost;
    StokesSwitch stokes = StokesSwitch::UnitStep;
    std::optional<Sweep> sweep;
    double t0 = 0.0;
    double t = 0.0;
    std::string output_prefix = "vacrad";
    std::string plot = "none";
    std::string config_hash;

    double omega0() const { return profile.omega0(); }
};

// ---------------------------------------------------------------------------
// TOML parsing
// ---------------------------------------------------------------------------

namespace detail {

class TomlSection {
public:
    TomlSection(const toml::table* tbl, std::string name) : tbl_(tbl), name_(std::move(name)) {}

    bool present() const { return tbl_ != nullptr; }
    std::string field(const std::string& key) const { return name_ + "." + key; }

    /// `key`, or `key_pi` multiplied by pi.
    std::optional<double> number(const std::string& key) const {
        if (!tbl_) return std::nullopt;
        const bool plain = tbl_->contains(key), scaled = tbl_->contains(key + "_pi");
        if (plain && scaled) throw ConfigError(field(key), "given both as " + key + " and " + key + "_pi");
        if (plain) return read_number(key, 1.0);
        if (scaled) return read_number(key + "_pi", pi);
        return std::nullopt;
    }

    double number_or(const std::string& key, double fallback) const { return number(key).value_or(fallback); }

    double required(const std::string& key) const {
        auto v = number(key);
        if (!v) throw ConfigError(field(key), "required");
        return *v;
    }

    std::optional<std::string> text(const std::string& key) const {
        if (!tbl_ || !tbl_->contains(key)) return std::nullopt;
        auto v = (*tbl_)[key].value<std::string>();
        if (!v) throw ConfigError(field(key), "must be a string");
        return v;
    }

    std::optional<std::vector<double>> numbers(const std::string& key) const {
        if (!tbl_ || !tbl_->contains(key)) return std::nullopt;
        const auto* arr = (*tbl_)[key].as_array();
        if (!arr) throw ConfigError(field(key), "must be an array of numbers");
        std::vector<double> out;
        for (const auto& node : *arr) {
            auto v = node.value<double>();
            if (!v) throw ConfigError(field(key), "must be an array of numbers");
            out.push_back(*v);
        }
        return out;
    }

    std::optional<std::vector<std::string>> strings(const std::string& key) const {
        if (!tbl_ || !tbl_->contains(key)) return std::nullopt;
        const auto* arr = (*tbl_)[key].as_array();
        if (!arr) throw ConfigError(field(key), "must be an array of strings");
        std::vector<std::string> out;
        for (const auto& node : *arr) {
            auto v = node.value<std::string>();
            if (!v) throw ConfigError(field(key), "must be an array of strings");
            out.push_back(*v);
        }
        return out;
    }

    void allow(std::initializer_list<const char*> keys) const {
        if (!tbl_) return;
        std::set<std::string> ok;
        for (const char* k : keys) {
            ok.insert(k);
            ok.insert(std::string(k) + "_pi");
        }
        for (const auto& [k, _] : *tbl_)
            if (!ok.count(std::string(k.str()))) throw ConfigError(field(std::string(k.str())), "unknown key");
    }

private:
    double read_number(const std::string& key, double scale) const {
        auto v = (*tbl_)[key].value<double>();
        if (!v || !std::isfinite(*v)) throw ConfigError(field(key), "must be a finite number");
        return *v * scale;
    }

    const toml::table* tbl_;
    std::string name_;
};

inline TomlSection section(const toml::table& root, const char* name) {
    if (!root.contains(name)) return {nullptr, name};
    const auto* t = root[name].as_table();
    if (!t) throw ConfigError(name, "must be a table");
    return {t, name};
}

template <class F>
auto as_config_error(const std::string& field, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(field, e.what());
    }
}

inline std::vector<Sample> samples_for(const std::string& field, const std::filesystem::path& p) {
    try {
        return io::load_samples(p);
    } catch (const ConfigError& e) {
        throw ConfigError(field, e.what());
    }
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
    std::filesystem::path p(file);
    return p.is_absolute() ? p : base / p;
}

} // namespace detail

inline void validate_method(const Scenario& sc, Method m, const std::string& field) {
    const auto kind = sc.profile.kind();
    const bool sech = kind == ProfileKind::SechBump;
    const bool minus = sech && sc.profile.sign() == BumpSign::Minus;
    switch (m) {
    case Method::Numeric:
        if (sc.abrupt_only) throw ConfigError(field, "numeric method needs a frequency profile, not a delta weight");
        break;
    case Method::Exact:
        if (sc.abrupt_only || kind == ProfileKind::Tabulated || minus)
            throw ConfigError(field, "exact method requires the Plus-sign sech^2 profile");
        break;
    case Method::Born:
        if (sc.abrupt_only || kind == ProfileKind::Tabulated)
            throw ConfigError(field, "Born method requires a sech^2 or constant profile");
        break;
    case Method::Abrupt:
        if (kind == ProfileKind::Tabulated) throw ConfigError(field, "abrupt method requires a sech^2 profile or a delta weight");
        break;
    case Method::Adiabatic:
        if (!minus) throw ConfigError(field, "adiabatic method requires the Minus-sign sech^2 profile");
        break;
    }
}

/// Parses and validates a TOML scenario. Relative file names resolve against `base_dir`.
inline Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".",
                               const std::string& source = "config") {
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << e.description() << " at line " << e.source().begin.line;
        throw ConfigError(source, msg.str());
    }
    for (const auto& [k, _] : root) {
        static const std::set<std::string> known = {"profile", "force", "grid", "solver", "times",
                                                    "sweep",   "compare", "output"};
        if (!known.count(std::string(k.str()))) throw ConfigError(std::string(k.str()), "unknown section");
    }

    Scenario sc;
    sc.config_hash = io::fnv1a_hex(text);

    // --- profile
    const auto prof = detail::section(root, "profile");
    if (!prof.present()) throw ConfigError("profile", "section is required");
    prof.allow({"kind", "sign", "omega0", "Omega", "T", "Omega2T", "file", "flat_tol"});
    const std::string kind = prof.text("kind").value_or("sech");
    const double w0 = prof.required("omega0");
    if (!(w0 > 0.0)) throw ConfigError(prof.field("omega0"), "must be positive");
    if (kind == "constant") {
        sc.profile = FrequencyProfile::constant(w0);
    } else if (kind == "sech") {
        const std::string sign = prof.text("sign").value_or("plus");
        if (sign != "plus" && sign != "minus") throw ConfigError(prof.field("sign"), "must be 'plus' or 'minus'");
        const double Omega = prof.required("Omega"), T = prof.required("T");
        sc.profile = detail::as_config_error(prof.field("Omega"), [&] {
            return FrequencyProfile::sech_bump(w0, Omega, T, sign == "plus" ? BumpSign::Plus : BumpSign::Minus);
        });
        sc.abrupt_weight = sc.profile.signed_amplitude_squared() * T;
    } else if (kind == "abrupt") {
        sc.profile = FrequencyProfile::constant(w0);
        sc.abrupt_only = true;
        sc.abrupt_weight = prof.required("Omega2T");
    } else if (kind == "tabulated") {
        const auto file = prof.text("file");
        if (!file) throw ConfigError(prof.field("file"), "required for a tabulated profile");
        auto samples = detail::samples_for(prof.field("file"), detail::resolve(base_dir, *file));
        const double flat = prof.number_or("flat_tol", 1e-6);
        sc.profile = detail::as_config_error(prof.field("file"),
                                             [&] { return FrequencyProfile::tabulated(w0, std::move(samples), flat); });
    } else {
        throw ConfigError(prof.field("kind"), "must be constant, sech, abrupt or tabulated");
    }

    // --- force
    const auto frc = detail::section(root, "force");
    frc.allow({"kind", "F0", "omega_f", "t_f", "T2", "mass", "file", "center"});
    const std::string fkind = frc.text("kind").value_or(frc.present() ? "gauss_cos" : "null");
    const double mass = frc.number_or("mass", 1.0);
    if (!(mass > 0.0)) throw ConfigError(frc.field("mass"), "must be positive");
    if (fkind == "null") {
        sc.force = ForceProfile::null(mass);
    } else if (fkind == "gauss_cos") {
        const double T2 = frc.required("T2");
        if (!(T2 > 0.0)) throw ConfigError(frc.field("T2"), "must be positive");
        sc.force = ForceProfile::gauss_cos(frc.number_or("F0", 1.0), frc.number_or("omega_f", 0.0),
                                           frc.number_or("t_f", 0.0), T2, mass);
    } else if (fkind == "tabulated") {
        const auto file = frc.text("file");
        if (!file) throw ConfigError(frc.field("file"), "required for a tabulated force");
        auto samples = detail::samples_for(frc.field("file"), detail::resolve(base_dir, *file));
        sc.force = detail::as_config_error(frc.field("file"), [&] {
            return ForceProfile::tabulated(std::move(samples), mass, frc.number_or("center", 0.0));
        });
    } else {
        throw ConfigError(frc.field("kind"), "must be gauss_cos, tabulated or null");
    }

    // --- solver
    const auto sol = detail::section(root, "solver");
    sol.allow({"method", "integrator", "tol", "rk4_substeps", "stokes"});
    sc.method = parse_method(sol.text("method").value_or(sc.abrupt_only ? "abrupt" : "numeric"), sol.field("method"));
    const std::string integ = sol.text("integrator").value_or("bulirsch_stoer");
    if (integ == "bulirsch_stoer") sc.jost.integrator = Integrator::BulirschStoer;
    else if (integ == "rk4") sc.jost.integrator = Integrator::RungeKutta4;
    else throw ConfigError(sol.field("integrator"), "must be bulirsch_stoer or rk4");
    sc.jost.tol = sol.number_or("tol", integ == "rk4" ? 1e-6 : 1e-12);
    if (!(sc.jost.tol > 0.0)) throw ConfigError(sol.field("tol"), "must be positive");
    const double substeps = sol.number_or("rk4_substeps", 1.0);
    if (!(substeps >= 1.0)) throw ConfigError(sol.field("rk4_substeps"), "must be at least 1");
    sc.jost.rk4_substeps = static_cast<std::size_t>(substeps);
    const std::string stokes = sol.text("stokes").value_or("unit_step");
    if (stokes == "unit_step") sc.stokes = StokesSwitch::UnitStep;
    else if (stokes == "raw_erf") sc.stokes = StokesSwitch::RawErf;
    else throw ConfigError(sol.field("stokes"), "must be unit_step or raw_erf");
    validate_method(sc, sc.method, sol.field("method"));

    // --- sweep
    const auto sw = detail::section(root, "sweep");
    sw.allow({"parameter", "values", "start", "stop", "count"});
    if (sw.present()) {
        Sweep s;
        s.parameter = sw.text("parameter").value_or("t_f");
        if (s.parameter != "t_f") throw ConfigError(sw.field("parameter"), "only t_f sweeps are supported");
        if (auto v = sw.numbers("values")) {
            s.values = *v;
        } else {
            const double a = sw.required("start"), b = sw.required("stop");
            const double c = sw.required("count");
            if (!(c >= 2.0) || c != std::floor(c)) throw ConfigError(sw.field("count"), "must be an integer >= 2");
            const auto n = static_cast<std::size_t>(c);
            for (std::size_t i = 0; i < n; ++i) s.values.push_back(a + (b - a) * static_cast<double>(i) / (n - 1));
        }
        if (s.values.empty()) throw ConfigError(sw.field("values"), "must not be empty");
        if (sc.force.is_null()) throw ConfigError(sw.field("parameter"), "a t_f sweep needs a force");
        sc.sweep = s;
    }

    // --- compare
    const auto cmp = detail::section(root, "compare");
    cmp.allow({"methods"});
    if (auto m = cmp.strings("methods")) {
        for (const auto& name : *m) {
            const Method mm = parse_method(name, cmp.field("methods"));
            validate_method(sc, mm, cmp.field("methods"));
            sc.compare_methods.push_back(mm);
        }
        if (sc.compare_methods.empty()) throw ConfigError(cmp.field("methods"), "must not be empty");
    }

    // --- grid: covers the drive and every force position used
    const auto gr = detail::section(root, "grid");
    gr.allow({"span", "points_per_period", "t_min", "t_max", "n_steps", "flatness_epsilon"});
    GridOptions gopt;
    gopt.span = gr.number_or("span", gopt.span);
    gopt.points_per_period = gr.number_or("points_per_period", gopt.points_per_period);
    if (!(gopt.span > 0.0)) throw ConfigError(gr.field("span"), "must be positive");
    if (!(gopt.points_per_period > 0.0)) throw ConfigError(gr.field("points_per_period"), "must be positive");
    sc.jost.flatness_epsilon = gr.number_or("flatness_epsilon", default_flatness_epsilon);
    std::optional<Interval> cover;
    auto extend = [&](const ForceProfile& f) {
        if (auto s = f.support()) {
            if (!cover) cover = *s;
            cover->lo = std::min(cover->lo, s->lo);
            cover->hi = std::max(cover->hi, s->hi);
        }
    };
    extend(sc.force);
    if (sc.sweep)
        for (double tf : sc.sweep->values) extend(sc.force.recentered(tf));
    const auto tmin = gr.number("t_min"), tmax = gr.number("t_max"), nst = gr.number("n_steps");
    if (tmin || tmax || nst) {
        if (!(tmin && tmax && nst)) throw ConfigError(gr.field("t_min"), "t_min, t_max and n_steps go together");
        if (!(*nst >= 2.0)) throw ConfigError(gr.field("n_steps"), "must be at least 2");
        sc.grid = detail::as_config_error(gr.field("t_min"),
                                          [&] { return TimeGrid(*tmin, *tmax, static_cast<std::size_t>(*nst)); });
    } else {
        sc.grid = default_grid(sc.profile, cover, gopt);
    }

    // --- times
    const auto tm = detail::section(root, "times");
    tm.allow({"t0", "t"});
    sc.t0 = tm.number_or("t0", sc.grid.t_min);
    sc.t = tm.number_or("t", sc.grid.t_max);
    if (!(sc.t0 < sc.t)) throw ConfigError(tm.field("t0"), "must precede times.t");

    // --- output
    const auto out = detail::section(root, "output");
    out.allow({"prefix", "plot"});
    sc.output_prefix = out.text("prefix").value_or("vacrad");
    sc.plot = out.text("plot").value_or("none");
    if (sc.plot != "none" && sc.plot != "svg") throw ConfigError(out.field("plot"), "must be none or svg");
    return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    const std::string text = io::read_file(path);
    return parse_scenario(text, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."),
                          path.string());
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct MethodResult {
    Method method = Method::Numeric;
    cplx A{1.0, 0.0};
    cplx B{0.0, 0.0};
    LadderMap map;
    OscillatorState state;
    double flux_defect = 0.0;
    std::optional<double> wronskian_drift;
    bool in_window = true;
};

/// Scattering data for one method, shared across force positions.
class MethodContext {
public:
    MethodContext(const Scenario& sc, Method m) : sc_(sc), method_(m) {
        switch (m) {
        case Method::Numeric:
            jost_ = solve_jost(sc.profile, sc.grid, sc.jost);
            A_ = jost_->A;
            B_ = jost_->B;
            break;
        case Method::Exact:
            jost_ = exact_jost_solution(sc.profile, sc.grid);
            A_ = jost_->A;
            B_ = jost_->B;
            break;
        case Method::Born:
            std::tie(A_, B_) = born_coefficients(sc.profile);
            break;
        case Method::Abrupt:
            std::tie(A_, B_) = abrupt_coefficients(sc.omega0(), sc.abrupt_weight);
            break;
        case Method::Adiabatic: {
            adiabatic_ = AdiabaticParams::from_profile(sc.profile, sc.stokes);
            const double b = adiabatic_B(*adiabatic_);
            A_ = std::sqrt(1.0 + b * b);
            B_ = b;
            break;
        }
        }
    }

    Method method() const { return method_; }
    cplx A() const { return A_; }
    cplx B() const { return B_; }
    const std::optional<JostSolution>& jost() const { return jost_; }

    cplx alpha(const ForceProfile& force) const {
        if (force.is_null()) return 0.0;
        switch (method_) {
        case Method::Numeric:
        case Method::Exact:
            return displacement(*jost_, force, sc_.t0, sc_.t);
        case Method::Born:
            return born_displacement(sc_.profile, force, sc_.t);
        case Method::Abrupt:
            return abrupt_displacement(sc_.omega0(), sc_.abrupt_weight, force, sc_.t);
        case Method::Adiabatic:
            return adiabatic_displacement(*adiabatic_, force, sc_.t);
        }
        return 0.0;
    }

    bool in_window(const ForceProfile& force) const {
        return method_ != Method::Adiabatic || adiabatic_window(*adiabatic_, force);
    }

    MethodResult evaluate(const ForceProfile& force) const {
        MethodResult r;
        r.method = method_;
        r.A = A_;
        r.B = B_;
        std::tie(r.map.u, r.map.v) = bogolyubov_from_scattering(A_, B_, sc_.omega0(), sc_.t0, sc_.t);
        r.map.alpha = alpha(force);
        r.map.t0 = sc_.t0;
        r.map.t = sc_.t;
        r.map.mass = force.mass();
        r.flux_defect = std::abs(std::norm(A_) - std::norm(B_) - 1.0);
        if (jost_) r.wronskian_drift = jost_->wronskian_drift;
        // The first-order Born pair satisfies |A|^2 - |B|^2 = 1 only to first order.
        const bool exact_identity = method_ == Method::Numeric || method_ == Method::Exact;
        r.state = state_from_map(r.map, exact_identity ? std::max(1e-8, 10.0 * sc_.jost.tol) : INFINITY);
        r.in_window = in_window(force);
        return r;
    }

private:
    const Scenario& sc_;
    Method method_;
    cplx A_{1.0, 0.0};
    cplx B_{0.0, 0.0};
    std::optional<JostSolution> jost_;
    std::optional<AdiabaticParams> adiabatic_;
};

inline io::json result_json(const Scenario& sc, const MethodResult& r) {
    io::json j{{"version", version},
               {"config_hash", sc.config_hash},
               {"method", to_string(r.method)},
               {"omega0", sc.omega0()},
               {"t0", sc.t0},
               {"t", sc.t},
               {"grid", {{"t_min", sc.grid.t_min}, {"t_max", sc.grid.t_max}, {"n_steps", sc.grid.n_steps}}},
               {"A", io::complex_json(r.A)},
               {"B", io::complex_json(r.B)},
               {"u", io::complex_json(r.map.u)},
               {"v", io::complex_json(r.map.v)},
               {"alpha", io::complex_json(r.map.alpha)},
               {"squeeze_r", r.state.squeeze_r},
               {"squeeze_phase", r.state.squeeze_phase},
               {"occupation", r.state.occupation},
               {"flux_defect", r.flux_defect}};
    if (r.wronskian_drift) j["wronskian_drift"] = *r.wronskian_drift;
    if (r.method == Method::Adiabatic) j["in_validity_window"] = r.in_window;
    return j;
}

struct RunOutput {
    MethodResult result;
    io::json summary;
};

/// Single evaluation; writes <prefix>_summary.json and, for methods with a
/// sampled solution, <prefix>_jost.csv.
inline RunOutput run(const Scenario& sc, bool write = true) {
    const MethodContext ctx(sc, sc.method);
    RunOutput out{ctx.evaluate(sc.force), {}};
    out.summary = result_json(sc, out.result);
    if (write) {
        io::write_json(sc.output_prefix + "_summary.json", out.summary);
        if (ctx.jost()) io::jost_table(*ctx.jost(), sc.config_hash).write(sc.output_prefix + "_jost.csv");
    }
    return out;
}

struct SweepPoint {
    double t_f;
    cplx alpha;
    double occupation;
    bool in_window;
};

/// One displacement per t_f over a shared solution; rows in sweep order.
inline std::vector<SweepPoint> sweep_tf(const Scenario& sc, std::size_t threads = 1, bool write = true) {
    if (!sc.sweep) throw ConfigError("sweep", "section is required for a sweep");
    const MethodContext ctx(sc, sc.method);
    const auto& values = sc.sweep->values;
    std::vector<SweepPoint> pts(values.size());
    const auto [u, v] = bogolyubov_from_scattering(ctx.A(), ctx.B(), sc.omega0(), sc.t0, sc.t);
    parallel_for(values.size(), threads, [&](std::size_t i) {
        const ForceProfile f = sc.force.recentered(values[i]);
        const cplx a = ctx.alpha(f);
        pts[i] = {values[i], a, std::norm(v) + std::norm(a), ctx.in_window(f)};
    });
    if (write) {
        io::CsvTable tab({"t_f", "re_alpha", "im_alpha", "abs_alpha", "occupation", "in_window", "config_hash"});
        std::vector<double> x, y;
        for (const auto& p : pts) {
            io::CsvTable::Row r;
            r << p.t_f << p.alpha.real() << p.alpha.imag() << std::abs(p.alpha) << p.occupation
              << (p.in_window ? 1.0 : 0.0) << sc.config_hash;
            tab.add(r);
            x.push_back(p.t_f);
            y.push_back(std::abs(p.alpha));
        }
        tab.write(sc.output_prefix + "_sweep.csv");
        if (sc.plot == "svg")
            io::write_text(sc.output_prefix + "_sweep.svg",
                           io::svg_line_chart(x, y, "|alpha| vs t_f (" + to_string(sc.method) + ")", "t_f", "|alpha|"));
    }
    return pts;
}

inline double relative_deviation(cplx a, cplx b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Side-by-side (A, B, alpha) for the configured methods, plus pairwise deviations.
inline std::vector<MethodResult> compare(const Scenario& sc, std::size_t threads = 1, bool write = true) {
    std::vector<Method> methods = sc.compare_methods;
    if (methods.empty()) methods = {sc.method};
    std::vector<MethodResult> res(methods.size());
    parallel_for(methods.size(), threads, [&](std::size_t i) {
        const MethodContext ctx(sc, methods[i]);
        res[i] = ctx.evaluate(sc.force);
    });
    if (write) {
        io::CsvTable tab({"method", "re_A", "im_A", "re_B", "im_B", "abs_B", "re_alpha", "im_alpha", "abs_alpha",
                          "occupation", "config_hash"});
        for (const auto& r : res) {
            io::CsvTable::Row row;
            row << to_string(r.method) << r.A.real() << r.A.imag() << r.B.real() << r.B.imag() << std::abs(r.B)
                << r.map.alpha.real() << r.map.alpha.imag() << std::abs(r.map.alpha) << r.state.occupation
                << sc.config_hash;
            tab.add(row);
        }
        tab.write(sc.output_prefix + "_compare.csv");
        io::CsvTable pairs({"method_a", "method_b", "rel_dev_A", "rel_dev_B", "rel_dev_alpha", "config_hash"});
        for (std::size_t i = 0; i < res.size(); ++i)
            for (std::size_t j = i + 1; j < res.size(); ++j) {
                io::CsvTable::Row row;
                row << to_string(res[i].method) << to_string(res[j].method) << relative_deviation(res[i].A, res[j].A)
                    << relative_deviation(res[i].B, res[j].B) << relative_deviation(res[i].map.alpha, res[j].map.alpha)
                    << sc.config_hash;
                pairs.add(row);
            }
        pairs.write(sc.output_prefix + "_pairs.csv");
    }
    return res;
}

// ---------------------------------------------------------------------------
// Multimode systems (JSON)
// ---------------------------------------------------------------------------

struct MultimodeScenario {
    MultimodeSystem system;
    TimeGrid grid;
    double t0 = 0.0;
    double t = 0.0;
    double tol = 1e-12;
    std::string output_prefix = "vacrad_multimode";
    std::string config_hash;
};

namespace detail {

inline double json_number(const io::json& j, const std::string& key, const std::string& field,
                          std::optional<double> fallback = std::nullopt) {
    const bool plain = j.contains(key), scaled = j.contains(key + "_pi");
    if (plain || scaled) {
        const auto& v = j.at(plain ? key : key + "_pi");
        if (!v.is_number()) throw ConfigError(field + "." + key, "must be a number");
        return v.get<double>() * (plain ? 1.0 : pi);
    }
    if (fallback) return *fallback;
    throw ConfigError(field + "." + key, "required");
}

} // namespace detail

inline MultimodeScenario parse_multimode(const std::string& text, const std::string& source = "system") {
    io::json j;
    try {
        j = io::json::parse(text);
    } catch (const io::json::parse_error& e) {
        throw ConfigError(source, e.what());
    }
    if (!j.is_object()) throw ConfigError(source, "must be a JSON object");
    MultimodeScenario ms;
    ms.config_hash = io::fnv1a_hex(text);
    auto& sys = ms.system;
    if (!j.contains("omegas") || !j["omegas"].is_array()) throw ConfigError("omegas", "array required");
    for (const auto& w : j["omegas"]) {
        if (!w.is_number()) throw ConfigError("omegas", "must contain numbers");
        sys.omegas.push_back(w.get<double>());
    }
    if (j.contains("omega_ref")) sys.omega_ref = detail::json_number(j, "omega_ref", "system");
    sys.mass = detail::json_number(j, "mass", "system", 1.0);
    if (j.contains("pulses")) {
        std::size_t k = 0;
        for (const auto& p : j["pulses"]) {
            const std::string f = "pulses[" + std::to_string(k++) + "]";
            CouplingPulse c;
            c.i = static_cast<std::size_t>(detail::json_number(p, "i", f));
            c.j = static_cast<std::size_t>(detail::json_number(p, "j", f));
            c.weight = detail::json_number(p, "weight", f);
            c.T = detail::json_number(p, "T", f);
            c.center = detail::json_number(p, "center", f, 0.0);
            sys.pulses.push_back(c);
        }
    }
    sys.forces.assign(sys.omegas.size(), ForceProfile::null(sys.mass));
    if (j.contains("forces")) {
        std::size_t k = 0;
        for (const auto& f : j["forces"]) {
            const std::string field = "forces[" + std::to_string(k++) + "]";
            const auto mode = static_cast<std::size_t>(detail::json_number(f, "mode", field));
            if (mode >= sys.omegas.size()) throw ConfigError(field + ".mode", "no such mode");
            const double T2 = detail::json_number(f, "T2", field);
            if (!(T2 > 0.0)) throw ConfigError(field + ".T2", "must be positive");
            sys.forces[mode] =
                ForceProfile::gauss_cos(detail::json_number(f, "F0", field, 1.0), detail::json_number(f, "omega_f", field, 0.0),
                                        detail::json_number(f, "t_f", field, 0.0), T2, sys.mass);
        }
    }
    detail::as_config_error("system", [&] {
        sys.validate();
        return 0;
    });
    const io::json g = j.value("grid", io::json::object());
    if (g.contains("t_min") || g.contains("t_max") || g.contains("n_steps")) {
        ms.grid = detail::as_config_error("grid", [&] {
            return TimeGrid(detail::json_number(g, "t_min", "grid"), detail::json_number(g, "t_max", "grid"),
                            static_cast<std::size_t>(detail::json_number(g, "n_steps", "grid")));
        });
    } else {
        ms.grid = sys.default_grid(detail::json_number(g, "span", "grid", 30.0),
                                   detail::json_number(g, "points_per_period", "grid", 40.0));
    }
    const io::json tms = j.value("times", io::json::object());
    ms.t0 = detail::json_number(tms, "t0", "times", ms.grid.t_min);
    ms.t = detail::json_number(tms, "t", "times", ms.grid.t_max);
    if (!(ms.t0 < ms.t)) throw ConfigError("times.t0", "must precede times.t");
    ms.tol = detail::json_number(j, "tol", "system", 1e-12);
    if (j.contains("output") && j["output"].contains("prefix")) ms.output_prefix = j["output"]["prefix"].get<std::string>();
    return ms;
}

inline MultimodeScenario load_multimode(const std::filesystem::path& p) {
    return parse_multimode(io::read_file(p), p.string());
}

struct MultimodeOutput {
    MultimodeJost jost;
    MultimodeEvolution evolution;
    io::json summary;
};

inline MultimodeOutput run_multimode(const MultimodeScenario& ms, std::size_t threads = 1, bool write = true) {
    MultimodeOptions opt;
    opt.tol = ms.tol;
    opt.threads = threads;
    MultimodeOutput out{solve_multimode_jost(ms.system, ms.grid, opt), {}, {}};
    out.evolution = multimode_evolution(ms.system, out.jost, ms.t0, ms.t);
    const Eigen::VectorXd occ = multimode_occupations(out.evolution);
    out.summary = io::json{{"version", version},
                           {"config_hash", ms.config_hash},
                           {"n", ms.system.n()},
                           {"omega_ref", out.jost.omega_ref},
                           {"t0", ms.t0},
                           {"t", ms.t},
                           {"unitarity_defect", unitarity_defect(out.jost)},
                           {"occupations", std::vector<double>(occ.data(), occ.data() + occ.size())}};
    if (write) {
        auto matrix = [&](const MatrixXc& M, const std::string& name) {
            std::vector<std::string> head{"row"};
            for (Eigen::Index c = 0; c < M.cols(); ++c) {
                head.push_back("re_" + std::to_string(c));
                head.push_back("im_" + std::to_string(c));
            }
            head.push_back("config_hash");
            io::CsvTable tab(head);
            for (Eigen::Index r = 0; r < M.rows(); ++r) {
                io::CsvTable::Row row;
                row << static_cast<double>(r);
                for (Eigen::Index c = 0; c < M.cols(); ++c) row << M(r, c).real() << M(r, c).imag();
                row << ms.config_hash;
                tab.add(row);
            }
            tab.write(ms.output_prefix + "_" + name + ".csv");
        };
        matrix(out.jost.A, "A");
        matrix(out.jost.B, "B");
        matrix(out.evolution.U, "U");
        matrix(out.evolution.V, "V");
        io::CsvTable al({"mode", "re_alpha", "im_alpha", "abs_alpha", "occupation", "config_hash"});
        for (Eigen::Index i = 0; i < out.evolution.alpha.size(); ++i) {
            io::CsvTable::Row row;
            const cplx a = out.evolution.alpha[i];
            row << static_cast<double>(i) << a.real() << a.imag() << std::abs(a) << occ[i] << ms.config_hash;
            al.add(row);
        }
        al.write(ms.output_prefix + "_alpha.csv");
        io::write_json(ms.output_prefix + "_summary.json", out.summary);
    }
    return out;
}

} // namespace vacrad

#endif // VACRAD_SCENARIO_HPP
