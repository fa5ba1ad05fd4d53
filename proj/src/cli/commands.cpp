#include "crossing/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <sstream>

#include "crossing/cli/model_io.hpp"
#include "crossing/coreint.hpp"
#include "crossing/deriv.hpp"
#include "crossing/errors.hpp"
#include "crossing/kendall.hpp"
#include "crossing/level.hpp"
#include "crossing/mc.hpp"
#include "crossing/parallel.hpp"

namespace crossing::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = {
        {"fig1", "", 1.0, 6.0, 40.0, 100.0, 0.05, 0.05, 3.0, 60},
        {"fig2", "", 1.0, 6.0, 40.0, 100.0, 0.05, 0.8, 1.2, 0},
        {"fig3",
         "T.family = exponential\nT.rate = 4/5\nY.family = pareto\nY.a = 10\nY.b = 0.05\n",
         0, 0, 80.0, 200.0, 0.05, 0.2, 3.4, 17},
        {"fig4",
         "T.family = erlang\nT.rate = 8/5\nT.shape = 2\nY.family = exponential\nY.rate = 3/5\n",
         0, 0, 48.0, 200.0, 0.05, 0.0, 10.0 / 3.0, 21},
    };
    return all;
}

std::string md_hash(double M, double Dsq) {
    return hash_text("md(M=" + format_number(M) + ",Dsq=" + format_number(Dsq) + ")");
}

struct Options {
    std::string model, preset, M, Dsq, alpha, t, u, c, v, sweep, sweep_var = "c", out;
    std::uint64_t paths = 100000, seed = 20240601;
    unsigned threads = 0;
    // command specific
    std::string variant = "plain", form = "probability", method = "root_on_a", boundary = "corrected";
    bool exp_y = false;
    std::size_t time_points = 8000, level_points = 16000;
    int figure = 0;
};

struct Source {
    std::optional<RenewalModel> model;
    MomentSummary summary{};
    std::string hash;
    const Preset* preset = nullptr;
};

Source resolve_source(const Options& o, bool need_model) {
    Source s;
    if (!o.preset.empty()) s.preset = &find_preset(o.preset);
    if (!o.model.empty()) {
        s.model = load_model(o.model);
    } else if (!o.M.empty() || !o.Dsq.empty()) {
        if (o.M.empty() || o.Dsq.empty()) throw UsageError("--M and --Dsq go together");
        const double M = parse_number(o.M), Dsq = parse_number(o.Dsq);
        if (!(M > 0) || !(Dsq > 0)) throw UsageError("--M and --Dsq must be positive");
        s.summary = summary_from_md(M, Dsq);
        s.hash = md_hash(M, Dsq);
    } else if (s.preset && !s.preset->model_text.empty()) {
        s.model = parse_model(s.preset->model_text);
    } else if (s.preset) {
        s.summary = summary_from_md(s.preset->M, s.preset->Dsq);
        s.hash = md_hash(s.preset->M, s.preset->Dsq);
    } else {
        throw UsageError("give --model, --preset or --M/--Dsq");
    }
    if (s.model) {
        s.summary = s.model->summary();
        s.hash = model_hash(*s.model);
    } else if (need_model) {
        throw UsageError("this command needs a model file (--model or a fig3/fig4 preset)");
    }
    return s;
}

double scalar(const std::string& text, const Preset* p, double Preset::*field, const char* flag) {
    if (!text.empty()) return parse_number(text);
    if (p && field) return p->*field;
    throw UsageError(std::string("missing ") + flag);
}

struct Point {
    double u = kNaN, c = kNaN, t = kNaN;
};

std::vector<Point> make_points(const Options& o, const Source& src, bool need_u) {
    const Preset* p = src.preset;
    if (o.sweep_var != "u" && o.sweep_var != "c" && o.sweep_var != "t")
        throw UsageError("--sweep-var must be u, c or t");
    // a preset without --c or --sweep runs over its figure c range
    const bool preset_sweep = o.sweep.empty() && o.c.empty() && p && p->points > 1;
    const bool sweeping = !o.sweep.empty() || preset_sweep;
    const std::string var = preset_sweep ? "c" : o.sweep_var;
    std::vector<double> sv;
    if (preset_sweep) {
        for (int i = 0; i < p->points; ++i) sv.push_back(p->c_lo + (p->c_hi - p->c_lo) * i / (p->points - 1));
    } else if (sweeping) {
        sv = parse_sweep(o.sweep);
    }
    auto get = [&](const std::string& name, const std::string& text, double Preset::*field, bool needed) {
        if (sweeping && var == name) return kNaN;
        if (!needed && text.empty()) return kNaN;
        return scalar(text, p, field, ("--" + name).c_str());
    };
    Point base{get("u", o.u, &Preset::u, need_u), get("c", o.c, nullptr, true), get("t", o.t, &Preset::t, true)};
    if (!sweeping) return {base};
    std::vector<Point> pts;
    for (double x : sv) {
        Point q = base;
        (var == "u" ? q.u : var == "c" ? q.c : q.t) = x;
        pts.push_back(q);
    }
    return pts;
}

std::vector<std::string> with_provenance(std::vector<std::string> cols, std::initializer_list<const char*> extra) {
    for (const char* e : extra) cols.emplace_back(e);
    cols.emplace_back("model_hash");
    cols.emplace_back("error_diag");
    return cols;
}

/// Fills one row per point; failures of the numerical layer land in error_diag.
template <class Fill>
bool fill_rows(CsvTable& table, const std::vector<Point>& pts, bool pooled, unsigned threads, const std::string& hash,
               Fill&& fill) {
    std::vector<std::vector<std::string>> rows(pts.size(), table.blank());
    std::vector<char> ok(pts.size(), 1);
    auto one = [&](std::size_t i) {
        auto& row = rows[i];
        table.set(row, "model_hash", hash);
        try {
            fill(pts[i], row);
        } catch (const Error& e) {
            table.set(row, "error_diag", e.what());
            ok[i] = 0;
        }
    };
    if (pooled)
        parallel_chunks(pts.size(), pts.size(), threads, [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) one(i);
        });
    else
        for (std::size_t i = 0; i < pts.size(); ++i) one(i);
    for (auto& r : rows) table.push(std::move(r));
    return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

void emit(const CsvTable& table, const Options& o, const std::string& name, std::ostream& out) {
    table.write(out);
    if (o.out.empty()) return;
    std::filesystem::create_directories(o.out);
    table.write(std::filesystem::path(o.out) / (name + ".csv"));
}

McConfig mc_config(const Options& o) {
    McConfig cfg;
    cfg.npaths = o.paths;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    if (cfg.npaths == 0) throw UsageError("--paths must be positive");
    return cfg;
}

double alpha_of(const Options& o, const Source& src) {
    const double a = scalar(o.alpha, src.preset, &Preset::alpha, "--alpha");
    if (!(a > 0 && a < 1)) throw UsageError("--alpha must lie in (0, 1)");
    return a;
}

// ---- commands ----

int cmd_moments(const Options& o, std::ostream& out) {
    const Source src = resolve_source(o, false);
    const auto& s = src.summary;
    CsvTable table(with_provenance({"et", "ey", "dt", "dy", "m", "dsq", "cstar"}, {}));
    auto row = table.blank();
    for (auto [k, v] : std::initializer_list<std::pair<const char*, double>>{
             {"et", s.ET}, {"ey", s.EY}, {"dt", s.DT}, {"dy", s.DY}, {"m", s.M}, {"dsq", s.Dsq}, {"cstar", s.cstar}})
        table.set(row, k, v);
    table.set(row, "model_hash", src.hash);
    table.push(row);
    if (src.model) out << "# model " << src.model->describe() << '\n';
    out << "# M = " << format_number(s.M) << ", D^2 = " << format_number(s.Dsq)
        << ", critical rate c* = " << format_number(s.cstar) << '\n';
    emit(table, o, "moments", out);
    return 0;
}

ApproxVariant parse_variant(const std::string& v) {
    if (v == "plain") return ApproxVariant::Plain;
    if (v == "conditional") return ApproxVariant::ConditionalWeighted;
    if (v == "convolution") return ApproxVariant::ConvolutionWeighted;
    throw UsageError("--variant must be plain, conditional or convolution");
}

int cmd_approx(const Options& o, std::ostream& out) {
    const Source src = resolve_source(o, false);
    const auto variant = parse_variant(o.variant);
    if (!src.model && variant != ApproxVariant::Plain) throw UsageError("weighted variants need a model file");
    const auto pts = make_points(o, src, true);
    CsvTable table(with_provenance({"u", "c", "t", "variant", "probability", "clamped_diag", "quality_diag"},
                                   {"quad_abs_tol", "quad_rel_tol"}));
    const bool ok = fill_rows(table, pts, true, o.threads, src.hash, [&](const Point& p, auto& row) {
        table.set(row, "u", p.u);
        table.set(row, "c", p.c);
        table.set(row, "t", p.t);
        table.set(row, "variant", o.variant);
        table.set(row, "quad_abs_tol", kCoreQuadrature.abs_tol);
        table.set(row, "quad_rel_tol", kCoreQuadrature.rel_tol);
        ApproxResult r;
        if (src.model) {
            r = approx_crossing_prob(*src.model, p.u, p.c, p.t, variant);
        } else {
            if (!(p.u > 0) || p.c < 0 || p.t < 0) throw DomainError("need u > 0, c >= 0, t >= 0");
            const double a = a_kernel({p.u, p.c, p.t, 0.0, src.summary.M, src.summary.Dsq});
            const double cl = std::clamp(a, 0.0, 1.0);
            r = {cl, cl != a, small_u(p.u, src.summary.M, src.summary.Dsq) ? Quality::SmallUWarning : Quality::LargeU};
        }
        table.set(row, "probability", r.value);
        table.set(row, "clamped_diag", r.clamped ? "1" : "0");
        table.set(row, "quality_diag", r.quality == Quality::LargeU ? "large_u" : "small_u_warning");
    });
    emit(table, o, "approx", out);
    return ok ? 0 : 1;
}

int cmd_kendall(const Options& o, std::ostream& out) {
    const Source src = resolve_source(o, true);
    const auto pts = make_points(o, src, true);
    const double v = o.v.empty() ? 0.0 : parse_number(o.v);
    if (o.form != "probability" && o.form != "dc" && o.form != "du")
        throw UsageError("--form must be probability, dc or du");
    if (o.boundary != "corrected" && o.boundary != "printed") throw UsageError("--boundary must be corrected or printed");
    if (o.exp_y && (o.form != "probability" || v > 0)) throw UsageError("--exp-y applies to unconditional probabilities");
    KendallGrid grid;
    grid.time_points = o.time_points;
    grid.level_points = o.level_points;
    CsvTable table(with_provenance({"u", "c", "t", "v", "form", "value", "neglected_mass_diag", "orders_diag",
                                    "h_time_diag", "h_level_diag", "window_level_diag"},
                                   {"eps", "mass_tolerance"}));
    const bool ok = fill_rows(table, pts, true, o.threads, src.hash, [&](const Point& p, auto& row) {
        table.set(row, "u", p.u);
        table.set(row, "c", p.c);
        table.set(row, "t", p.t);
        table.set(row, "v", v);
        table.set(row, "form", o.exp_y ? "probability_exp_y" : o.form);
        table.set(row, "eps", grid.eps);
        table.set(row, "mass_tolerance", grid.mass_tolerance);
        const auto& m = *src.model;
        KendallResult r;
        if (o.form == "probability")
            r = v > 0 ? kendall_conditional(m, p.u, p.c, p.t, v, grid)
                : o.exp_y ? kendall_exp_y(m, p.u, p.c, p.t, grid)
                          : kendall_unconditional(m, p.u, p.c, p.t, grid);
        else if (o.form == "dc")
            r = v > 0 ? kendall_dc(m, p.u, p.c, p.t, v, grid) : kendall_dc_unconditional(m, p.u, p.c, p.t, grid);
        else
            r = v > 0 ? kendall_du(m, p.u, p.c, p.t, v, grid)
                      : kendall_du_unconditional(m, p.u, p.c, p.t, grid,
                                                 o.boundary == "printed" ? BoundaryForm::AsPrinted
                                                                         : BoundaryForm::Corrected);
        table.set(row, "value", r.value);
        table.set(row, "neglected_mass_diag", r.diag.neglected_mass);
        table.set(row, "orders_diag", static_cast<double>(r.diag.orders));
        table.set(row, "h_time_diag", r.diag.h_time);
        table.set(row, "h_level_diag", r.diag.h_level);
        table.set(row, "window_level_diag", r.diag.window_level);
    });
    emit(table, o, "kendall", out);
    return ok ? 0 : 1;
}

int cmd_deriv(const Options& o, std::ostream& out) {
    const Source src = resolve_source(o, false);
    const auto pts = make_points(o, src, true);
    const double v = o.v.empty() ? 0.0 : parse_number(o.v);
    CsvTable table(with_provenance({"u", "c", "t", "v", "approx_dc", "a_dc", "approx_du", "a_du", "quality_diag"}, {}));
    const bool ok = fill_rows(table, pts, true, o.threads, src.hash, [&](const Point& p, auto& row) {
        table.set(row, "u", p.u);
        table.set(row, "c", p.c);
        table.set(row, "t", p.t);
        table.set(row, "v", v);
        const CoreParams cp{p.u, p.c, p.t, v, src.summary.M, src.summary.Dsq};
        const auto F = approx_dc(cp);
        const auto G = approx_du(cp);
        table.set(row, "approx_dc", F.value);
        table.set(row, "approx_du", G.value);
        if (v == 0) {
            table.set(row, "a_dc", a_dc(cp));
            table.set(row, "a_du", a_du(cp));
        }
        table.set(row, "quality_diag", F.quality == Quality::LargeU ? "large_u" : "small_u_warning");
    });
    emit(table, o, "deriv", out);
    return ok ? 0 : 1;
}

int cmd_level(const Options& o, std::ostream& out) {
    std::vector<std::string> methods;
    if (o.method == "all")
        methods = {"root_on_a", "asym", "mc_bisection"};
    else if (o.method == "root_on_a" || o.method == "asym" || o.method == "mc_bisection")
        methods = {o.method};
    else
        throw UsageError("--method must be root_on_a, asym, mc_bisection or all");
    const bool need_model = std::find(methods.begin(), methods.end(), "mc_bisection") != methods.end();
    const Source src = resolve_source(o, need_model);
    if (o.sweep_var == "u" && !o.sweep.empty()) throw UsageError("level sweeps run over c or t");
    const double alpha = alpha_of(o, src);
    const auto base = make_points(o, src, false);
    const McConfig mc = need_model ? mc_config(o) : McConfig{};
    std::vector<Point> pts;
    std::vector<std::string> row_method;
    for (const auto& p : base)
        for (const auto& m : methods) {
            pts.push_back(p);
            row_method.push_back(m);
        }
    CsvTable table(with_provenance({"c", "alpha", "t", "method", "level", "residual_diag", "bracket_lo_diag",
                                    "bracket_hi_diag", "iterations_diag", "regime_diag"},
                                   {"seed", "paths"}));
    // MC rows use the thread pool internally; the rest are cheap
    const bool ok = fill_rows(table, pts, false, o.threads, src.hash, [&](const Point& p, auto& row) {
        const std::size_t i = static_cast<std::size_t>(&p - pts.data());
        const auto& m = row_method[i];
        table.set(row, "c", p.c);
        table.set(row, "alpha", alpha);
        table.set(row, "t", p.t);
        const Regime regime = classify_regime(p.c, src.summary);
        table.set(row, "regime_diag", to_string(regime));
        if (m == "root_on_a") {
            table.set(row, "method", m);
            const auto r = solve_heuristic_level(src.summary, alpha, p.t, p.c);
            table.set(row, "level", r.level);
            table.set(row, "residual_diag", r.residual);
            table.set(row, "bracket_lo_diag", r.bracket_lo);
            table.set(row, "bracket_hi_diag", r.bracket_hi);
            table.set(row, "iterations_diag", static_cast<double>(r.iterations));
        } else if (m == "asym") {
            table.set(row, "method", regime == Regime::SubCritical     ? to_string(LevelMethod::AsymSub)
                                     : regime == Regime::CriticalBand ? to_string(LevelMethod::AsymCriticalBand)
                                                                      : to_string(LevelMethod::AsymSuper));
            table.set(row, "level", level_asym(src.summary, alpha, p.t, p.c, regime));
        } else {
            table.set(row, "method", m);
            table.set(row, "seed", std::to_string(mc.seed));
            table.set(row, "paths", std::to_string(mc.npaths));
            const auto r = simulate_level(*src.model, alpha, p.t, p.c, mc);
            table.set(row, "level", r.level);
            table.set(row, "residual_diag", r.residual);
            table.set(row, "bracket_lo_diag", r.bracket_lo);
            table.set(row, "bracket_hi_diag", r.bracket_hi);
            table.set(row, "iterations_diag", static_cast<double>(r.iterations));
        }
    });
    emit(table, o, "level", out);
    return ok ? 0 : 1;
}

int cmd_bounds(const Options& o, std::ostream& out) {
    const Source src = resolve_source(o, false);
    const double alpha = alpha_of(o, src);
    if (o.sweep_var == "u" && !o.sweep.empty()) throw UsageError("bounds sweeps run over c or t");
    const auto pts = make_points(o, src, false);
    CsvTable table(with_provenance({"c", "alpha", "t", "lower", "upper", "kappa", "upper_kappa", "regime_diag"}, {}));
    const bool ok = fill_rows(table, pts, true, o.threads, src.hash, [&](const Point& p, auto& row) {
        table.set(row, "c", p.c);
        table.set(row, "alpha", alpha);
        table.set(row, "t", p.t);
        table.set(row, "regime_diag", to_string(classify_regime(p.c, src.summary)));
        if (p.c <= src.summary.cstar) {
            const auto b = bounds_subcritical(src.summary, alpha, p.t, p.c);
            table.set(row, "lower", b.lo);
            table.set(row, "upper", b.hi);
        } else {
            if (!src.model) throw UnsupportedModelError("the super-critical bound needs a model file");
            table.set(row, "kappa", adjustment_coefficient(*src.model, p.c));
            table.set(row, "upper_kappa", upper_bound_supercritical(*src.model, alpha, p.c));
        }
    });
    emit(table, o, "bounds", out);
    return ok ? 0 : 1;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    const Source src = resolve_source(o, true);
    const auto pts = make_points(o, src, true);
    const double v = o.v.empty() ? 0.0 : parse_number(o.v);
    const McConfig mc = mc_config(o);
    CsvTable table(with_provenance({"u", "c", "t", "v", "phat", "std_error", "hits"}, {"seed", "paths"}));
    const bool ok = fill_rows(table, pts, false, o.threads, src.hash, [&](const Point& p, auto& row) {
        table.set(row, "u", p.u);
        table.set(row, "c", p.c);
        table.set(row, "t", p.t);
        table.set(row, "v", v);
        table.set(row, "seed", std::to_string(mc.seed));
        table.set(row, "paths", std::to_string(mc.npaths));
        const auto e = v > 0 ? estimate_conditional_crossing_prob(*src.model, p.u, p.c, p.t, v, mc)
                             : estimate_crossing_prob(*src.model, p.u, p.c, p.t, mc);
        table.set(row, "phat", e.phat);
        table.set(row, "std_error", e.std_error);
        table.set(row, "hits", std::to_string(e.hits));
    });
    emit(table, o, "simulate", out);
    return ok ? 0 : 1;
}

int cmd_figure(const Options& o, std::ostream& out) {
    int id = o.figure;
    if (id == 0 && !o.preset.empty()) {
        const auto& p = find_preset(o.preset);
        id = p.name.back() - '0';
    }
    if (id < 1 || id > 4) throw UsageError("figure id must be 1..4 (positional or --preset figN)");
    FigureOptions fo;
    fo.paths = o.paths;
    fo.seed = o.seed;
    fo.threads = o.threads;
    if (!o.sweep.empty()) fo.sweep = o.sweep;
    if (fo.paths == 0) throw UsageError("--paths must be positive");
    const auto fig = make_figure(id, fo);
    const std::filesystem::path dir = o.out.empty() ? "." : o.out;
    std::filesystem::create_directories(dir);
    const std::string stem = "fig" + std::to_string(id);
    fig.table.write(dir / (stem + ".csv"));
    for (const auto& [name, plot] : fig.plots) write_svg(plot, dir / (name + ".svg"));
    fig.table.write(out);
    return fig.ok ? 0 : 1;
}

// ---- figures ----

std::vector<double> figure_grid(const Preset& p, const FigureOptions& opt, std::optional<double> include) {
    std::vector<double> g;
    if (opt.sweep) {
        g = parse_sweep(*opt.sweep);
    } else {
        for (int i = 0; i < p.points; ++i)
            g.push_back(p.c_lo + (p.c_hi - p.c_lo) * i / (p.points - 1));
    }
    if (include) {
        // sweep arithmetic lands next to c* rather than on it
        bool hit = false;
        for (double& x : g)
            if (std::abs(x - *include) <= 1e-9 * std::abs(*include)) {
                x = *include;
                hit = true;
            }
        if (!hit) {
            g.push_back(*include);
            std::sort(g.begin(), g.end());
        }
    }
    return g;
}

std::vector<double> column_values(const CsvTable& t, const std::string& name) {
    std::vector<double> out;
    const auto j = t.column(name);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& s = t.row(i)[j];
        out.push_back(s.empty() ? kNaN : std::stod(s));
    }
    return out;
}

Series series(const CsvTable& t, const std::string& xcol, const std::string& ycol, std::string name,
              std::string color, bool markers = false) {
    return {std::move(name), column_values(t, xcol), column_values(t, ycol), std::move(color), markers};
}

}  // namespace

std::vector<double> parse_sweep(std::string_view text) {
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos) throw UsageError("sweep must look like lo:hi:n");
    const double lo = parse_number(text.substr(0, a));
    const double hi = parse_number(text.substr(a + 1, b - a - 1));
    const double nd = parse_number(text.substr(b + 1));
    if (!(nd >= 1) || nd != std::floor(nd) || nd > 1e6) throw UsageError("sweep count must be a positive integer");
    const auto n = static_cast<int>(nd);
    if (n == 1) return {lo};
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    out.back() = hi;
    return out;
}

const Preset& find_preset(std::string_view name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw UsageError("unknown preset '" + std::string(name) + "' (fig1, fig2, fig3, fig4)");
}

FigureOutput make_figure(int id, const FigureOptions& opt) {
    FigureOutput fig;
    const McConfig mc{opt.paths, opt.seed, 100, 1e-4, opt.threads};
    std::string diag;  // failures of the current row
    auto guarded = [&](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            fig.ok = false;
            if (!diag.empty()) diag += "; ";
            diag += e.what();
        }
    };
    auto finish_row = [&](std::vector<std::string>& row) {
        fig.table.set(row, "error_diag", diag);
        fig.table.push(row);
        diag.clear();
    };

    if (id == 1) {
        const auto& p = find_preset("fig1");
        fig.table = CsvTable({"c", "approx_dc", "a_dc", "u", "t", "m", "dsq", "model_hash", "error_diag"});
        for (double c : figure_grid(p, opt, std::nullopt)) {
            auto row = fig.table.blank();
            const CoreParams cp{p.u, c, p.t, 0.0, p.M, p.Dsq};
            fig.table.set(row, "c", c);
            guarded([&] { fig.table.set(row, "approx_dc", approx_dc(cp).value); });
            guarded([&] { fig.table.set(row, "a_dc", a_dc(cp)); });
            fig.table.set(row, "u", p.u);
            fig.table.set(row, "t", p.t);
            fig.table.set(row, "m", p.M);
            fig.table.set(row, "dsq", p.Dsq);
            fig.table.set(row, "model_hash", md_hash(p.M, p.Dsq));
            finish_row(row);
        }
        Plot plot{"c-derivatives, t=100, u=40, M=1, D^2=6", "c", "d/dc", {}, {{1.0, "c*=1"}}, {{0.0, ""}}};
        plot.series = {series(fig.table, "c", "approx_dc", "F (approximate d/dc)", "#c0392b"),
                       series(fig.table, "c", "a_dc", "d/dc of A", "#1f4e9a")};
        fig.plots.push_back({"fig1", plot});
        return fig;
    }

    if (id == 2) {
        const auto& p = find_preset("fig2");
        fig.table = CsvTable({"u", "approx_du_c0_8", "a_du_c0_8", "approx_du_c1_2", "a_du_c1_2", "t", "m", "dsq",
                              "model_hash", "error_diag"});
        const auto grid = opt.sweep ? parse_sweep(*opt.sweep) : parse_sweep("5:200:40");
        for (double u : grid) {
            auto row = fig.table.blank();
            fig.table.set(row, "u", u);
            for (auto [c, tag] : {std::pair{p.c_lo, "c0_8"}, std::pair{p.c_hi, "c1_2"}}) {
                const CoreParams cp{u, c, p.t, 0.0, p.M, p.Dsq};
                guarded([&] { fig.table.set(row, std::string("approx_du_") + tag, approx_du(cp).value); });
                guarded([&] { fig.table.set(row, std::string("a_du_") + tag, a_du(cp)); });
            }
            fig.table.set(row, "t", p.t);
            fig.table.set(row, "m", p.M);
            fig.table.set(row, "dsq", p.Dsq);
            fig.table.set(row, "model_hash", md_hash(p.M, p.Dsq));
            finish_row(row);
        }
        Plot above{"u-derivatives, c=0.8, t=100, M=1, D^2=6", "u", "d/du", {}, {}, {{0.0, ""}}};
        above.series = {series(fig.table, "u", "approx_du_c0_8", "G (approximate d/du)", "#c0392b"),
                        series(fig.table, "u", "a_du_c0_8", "d/du of A", "#1f4e9a")};
        Plot below{"u-derivatives, c=1.2, t=100, M=1, D^2=6", "u", "d/du", {}, {}, {{0.0, ""}}};
        below.series = {series(fig.table, "u", "approx_du_c1_2", "G (approximate d/du)", "#c0392b"),
                        series(fig.table, "u", "a_du_c1_2", "d/du of A", "#1f4e9a")};
        fig.plots.push_back({"fig2", above});
        fig.plots.push_back({"fig2_below", below});
        return fig;
    }

    const auto& p = find_preset(id == 3 ? "fig3" : "fig4");
    const RenewalModel model = parse_model(p.model_text);
    const MomentSummary s = model.summary();
    const std::string hash = model_hash(model);
    const auto grid = figure_grid(p, opt, s.cstar);

    if (id == 3) {
        fig.table = CsvTable({"c", "heuristic_level", "mc_level", "mc_residual_diag", "alpha", "t", "seed", "paths",
                              "model_hash", "error_diag"});
        for (double c : grid) {
            auto row = fig.table.blank();
            fig.table.set(row, "c", c);
            guarded([&] { fig.table.set(row, "heuristic_level", solve_heuristic_level(s, p.alpha, p.t, c).level); });
            guarded([&] {
                const auto r = simulate_level(model, p.alpha, p.t, c, mc);
                fig.table.set(row, "mc_level", r.level);
                fig.table.set(row, "mc_residual_diag", r.residual);
            });
            fig.table.set(row, "alpha", p.alpha);
            fig.table.set(row, "t", p.t);
            fig.table.set(row, "seed", std::to_string(mc.seed));
            fig.table.set(row, "paths", std::to_string(mc.npaths));
            fig.table.set(row, "model_hash", hash);
            finish_row(row);
        }
        Plot plot{"levels, T exponential(4/5), Y pareto(10, 0.05), alpha=0.05, t=200", "c", "level",
                  {}, {{s.cstar, "c*=" + format_number(std::round(s.cstar * 1e4) / 1e4)}}, {{80.0, "80"}}};
        plot.series = {series(fig.table, "c", "heuristic_level", "heuristic level", "#1f4e9a"),
                       series(fig.table, "c", "mc_level", "simulated level", "#c0392b", true)};
        fig.plots.push_back({"fig3", plot});
        return fig;
    }

    fig.table = CsvTable({"c", "lower_bound", "upper_bound", "upper_bound_kappa", "mc_level", "heuristic_level",
                          "mc_residual_diag", "alpha", "t", "seed", "paths", "model_hash", "error_diag"});
    for (double c : grid) {
        auto row = fig.table.blank();
        fig.table.set(row, "c", c);
        if (c <= s.cstar) {
            guarded([&] {
                const auto b = bounds_subcritical(s, p.alpha, p.t, c);
                fig.table.set(row, "lower_bound", b.lo);
                fig.table.set(row, "upper_bound", b.hi);
            });
        } else {
            guarded([&] { fig.table.set(row, "upper_bound_kappa", upper_bound_supercritical(model, p.alpha, c)); });
        }
        guarded([&] {
            const auto r = simulate_level(model, p.alpha, p.t, c, mc);
            fig.table.set(row, "mc_level", r.level);
            fig.table.set(row, "mc_residual_diag", r.residual);
        });
        guarded([&] { fig.table.set(row, "heuristic_level", solve_heuristic_level(s, p.alpha, p.t, c).level); });
        fig.table.set(row, "alpha", p.alpha);
        fig.table.set(row, "t", p.t);
        fig.table.set(row, "seed", std::to_string(mc.seed));
        fig.table.set(row, "paths", std::to_string(mc.npaths));
        fig.table.set(row, "model_hash", hash);
        finish_row(row);
    }
    Plot plot{"bounds and levels, T erlang(8/5, 2), Y exponential(3/5), alpha=0.05, t=200", "c", "level",
              {}, {{s.cstar, "c*=4/3"}}, {{48.0, "48"}}};
    plot.series = {series(fig.table, "c", "lower_bound", "lower bound", "#2e8b57"),
                   series(fig.table, "c", "upper_bound", "upper bound", "#1f4e9a"),
                   series(fig.table, "c", "upper_bound_kappa", "upper bound (adjustment coefficient)", "#8e44ad"),
                   series(fig.table, "c", "mc_level", "simulated level", "#c0392b", true)};
    // the kappa bound blows up next to c*; keep the plot on the scale of the other curves
    double cap = 0;
    for (const auto& sr : plot.series)
        if (sr.name != "upper bound (adjustment coefficient)")
            for (double y : sr.y)
                if (std::isfinite(y)) cap = std::max(cap, y);
    for (double& y : plot.series[2].y)
        if (y > 1.5 * cap) y = kNaN;
    fig.plots.push_back({"fig4", plot});
    return fig;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"First level-crossing times of compound renewal processes", "crossing"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool mc) {
        sub->add_option("--model", o.model, "model file");
        sub->add_option("--preset", o.preset, "fig1 | fig2 | fig3 | fig4");
        sub->add_option("--M", o.M, "normalised drift M (instead of a model)");
        sub->add_option("--Dsq", o.Dsq, "normalised variance D^2 (instead of a model)");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
        if (mc) {
            sub->add_option("--paths", o.paths, "Monte Carlo paths");
            sub->add_option("--seed", o.seed, "Monte Carlo seed");
        }
    };
    auto point = [&](CLI::App* sub, bool with_u) {
        if (with_u) sub->add_option("--u", o.u, "initial level");
        sub->add_option("--c", o.c, "rate");
        sub->add_option("--t", o.t, "horizon");
        sub->add_option("--sweep", o.sweep, "lo:hi:n");
        sub->add_option("--sweep-var", o.sweep_var, "swept variable: u, c or t");
    };

    auto* moments = app.add_subcommand("moments", "moments, M, D^2 and c*");
    common(moments, false);

    auto* approx = app.add_subcommand("approx", "inverse Gaussian approximation of P{T <= t}");
    common(approx, false);
    point(approx, true);
    approx->add_option("--variant", o.variant, "plain | conditional | convolution");

    auto* kendall = app.add_subcommand("kendall", "exact crossing probability through convolutions");
    common(kendall, false);
    point(kendall, true);
    kendall->add_option("--v", o.v, "condition on T1 = v");
    kendall->add_option("--form", o.form, "probability | dc | du");
    kendall->add_flag("--exp-y", o.exp_y, "Poisson renewal probabilities (exponential Y)");
    kendall->add_option("--boundary", o.boundary, "corrected | printed (unconditional du)");
    kendall->add_option("--time-points", o.time_points, "time grid intervals");
    kendall->add_option("--level-points", o.level_points, "level grid intervals");

    auto* deriv = app.add_subcommand("deriv", "approximate and exact derivatives in c and u");
    common(deriv, false);
    point(deriv, true);
    deriv->add_option("--v", o.v, "conditional form with T1 = v");

    auto* level = app.add_subcommand("level", "fixed-probability level");
    common(level, true);
    point(level, false);
    level->add_option("--alpha", o.alpha, "probability");
    level->add_option("--method", o.method, "root_on_a | asym | mc_bisection | all");

    auto* bounds = app.add_subcommand("bounds", "elementary bounds for the level");
    common(bounds, false);
    point(bounds, false);
    bounds->add_option("--alpha", o.alpha, "probability");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo crossing probability");
    common(simulate, true);
    point(simulate, true);
    simulate->add_option("--v", o.v, "condition on T1 = v");

    auto* figure = app.add_subcommand("figure", "reproduce figure 1-4 as CSV and SVG");
    figure->add_option("id", o.figure, "figure number");
    figure->add_option("--preset", o.preset, "fig1 | fig2 | fig3 | fig4");
    figure->add_option("--out", o.out, "output directory");
    figure->add_option("--paths", o.paths, "Monte Carlo paths");
    figure->add_option("--seed", o.seed, "Monte Carlo seed");
    figure->add_option("--threads", o.threads, "worker threads, 0 = all cores");
    figure->add_option("--sweep", o.sweep, "lo:hi:n over the x axis");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (moments->parsed()) return cmd_moments(o, out);
        if (approx->parsed()) return cmd_approx(o, out);
        if (kendall->parsed()) return cmd_kendall(o, out);
        if (deriv->parsed()) return cmd_deriv(o, out);
        if (level->parsed()) return cmd_level(o, out);
        if (bounds->parsed()) return cmd_bounds(o, out);
        if (simulate->parsed()) return cmd_simulate(o, out);
        if (figure->parsed()) return cmd_figure(o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace crossing::cli
