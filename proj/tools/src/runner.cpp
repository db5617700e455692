#include "runner.hpp"

#include "outage/errors.hpp"
#include "outage/spa.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace outage::cli {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

bool is_case_a(CaseKind k) { return k == CaseKind::a_poisson || k == CaseKind::a_binomial || k == CaseKind::a_single; }

FadingModel fading_of(const ModelSpec& m) {
    if (m.fading == "lognormal") return FadingModel::lognormal(m.ln_mu, m.ln_sigma);
    return FadingModel::gamma(m.fading_shape, m.fading_rate);
}

NetworkGeometry geometry_of(const ModelSpec& m) {
    NetworkGeometry g;
    g.lambda = m.intensity();
    g.a = m.a;
    g.R = m.R;
    g.alpha = m.alpha;
    g.P = m.power;
    g.window = m.window;
    return g;
}

CaseAModel case_a_of(const ModelSpec& m) {
    CaseAModel a;
    a.fading = fading_of(m);
    a.theta = m.theta;
    a.lambda1 = m.lambda1;
    a.lambda2 = m.lambda2;
    a.L = m.L;
    a.p = m.p_coop;
    a.aggregation = m.kind == CaseKind::a_poisson    ? CaseAModel::Aggregation::poisson
                    : m.kind == CaseKind::a_binomial ? CaseAModel::Aggregation::binomial
                                                     : CaseAModel::Aggregation::single;
    return a;
}

SimModel sim_model_of(const ModelSpec& m) {
    if (is_case_a(m.kind)) return case_a_of(m);
    if (m.kind == CaseKind::b) return CaseBModel{geometry_of(m), m.theta};
    return CaseCModel{geometry_of(m), m.theta, fading_of(m)};
}

CgfPtr cgf_of(const ModelSpec& m) {
    if (is_case_a(m.kind)) return case_a_cgf(case_a_of(m));
    if (m.kind == CaseKind::b) return case_b_cgf({geometry_of(m), m.theta});
    return case_c_cgf({geometry_of(m), m.theta, fading_of(m)});
}

// Case A gains carry the power P on both sides, so noise enters as noise / P.
double noise_in_model_units(const ModelSpec& m) { return is_case_a(m.kind) ? m.noise / m.power : m.noise; }

CumulantSet cumulants_of(const ModelSpec& m, int order) {
    if (is_case_a(m.kind)) return case_a_cgf(case_a_of(m))->cumulants(order);
    const FadingModel f = m.kind == CaseKind::b ? FadingModel::unit() : fading_of(m);
    return omega_cumulants(geometry_of(m), f, m.theta, order);
}

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) {
        if (p.empty()) continue;
        if (!s.empty()) s += "; ";
        s += p;
    }
    return s;
}

std::string diag_note(const OutageResult& r) {
    std::vector<std::string> parts;
    if (r.diag.panels > 0) parts.push_back("panels=" + std::to_string(r.diag.panels));
    if (!r.diag.base.empty()) parts.push_back("base=" + r.diag.base);
    if (r.diag.saddle) parts.push_back("saddle=" + format_number(*r.diag.saddle));
    if (r.diag.order) parts.push_back("order=" + std::to_string(*r.diag.order));
    if (r.diag.min_density) parts.push_back("min_density=" + format_number(*r.diag.min_density));
    for (const auto& n : r.diag.notes) parts.push_back(n);
    return join(parts);
}

Cell evaluate(const ModelSpec& m, const MethodSpec& me, const std::string& method) {
    Cell cell;
    cell.method = method;
    const double eval_point = -m.theta * noise_in_model_units(m);
    OutageResult r;
    if (method == "gil_pelaez") {
        r = outage_gp(*cgf_of(m), eval_point, me.gp);
    } else if (method.rfind("spa:", 0) == 0) {
        const std::string b = method.substr(4);
        const BaseKind kind = b == "normal" ? BaseKind::normal
                              : b == "chisq" ? BaseKind::chi_square
                              : b == "ig"    ? BaseKind::inverse_gaussian
                                             : BaseKind::nig;
        r = outage_spa(*cgf_of(m), eval_point, kind);
    } else if (method == "charlier:hermite") {
        r = outage_hermite(cumulants_of(m, std::max(me.charlier_order, 4)), eval_point, me.charlier_order,
                           me.charlier_mode);
    } else if (method == "charlier:t") {
        r = outage_krishnamoorthy(cumulants_of(m, m.cumulant_order), eval_point, me.charlier_mode);
    } else if (method == "mc") {
        SimConfig sc;
        sc.trials = me.mc_trials;
        sc.seed = me.mc_seed;
        sc.noise = noise_in_model_units(m);
        sc.count_mode = me.mc_count;
        sc.binomial_mode = me.mc_binomial;
        sc.workers = me.mc_workers;
        sc.window_radius = m.window;
        sc.model = sim_model_of(m);
        const auto e = simulate(sc);
        cell.p_out = e.p_hat;
        cell.err = e.std_err;
        cell.note = "trials=" + std::to_string(e.trials) + "; seed=" + std::to_string(me.mc_seed);
        return cell;
    } else {
        throw ArgumentError("unknown method " + method);
    }
    cell.p_out = r.p_out;
    if (r.method == Method::gil_pelaez || r.diag.err_estimate > 0.0) cell.err = r.diag.err_estimate;
    cell.note = diag_note(r);
    return cell;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

} // namespace

std::vector<Cell> run_cells(const RunConfig& cfg, std::ostream& log) {
    std::vector<std::optional<double>> points;
    if (cfg.sweep.variable.empty()) {
        points.push_back(std::nullopt);
    } else {
        for (double v : cfg.sweep.values) points.push_back(v);
    }
    std::vector<Cell> cells;
    for (const auto& pt : points) {
        const ModelSpec m = pt ? apply_sweep(cfg.model, cfg.sweep.variable, *pt) : cfg.model;
        for (const auto& method : cfg.methods.use) {
            Cell c;
            try {
                c = evaluate(m, cfg.methods, method);
            } catch (const std::exception& ex) {
                c = Cell{};
                c.method = method;
                c.note = ex.what();
                log << "note: " << (pt ? cfg.sweep.variable + "=" + format_number(*pt) + " " : std::string{})
                    << method << ": " << ex.what() << "\n";
            }
            c.sweep_value = pt;
            cells.push_back(std::move(c));
        }
    }
    return cells;
}

void write_csv(const std::vector<Cell>& cells, std::ostream& out) {
    out << "sweep_value,method,p_out,diag_err,diag_note\n";
    for (const auto& c : cells) {
        out << opt_number(c.sweep_value) << ',' << c.method << ',' << opt_number(c.p_out) << ','
            << opt_number(c.err) << ',' << csv_field(c.note) << '\n';
    }
}

void write_cumulants(const RunConfig& cfg, std::ostream& out) {
    const int N = cfg.model.cumulant_order;
    out << "sweep_value";
    for (int n = 1; n <= N; ++n) out << ",k" << n;
    for (int n = 1; n <= N; ++n) out << ",k" << n << "_lim";
    out << ",skew,ex_kurt\n";
    std::vector<std::optional<double>> points;
    if (cfg.sweep.variable.empty()) {
        points.push_back(std::nullopt);
    } else {
        for (double v : cfg.sweep.values) points.push_back(v);
    }
    for (const auto& pt : points) {
        const ModelSpec m = pt ? apply_sweep(cfg.model, cfg.sweep.variable, *pt) : cfg.model;
        const CumulantSet k = cumulants_of(m, N);
        out << opt_number(pt);
        for (int n = 1; n <= N; ++n) out << ',' << format_number(k.k(n));
        for (int n = 1; n <= N; ++n) {
            if (is_case_a(m.kind)) {
                out << ",NA";
                continue;
            }
            const FadingModel f = m.kind == CaseKind::b ? FadingModel::unit() : fading_of(m);
            try {
                out << ',' << format_number(omega_cumulant_lim(n, geometry_of(m), f));
            } catch (const std::exception&) {
                out << ",NA";
            }
        }
        out << ',' << format_number(k.skewness()) << ',' << format_number(k.ex_kurtosis()) << '\n';
    }
}

} // namespace outage::cli
