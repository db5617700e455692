#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace outage::cli {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double ModelSpec::intensity() const {
    if (lambda) return *lambda;
    if (num_bs) return *num_bs / (std::numbers::pi * window * window);
    return 0.0;
}

namespace {

struct Entry {
    std::string value;
    int line, key_col, value_col;
};

std::string trim(const std::string& s, std::size_t& lead) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        lead = s.size();
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    lead = b;
    return s.substr(b, e - b + 1);
}

const std::map<std::string, std::set<std::string>> kKeys = {
    {"model",
     {"case", "theta", "theta_db", "power", "power_db", "noise", "noise_db", "lambda1", "lambda2", "L", "p_coop",
      "a", "R", "alpha", "window", "lambda", "num_bs", "fading", "fading_shape", "fading_rate", "lognormal_mu",
      "lognormal_sigma", "cumulant_order"}},
    {"methods",
     {"use", "gp_rel_tol", "gp_max_panels", "charlier_order", "charlier_mode", "mc_trials", "mc_seed", "mc_count",
      "mc_binomial", "mc_workers"}},
    {"sweep", {"variable", "lo", "hi", "steps", "values"}},
};

class Reader {
public:
    explicit Reader(std::map<std::string, std::map<std::string, Entry>> d) : data_(std::move(d)) {}

    const Entry* find(const std::string& sec, const std::string& key) const {
        auto s = data_.find(sec);
        if (s == data_.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    double number(const Entry& e) const {
        double v = 0.0;
        const char* b = e.value.data();
        const char* end = b + e.value.size();
        auto [ptr, ec] = std::from_chars(b, end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
            throw ConfigError(e.line, e.value_col, "expected a number, got '" + e.value + "'");
        }
        return v;
    }

    long long integer(const Entry& e) const {
        long long v = 0;
        const char* b = e.value.data();
        const char* end = b + e.value.size();
        auto [ptr, ec] = std::from_chars(b, end, v);
        if (ec != std::errc() || ptr != end) {
            throw ConfigError(e.line, e.value_col, "expected an integer, got '" + e.value + "'");
        }
        return v;
    }

    template <class T>
    void get(const std::string& sec, const std::string& key, T& out) const {
        if (const Entry* e = find(sec, key)) {
            if constexpr (std::is_floating_point_v<T>) {
                out = number(*e);
            } else if constexpr (std::is_integral_v<T>) {
                out = static_cast<T>(integer(*e));
            } else {
                out = e->value;
            }
        }
    }

    void exclusive(const std::string& sec, const std::string& k1, const std::string& k2) const {
        const Entry* a = find(sec, k1);
        const Entry* b = find(sec, k2);
        if (a && b) {
            const Entry* later = a->line > b->line ? a : b;
            throw ConfigError(later->line, later->key_col, "'" + k1 + "' and '" + k2 + "' are mutually exclusive");
        }
    }

    [[noreturn]] void fail(const std::string& sec, const std::string& key, const std::string& msg) const {
        if (const Entry* e = find(sec, key)) throw ConfigError(e->line, e->value_col, msg);
        throw ConfigError(0, 0, msg);
    }

private:
    std::map<std::string, std::map<std::string, Entry>> data_;
};

std::vector<std::pair<std::string, int>> split_list(const Entry& e) {
    std::vector<std::pair<std::string, int>> out;
    std::size_t pos = 0;
    while (pos <= e.value.size()) {
        auto comma = e.value.find(',', pos);
        if (comma == std::string::npos) comma = e.value.size();
        std::size_t lead = 0;
        const std::string item = trim(e.value.substr(pos, comma - pos), lead);
        if (item.empty()) throw ConfigError(e.line, e.value_col + static_cast<int>(pos), "empty list item");
        out.emplace_back(item, e.value_col + static_cast<int>(pos + lead));
        pos = comma + 1;
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, std::map<std::string, Entry>> data;
    std::istringstream in(text);
    std::string raw, section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        // strip comments
        const auto hash = raw.find_first_of("#;");
        const std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::size_t lead = 0;
        const std::string line = trim(body, lead);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, static_cast<int>(lead + line.size()), "expected ']'");
            std::size_t l2 = 0;
            section = trim(line.substr(1, line.size() - 2), l2);
            if (!kKeys.count(section)) {
                throw ConfigError(line_no, static_cast<int>(lead + 2 + l2), "unknown section [" + section + "]");
            }
            if (data.count(section)) throw ConfigError(line_no, static_cast<int>(lead + 1), "duplicate section");
            data[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, static_cast<int>(lead + 1), "expected 'key = value'");
        std::size_t kl = 0, vl = 0;
        const std::string key = trim(line.substr(0, eq), kl);
        const std::string value = trim(line.substr(eq + 1), vl);
        const int key_col = static_cast<int>(lead + kl + 1);
        const int value_col = static_cast<int>(lead + eq + 1 + vl + 1);
        if (section.empty()) throw ConfigError(line_no, key_col, "key outside of a section");
        if (key.empty()) throw ConfigError(line_no, key_col, "missing key");
        if (!kKeys.at(section).count(key)) {
            throw ConfigError(line_no, key_col, "unknown key '" + key + "' in [" + section + "]");
        }
        if (value.empty()) throw ConfigError(line_no, value_col, "missing value for '" + key + "'");
        if (data[section].count(key)) throw ConfigError(line_no, key_col, "duplicate key '" + key + "'");
        data[section][key] = Entry{value, line_no, key_col, value_col};
    }

    Reader r(std::move(data));
    RunConfig cfg;
    ModelSpec& m = cfg.model;

    const Entry* ce = r.find("model", "case");
    if (!ce) throw ConfigError(0, 0, "[model] needs 'case'");
    static const std::map<std::string, CaseKind> kinds = {{"a_poisson", CaseKind::a_poisson},
                                                          {"a_binomial", CaseKind::a_binomial},
                                                          {"a_single", CaseKind::a_single},
                                                          {"b", CaseKind::b},
                                                          {"c", CaseKind::c}};
    auto kit = kinds.find(ce->value);
    if (kit == kinds.end()) throw ConfigError(ce->line, ce->value_col, "unknown case '" + ce->value + "'");
    m.kind = kit->second;

    r.exclusive("model", "theta", "theta_db");
    r.exclusive("model", "power", "power_db");
    r.exclusive("model", "noise", "noise_db");
    r.exclusive("model", "lambda", "num_bs");
    r.get("model", "theta", m.theta);
    if (const Entry* e = r.find("model", "theta_db")) m.theta = db_to_linear(r.number(*e));
    r.get("model", "power", m.power);
    if (const Entry* e = r.find("model", "power_db")) m.power = db_to_linear(r.number(*e));
    r.get("model", "noise", m.noise);
    if (const Entry* e = r.find("model", "noise_db")) m.noise = db_to_linear(r.number(*e));
    r.get("model", "lambda1", m.lambda1);
    r.get("model", "lambda2", m.lambda2);
    r.get("model", "L", m.L);
    r.get("model", "p_coop", m.p_coop);
    r.get("model", "a", m.a);
    r.get("model", "R", m.R);
    r.get("model", "alpha", m.alpha);
    r.get("model", "window", m.window);
    if (const Entry* e = r.find("model", "lambda")) m.lambda = r.number(*e);
    if (const Entry* e = r.find("model", "num_bs")) m.num_bs = r.number(*e);
    r.get("model", "fading", m.fading);
    r.get("model", "fading_shape", m.fading_shape);
    r.get("model", "fading_rate", m.fading_rate);
    r.get("model", "lognormal_mu", m.ln_mu);
    r.get("model", "lognormal_sigma", m.ln_sigma);
    r.get("model", "cumulant_order", m.cumulant_order);

    if (!(m.theta > 0.0)) r.fail("model", "theta", "theta must be > 0");
    if (m.noise < 0.0) r.fail("model", "noise", "noise must be >= 0");
    if (m.fading != "gamma" && m.fading != "rayleigh" && m.fading != "lognormal") {
        r.fail("model", "fading", "fading must be gamma, rayleigh or lognormal");
    }
    if (m.fading == "rayleigh") m.fading_shape = m.fading_rate = 1.0;
    if (m.cumulant_order < 2 || m.cumulant_order > 16) r.fail("model", "cumulant_order", "cumulant_order must lie in [2, 16]");
    const bool radial = m.kind == CaseKind::b || m.kind == CaseKind::c;
    if (radial && !m.lambda && !m.num_bs) throw ConfigError(ce->line, ce->value_col, "cases b and c need 'lambda' or 'num_bs'");
    if (m.kind != CaseKind::c && m.fading == "lognormal") r.fail("model", "fading", "lognormal fading is only available in case c");

    // methods
    MethodSpec& me = cfg.methods;
    const Entry* ue = r.find("methods", "use");
    if (!ue) throw ConfigError(0, 0, "[methods] needs 'use'");
    for (auto& [name, col] : split_list(*ue)) {
        if (std::find(std::begin(kMethodNames), std::end(kMethodNames), name) == std::end(kMethodNames)) {
            throw ConfigError(ue->line, col, "unknown method '" + name + "'");
        }
        me.use.push_back(name);
    }
    r.get("methods", "gp_rel_tol", me.gp.rel_tol);
    r.get("methods", "gp_max_panels", me.gp.max_panels);
    r.get("methods", "charlier_order", me.charlier_order);
    r.get("methods", "mc_trials", me.mc_trials);
    r.get("methods", "mc_seed", me.mc_seed);
    r.get("methods", "mc_workers", me.mc_workers);
    if (const Entry* e = r.find("methods", "charlier_mode")) {
        if (e->value == "standardized") me.charlier_mode = CharlierMode::standardized;
        else if (e->value == "paper_literal") me.charlier_mode = CharlierMode::paper_literal;
        else throw ConfigError(e->line, e->value_col, "charlier_mode must be standardized or paper_literal");
    }
    if (const Entry* e = r.find("methods", "mc_count")) {
        if (e->value == "poisson") me.mc_count = SimConfig::CountMode::poisson;
        else if (e->value == "fixed") me.mc_count = SimConfig::CountMode::fixed;
        else throw ConfigError(e->line, e->value_col, "mc_count must be poisson or fixed");
    }
    if (const Entry* e = r.find("methods", "mc_binomial")) {
        if (e->value == "independent") me.mc_binomial = SimConfig::BinomialMode::independent;
        else if (e->value == "coupled") me.mc_binomial = SimConfig::BinomialMode::coupled;
        else throw ConfigError(e->line, e->value_col, "mc_binomial must be independent or coupled");
    }
    try {
        me.gp.validate();
    } catch (const std::exception& ex) {
        r.fail("methods", r.find("methods", "gp_rel_tol") ? "gp_rel_tol" : "gp_max_panels", ex.what());
    }
    if (me.charlier_order < 2 || me.charlier_order > 16) r.fail("methods", "charlier_order", "charlier_order must lie in [2, 16]");
    if (me.mc_trials < 1) r.fail("methods", "mc_trials", "mc_trials must be >= 1");

    // sweep
    SweepSpec& sw = cfg.sweep;
    if (const Entry* ve = r.find("sweep", "variable")) {
        sw.variable = ve->value;
        static const std::set<std::string> vars = {"theta_db", "num_bs", "p_coop", "L"};
        if (!vars.count(sw.variable)) throw ConfigError(ve->line, ve->value_col, "unknown sweep variable '" + sw.variable + "'");
        if (sw.variable == "num_bs" && !radial) throw ConfigError(ve->line, ve->value_col, "num_bs sweeps need case b or c");
        if ((sw.variable == "p_coop" || sw.variable == "L") && m.kind != CaseKind::a_binomial) {
            throw ConfigError(ve->line, ve->value_col, sw.variable + " sweeps need case a_binomial");
        }
        if (const Entry* vals = r.find("sweep", "values")) {
            for (auto& [item, col] : split_list(*vals)) {
                Entry tmp{item, vals->line, col, col};
                sw.values.push_back(r.number(tmp));
            }
        } else {
            const Entry* lo = r.find("sweep", "lo");
            const Entry* hi = r.find("sweep", "hi");
            const Entry* st = r.find("sweep", "steps");
            if (!lo || !hi || !st) throw ConfigError(ve->line, ve->key_col, "sweep needs 'values' or 'lo', 'hi', 'steps'");
            const double a = r.number(*lo), b = r.number(*hi);
            const long long n = r.integer(*st);
            if (n < 1) throw ConfigError(st->line, st->value_col, "steps must be >= 1");
            for (long long i = 0; i < n; ++i) {
                sw.values.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
            }
        }
        if (sw.variable == "L") {
            for (double v : sw.values) {
                if (v != std::round(v) || v < 1) r.fail("sweep", r.find("sweep", "values") ? "values" : "lo", "L values must be positive integers");
            }
        }
    } else if (r.find("sweep", "lo") || r.find("sweep", "values")) {
        const Entry* e = r.find("sweep", "lo") ? r.find("sweep", "lo") : r.find("sweep", "values");
        throw ConfigError(e->line, e->key_col, "sweep needs 'variable'");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(0, 0, "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

ModelSpec apply_sweep(const ModelSpec& m, const std::string& variable, double value) {
    ModelSpec r = m;
    if (variable == "theta_db") {
        r.theta = db_to_linear(value);
    } else if (variable == "num_bs") {
        r.num_bs = value;
        r.lambda.reset();
    } else if (variable == "p_coop") {
        r.p_coop = value;
    } else if (variable == "L") {
        r.L = static_cast<int>(std::lround(value));
    }
    return r;
}

} // namespace outage::cli
