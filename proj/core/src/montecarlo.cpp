#include "outage/montecarlo.hpp"

#include "outage/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <thread>

namespace outage {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void SimConfig::validate() const {
    if (trials < 1) throw ArgumentError("SimConfig: trials must be >= 1");
    if (!(noise >= 0.0)) throw ArgumentError("SimConfig: noise must be >= 0");
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CaseAModel>) {
                m.validate();
            } else {
                m.geom.validate();
                if (!(m.theta > 0.0)) throw ArgumentError("SimConfig: theta must be > 0");
                const double W = std::isfinite(m.geom.window) ? m.geom.window : window_radius;
                if (!(W > m.geom.R) || !std::isfinite(W)) {
                    throw ArgumentError("SimConfig: window_radius must be finite and > R");
                }
            }
        },
        model);
}

namespace {

using Engine = std::mt19937_64;

double uniform01(Engine& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

class GainSampler {
public:
    explicit GainSampler(const FadingModel& f) : f_(f) {}

    double one(Engine& g) const {
        switch (f_.kind()) {
        case FadingModel::Kind::unit: return 1.0;
        case FadingModel::Kind::gamma: return std::gamma_distribution<double>(f_.shape(), 1.0 / f_.rate())(g);
        case FadingModel::Kind::lognormal:
            return std::lognormal_distribution<double>(f_.mu_ln(), f_.sigma_ln())(g);
        }
        return 1.0;
    }

    // Sum of k iid gains; gamma sums collapse to one draw.
    double sum(std::int64_t k, Engine& g) const {
        if (k <= 0) return 0.0;
        if (f_.kind() == FadingModel::Kind::gamma) {
            return std::gamma_distribution<double>(f_.shape() * static_cast<double>(k), 1.0 / f_.rate())(g);
        }
        if (f_.kind() == FadingModel::Kind::unit) return static_cast<double>(k);
        double s = 0.0;
        for (std::int64_t i = 0; i < k; ++i) s += one(g);
        return s;
    }

private:
    FadingModel f_;
};

struct Trial {
    double x, y, theta;
};

Trial draw_case_a(const CaseAModel& m, const SimConfig& cfg, const GainSampler& gs, Engine& g) {
    std::int64_t nx = 0, ny = 0;
    switch (m.aggregation) {
    case CaseAModel::Aggregation::poisson:
        nx = std::poisson_distribution<std::int64_t>(m.lambda1)(g);
        ny = std::poisson_distribution<std::int64_t>(m.lambda2)(g);
        break;
    case CaseAModel::Aggregation::binomial:
        nx = std::binomial_distribution<std::int64_t>(m.L, m.p)(g);
        ny = cfg.binomial_mode == SimConfig::BinomialMode::coupled
                 ? m.L - nx
                 : std::binomial_distribution<std::int64_t>(m.L, 1.0 - m.p)(g);
        break;
    case CaseAModel::Aggregation::single:
        nx = ny = 1;
        break;
    }
    const double x = gs.sum(nx, g);
    const double y = gs.sum(ny, g);
    return {x, y, m.theta};
}

struct Radial {
    NetworkGeometry geom;
    double theta;
    double W;
    double mean_count;
};

Trial draw_radial(const Radial& r, const SimConfig& cfg, const GainSampler& gs, Engine& g) {
    const auto& geo = r.geom;
    const std::int64_t n = cfg.count_mode == SimConfig::CountMode::fixed
                               ? static_cast<std::int64_t>(std::llround(r.mean_count))
                               : std::poisson_distribution<std::int64_t>(r.mean_count)(g);
    const double a2 = geo.a * geo.a, span = r.W * r.W - a2, R2 = geo.R * geo.R;
    const double h = -0.5 * geo.alpha;  // r^-alpha = (r^2)^h
    double x = 0.0, y = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double rr = a2 + uniform01(g) * span;
        const double pw = geo.P * std::pow(rr, h) * gs.one(g);
        if (rr < R2) x += pw; else y += pw;
    }
    return {x, y, r.theta};
}

int worker_count(int requested, std::int64_t blocks) {
    int n = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("OUTAGE_WORKERS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return static_cast<int>(std::clamp<std::int64_t>(n, 1, blocks));
}

} // namespace

EmpiricalResult simulate(const SimConfig& cfg) {
    cfg.validate();

    std::function<Trial(Engine&)> draw;
    std::optional<GainSampler> gs;
    std::optional<Radial> radial;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CaseAModel>) {
                gs.emplace(m.fading);
                draw = [&cfg, &gs, m](Engine& g) { return draw_case_a(m, cfg, *gs, g); };
            } else {
                FadingModel f = FadingModel::unit();
                if constexpr (std::is_same_v<T, CaseCModel>) f = m.fading;
                gs.emplace(f);
                const double W = std::isfinite(m.geom.window) ? m.geom.window : cfg.window_radius;
                const double mc = m.geom.lambda * std::numbers::pi * (W * W - m.geom.a * m.geom.a);
                radial = Radial{m.geom, m.theta, W, mc};
                draw = [&cfg, &gs, &radial](Engine& g) { return draw_radial(*radial, cfg, *gs, g); };
            }
        },
        cfg.model);

    const std::int64_t n = cfg.trials;
    const std::int64_t blocks = (n + kBlockTrials - 1) / kBlockTrials;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(blocks), 0);
    std::vector<double> xs, ys;
    if (cfg.store_samples) {
        xs.resize(static_cast<std::size_t>(n));
        ys.resize(static_cast<std::size_t>(n));
    }

    std::atomic<std::int64_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= blocks) return;
            Engine g(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(b))));
            const std::int64_t lo = b * kBlockTrials, hi = std::min(n, lo + kBlockTrials);
            std::int64_t c = 0;
            for (std::int64_t i = lo; i < hi; ++i) {
                const Trial t = draw(g);
                c += t.theta * (t.y + cfg.noise) > t.x;
                if (cfg.store_samples) {
                    xs[static_cast<std::size_t>(i)] = t.x;
                    ys[static_cast<std::size_t>(i)] = t.y;
                }
            }
            counts[static_cast<std::size_t>(b)] = c;
        }
    };

    const int nw = worker_count(cfg.workers, blocks);
    if (nw == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nw; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    EmpiricalResult res;
    res.trials = n;
    for (auto c : counts) res.outages += c;
    res.p_hat = static_cast<double>(res.outages) / static_cast<double>(n);
    res.std_err = std::sqrt(res.p_hat * (1.0 - res.p_hat) / static_cast<double>(n));
    if (cfg.store_samples && n >= 10) {
        const double theta = std::visit([](const auto& m) { return m.theta; }, cfg.model);
        res.sample_cumulants_x = sample_cumulants(xs);
        res.sample_cumulants_y = sample_cumulants(ys);
        std::vector<double> om(xs.size());
        for (std::size_t i = 0; i < om.size(); ++i) om[i] = theta * ys[i] - xs[i];
        res.sample_cumulants_omega = sample_cumulants(om);
    }
    return res;
}

CumulantSet sample_cumulants(const std::vector<double>& values, int max_order) {
    if (max_order < 1 || max_order > 4) throw ArgumentError("sample_cumulants: max_order must lie in [1, 4]");
    if (values.size() < 10) throw ArgumentError("sample_cumulants: need at least 10 values");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean, d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    CumulantSet k;
    k.kappa.push_back(mean);
    if (max_order >= 2) k.kappa.push_back(n / (n - 1.0) * m2);
    if (max_order >= 3) k.kappa.push_back(n * n / ((n - 1.0) * (n - 2.0)) * m3);
    if (max_order >= 4) {
        k.kappa.push_back(n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
                          ((n - 1.0) * (n - 2.0) * (n - 3.0)));
    }
    return k;
}

double kstat_se1(const CumulantSet& k, std::int64_t n) { return std::sqrt(k.k(2) / static_cast<double>(n)); }

double kstat_se2(const CumulantSet& k, std::int64_t n) {
    const double dn = static_cast<double>(n);
    return std::sqrt(k.k(4) / dn + 2.0 * k.k(2) * k.k(2) / (dn - 1.0));
}

} // namespace outage
