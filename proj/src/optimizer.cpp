#include "see/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "see/channel.hpp"

namespace see {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------------
// Constraint geometry. The decision vector is the allocation matrix in
// row-major order: index (i,k) -> i*n_users + k.

struct Halfspace {
    Vec a;
    double bound;
    bool lower; // lower: a.p >= bound, else a.p <= bound
    std::string name;

    double slack(const Vec& p) const {
        const double v = dot(a, p);
        return lower ? v - bound : bound - v;
    }
    void project(Vec& p) const {
        if (slack(p) >= 0.0) return;
        const double scale = (bound - dot(a, p)) / dot(a, a);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += scale * a[i];
    }
};

// Projection of one port's row onto {x >= 0, sum x <= cap}.
void project_capped_simplex(double* x, int n, double cap) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (x[i] < 0.0) x[i] = 0.0;
        sum += x[i];
    }
    if (sum <= cap) return;
    // water-filling threshold for projection onto {x>=0, sum x = cap}
    std::vector<double> u(x, x + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    for (int i = 0; i < n; ++i) {
        css += u[static_cast<std::size_t>(i)];
        const double t = (css - cap) / (i + 1);
        if (i + 1 == n || u[static_cast<std::size_t>(i) + 1] <= t) {
            theta = t;
            break;
        }
    }
    for (int i = 0; i < n; ++i) x[i] = std::max(0.0, x[i] - theta);
}

struct FeasibleSet {
    int n_ports, n_users;
    Vec max_port_power;
    std::vector<Halfspace> halfspaces; // C3 and C4

    void project_rows(Vec& p) const {
        for (int i = 0; i < n_ports; ++i)
            project_capped_simplex(p.data() + static_cast<std::size_t>(i) * n_users, n_users,
                                   max_port_power[static_cast<std::size_t>(i)]);
    }

    // Dykstra alternating projections onto the intersection.
    Vec project(Vec p, double tol = 1e-13, int max_sweeps = 2000) const {
        if (halfspaces.empty()) {
            project_rows(p);
            return p;
        }
        const std::size_t d = p.size();
        std::vector<Vec> corrections(halfspaces.size() + 1, Vec(d, 0.0));
        const double scale = 1.0 + norm2(p);
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            double change = 0.0;
            for (std::size_t c = 0; c <= halfspaces.size(); ++c) {
                Vec y(d);
                for (std::size_t i = 0; i < d; ++i) y[i] = p[i] + corrections[c][i];
                Vec proj = y;
                if (c == 0)
                    project_rows(proj);
                else
                    halfspaces[c - 1].project(proj);
                for (std::size_t i = 0; i < d; ++i) {
                    corrections[c][i] = y[i] - proj[i];
                    change += (proj[i] - p[i]) * (proj[i] - p[i]);
                }
                p = std::move(proj);
            }
            if (std::sqrt(change) <= tol * scale) break;
        }
        return p;
    }
};

FeasibleSet build_feasible_set(const SystemConfig& cfg, const ChannelRealization& ch) {
    FeasibleSet fs;
    fs.n_ports = cfg.n_ports;
    fs.n_users = cfg.n_users;
    fs.max_port_power = cfg.max_port_power;
    const std::size_t d = static_cast<std::size_t>(cfg.n_ports * cfg.n_users);
    for (int k = 0; k < cfg.n_users; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        if (cfg.min_harvest_bob[ku] <= 0.0) continue; // implied by p >= 0
        Halfspace h;
        h.a.assign(d, 0.0);
        for (int i = 0; i < cfg.n_ports; ++i)
            for (int j = 0; j < cfg.n_users; ++j)
                h.a[static_cast<std::size_t>(i * cfg.n_users + j)] =
                    cfg.conv_eff_bob[ku] * (1.0 - cfg.ps_bob[ku]) * ch.gains_bob(i, k);
        h.bound = cfg.min_harvest_bob[ku];
        h.lower = true;
        h.name = "C3[" + std::to_string(k) + "]";
        if (norm2(h.a) > 0.0) fs.halfspaces.push_back(std::move(h));
    }
    if (std::isfinite(cfg.eve_harvest_cap)) {
        for (int m = 0; m < cfg.n_eves; ++m) {
            Halfspace h;
            h.a.assign(d, 0.0);
            for (int i = 0; i < cfg.n_ports; ++i)
                for (int j = 0; j < cfg.n_users; ++j)
                    h.a[static_cast<std::size_t>(i * cfg.n_users + j)] =
                        cfg.conv_eff_eve * (1.0 - cfg.ps_eve) * ch.gains_eve(i, m);
            h.bound = cfg.eve_harvest_cap;
            h.lower = false;
            h.name = "C4[" + std::to_string(m) + "]";
            if (norm2(h.a) > 0.0) fs.halfspaces.push_back(std::move(h));
        }
    }
    return fs;
}

// ---------------------------------------------------------------------
// Objective evaluation on raw vectors (hot path, no validation).

struct Objective {
    const SystemConfig* cfg;
    const ChannelRealization* ch;

    // total secrecy rate with the worst-case (largest-SNR) eve per user
    double numerator(const Vec& p) const {
        double total = 0.0;
        for (int k = 0; k < cfg->n_users; ++k) {
            double b = 0.0;
            for (int j = 0; j < cfg->n_ports; ++j)
                b += ch->gains_bob(j, k) * p[static_cast<std::size_t>(j * cfg->n_users + k)];
            double e = 0.0;
            for (int m = 0; m < cfg->n_eves; ++m) {
                double em = 0.0;
                for (int j = 0; j < cfg->n_ports; ++j)
                    em += ch->gains_eve(j, m) * p[static_cast<std::size_t>(j * cfg->n_users + k)];
                e = std::max(e, em);
            }
            total += std::log1p(cfg->ps_bob[static_cast<std::size_t>(k)] * b) -
                     std::log1p(cfg->ps_eve * e);
        }
        return total / (cfg->n_users * M_LN2);
    }

    double denominator(const Vec& p) const {
        return std::accumulate(p.begin(), p.end(), cfg->circuit_power);
    }

    double see(const Vec& p) const {
        const double g = denominator(p);
        if (g <= 0.0) return 0.0;
        return numerator(p) / g;
    }

    Vec grad_numerator(const Vec& p) const {
        Vec g(p.size(), 0.0);
        for (int k = 0; k < cfg->n_users; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            double b = 0.0;
            for (int j = 0; j < cfg->n_ports; ++j)
                b += ch->gains_bob(j, k) * p[static_cast<std::size_t>(j * cfg->n_users + k)];
            int worst = 0;
            double e = -1.0;
            for (int m = 0; m < cfg->n_eves; ++m) {
                double em = 0.0;
                for (int j = 0; j < cfg->n_ports; ++j)
                    em += ch->gains_eve(j, m) * p[static_cast<std::size_t>(j * cfg->n_users + k)];
                if (em > e) {
                    e = em;
                    worst = m;
                }
            }
            const double cb = cfg->ps_bob[ku] / (1.0 + cfg->ps_bob[ku] * b);
            const double ce = cfg->ps_eve / (1.0 + cfg->ps_eve * e);
            for (int j = 0; j < cfg->n_ports; ++j)
                g[static_cast<std::size_t>(j * cfg->n_users + k)] =
                    (cb * ch->gains_bob(j, k) - ce * ch->gains_eve(j, worst)) /
                    (cfg->n_users * M_LN2);
        }
        return g;
    }

    Vec grad_see(const Vec& p) const {
        const double f = numerator(p);
        const double g = denominator(p);
        Vec gr = grad_numerator(p);
        for (double& x : gr) x = (x * g - f) / (g * g);
        return gr;
    }
};

double stationarity(const FeasibleSet& fs, const Vec& p, const Vec& grad) {
    Vec step(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) step[i] = p[i] + grad[i];
    const Vec proj = fs.project(std::move(step));
    Vec d(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) d[i] = proj[i] - p[i];
    return norm2(d) / (1.0 + norm2(grad));
}

struct InnerResult {
    Vec p;
    bool converged = false;
    bool line_search_failed = false;
};

// Projected gradient ascent with backtracking on phi = F - lambda*G.
InnerResult maximize_parametric(const Objective& obj, const FeasibleSet& fs, double lambda,
                                Vec p, const SolverOptions& opts) {
    auto phi = [&](const Vec& x) { return obj.numerator(x) - lambda * obj.denominator(x); };
    double step = 1.0;
    InnerResult res;
    for (int it = 0; it < opts.max_inner; ++it) {
        Vec g = obj.grad_numerator(p);
        for (double& x : g) x -= lambda;
        if (stationarity(fs, p, g) <= opts.inner_tol) {
            res.converged = true;
            break;
        }
        const double phi0 = phi(p);
        bool accepted = false;
        while (step > 1e-18) {
            Vec trial(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) trial[i] = p[i] + step * g[i];
            trial = fs.project(std::move(trial));
            Vec d(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) d[i] = trial[i] - p[i];
            if (phi(trial) >= phi0 + 1e-4 * dot(g, d)) {
                p = std::move(trial);
                accepted = true;
                step = std::min(step * 2.0, 1e12);
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            res.line_search_failed = true;
            break;
        }
    }
    res.p = std::move(p);
    return res;
}

Vec to_vec(const PowerAllocation& a) { return a.p.data(); }

PowerAllocation to_alloc(const SystemConfig& cfg, const Vec& v) {
    PowerAllocation a;
    a.p = Mat(static_cast<std::size_t>(cfg.n_ports), static_cast<std::size_t>(cfg.n_users));
    a.p.data() = v;
    return a;
}

// Minimum-total-power feasible point; tie-breaker for zero objectives.
Vec min_power_point(const FeasibleSet& fs, Vec start) {
    const double step =
        *std::max_element(fs.max_port_power.begin(), fs.max_port_power.end());
    Vec p = fs.project(std::move(start));
    for (int it = 0; it < 5000; ++it) {
        Vec trial(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) trial[i] = p[i] - step;
        trial = fs.project(std::move(trial));
        Vec d(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) d[i] = trial[i] - p[i];
        const double mv = norm2(d);
        p = std::move(trial);
        if (mv <= 1e-13 * (1.0 + norm2(p))) break;
    }
    return p;
}

} // namespace

void SolverOptions::validate() const {
    if (outer_tol <= 0.0 || inner_tol <= 0.0)
        throw std::invalid_argument("tolerances must be positive");
    if (max_outer < 1 || max_inner < 1 || restarts < 1)
        throw std::invalid_argument("iteration limits must be >= 1");
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

PowerAllocation project_feasible(const SystemConfig& cfg, const ChannelRealization& ch,
                                 const PowerAllocation& p) {
    cfg.validate();
    ch.validate(cfg);
    const FeasibleSet fs = build_feasible_set(cfg, ch);
    return to_alloc(cfg, fs.project(to_vec(p)));
}

FeasibilityResult check_feasibility(const SystemConfig& cfg, const ChannelRealization& ch) {
    cfg.validate();
    ch.validate(cfg);
    const auto n = static_cast<std::size_t>(cfg.n_ports);

    // The harvest constraints depend on the allocation only through the
    // per-port totals s_i in [0, P_max,i], so phase-1 runs in s-space.
    std::vector<Vec> c3(static_cast<std::size_t>(cfg.n_users), Vec(n));
    std::vector<Vec> c4;
    for (int k = 0; k < cfg.n_users; ++k)
        for (int i = 0; i < cfg.n_ports; ++i)
            c3[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                cfg.conv_eff_bob[static_cast<std::size_t>(k)] *
                (1.0 - cfg.ps_bob[static_cast<std::size_t>(k)]) * ch.gains_bob(i, k);
    if (std::isfinite(cfg.eve_harvest_cap)) {
        c4.resize(static_cast<std::size_t>(cfg.n_eves), Vec(n));
        for (int m = 0; m < cfg.n_eves; ++m)
            for (int i = 0; i < cfg.n_ports; ++i)
                c4[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] =
                    cfg.conv_eff_eve * (1.0 - cfg.ps_eve) * ch.gains_eve(i, m);
    }

    auto violation = [&](const Vec& s) {
        double v = 0.0;
        for (int k = 0; k < cfg.n_users; ++k)
            v += std::pow(std::max(0.0, cfg.min_harvest_bob[static_cast<std::size_t>(k)] -
                                            dot(c3[static_cast<std::size_t>(k)], s)),
                          2);
        for (const auto& a : c4)
            v += std::pow(std::max(0.0, dot(a, s) - cfg.eve_harvest_cap), 2);
        return v;
    };
    auto violation_grad = [&](const Vec& s) {
        Vec g(n, 0.0);
        for (int k = 0; k < cfg.n_users; ++k) {
            const double r = cfg.min_harvest_bob[static_cast<std::size_t>(k)] -
                             dot(c3[static_cast<std::size_t>(k)], s);
            if (r > 0.0)
                for (std::size_t i = 0; i < n; ++i)
                    g[i] -= 2.0 * r * c3[static_cast<std::size_t>(k)][i];
        }
        for (const auto& a : c4) {
            const double r = dot(a, s) - cfg.eve_harvest_cap;
            if (r > 0.0)
                for (std::size_t i = 0; i < n; ++i) g[i] += 2.0 * r * a[i];
        }
        return g;
    };
    auto clamp_box = [&](Vec& s) {
        for (std::size_t i = 0; i < n; ++i)
            s[i] = std::clamp(s[i], 0.0, cfg.max_port_power[i]);
    };

    // extreme points: full power maximizes every harvest simultaneously
    Vec full(cfg.max_port_power);
    std::vector<Vec> starts{full, Vec(n, 0.0)};
    Vec half(n);
    for (std::size_t i = 0; i < n; ++i) half[i] = 0.5 * cfg.max_port_power[i];
    starts.push_back(half);

    Vec best;
    double best_v = kInf;
    for (Vec s : starts) {
        double step = 1.0;
        for (int it = 0; it < 5000; ++it) {
            const double v = violation(s);
            if (v == 0.0) break;
            const Vec g = violation_grad(s);
            bool moved = false;
            while (step > 1e-30) {
                Vec trial(n);
                for (std::size_t i = 0; i < n; ++i) trial[i] = s[i] - step * g[i];
                clamp_box(trial);
                if (violation(trial) < v) {
                    s = std::move(trial);
                    step *= 2.0;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        const double v = violation(s);
        if (v < best_v) {
            best_v = v;
            best = s;
        }
        if (best_v == 0.0) break;
    }

    FeasibilityResult res;
    if (best_v <= 1e-20) {
        res.feasible = true;
        PowerAllocation a = PowerAllocation::zeros(cfg);
        for (int i = 0; i < cfg.n_ports; ++i)
            for (int k = 0; k < cfg.n_users; ++k)
                a.p(i, k) = best[static_cast<std::size_t>(i)] / cfg.n_users;
        res.point = std::move(a);
        return res;
    }
    res.feasible = false;
    bool c3_bad = false, c4_bad = false;
    for (int k = 0; k < cfg.n_users; ++k) {
        // unsatisfiable outright if violated even at full power
        if (dot(c3[static_cast<std::size_t>(k)], full) <
            cfg.min_harvest_bob[static_cast<std::size_t>(k)] - 1e-15)
            c3_bad = true;
        if (cfg.min_harvest_bob[static_cast<std::size_t>(k)] -
                dot(c3[static_cast<std::size_t>(k)], best) >
            1e-12)
            c3_bad = true;
    }
    for (const auto& a : c4)
        if (dot(a, best) - cfg.eve_harvest_cap > 1e-12) c4_bad = true;
    if (c3_bad) res.violated.push_back("C3");
    if (c4_bad) res.violated.push_back("C4");
    if (res.violated.empty()) res.violated.push_back("C3"); // residual violation unattributed
    return res;
}

PowerAllocation dinkelbach_subproblem(const SystemConfig& cfg, const ChannelRealization& ch,
                                      double lambda, const PowerAllocation& start,
                                      const SolverOptions& opts) {
    cfg.validate();
    ch.validate(cfg);
    opts.validate();
    const FeasibleSet fs = build_feasible_set(cfg, ch);
    const Objective obj{&cfg, &ch};
    InnerResult r = maximize_parametric(obj, fs, lambda, fs.project(to_vec(start)), opts);
    if (r.line_search_failed && !r.converged)
        throw NumericalError("dinkelbach_subproblem: line search failed");
    return to_alloc(cfg, r.p);
}

double kkt_residual(const SystemConfig& cfg, const ChannelRealization& ch,
                    const PowerAllocation& alloc) {
    cfg.validate();
    ch.validate(cfg);
    const FeasibleSet fs = build_feasible_set(cfg, ch);
    const Objective obj{&cfg, &ch};
    const Vec p = to_vec(alloc);
    return stationarity(fs, p, obj.grad_see(p));
}

SolveReport solve_p1(const SystemConfig& cfg, const ChannelRealization& ch,
                     const SolverOptions& opts) {
    cfg.validate();
    ch.validate(cfg);
    opts.validate();

    SolveReport rep;
    const FeasibilityResult feas = check_feasibility(cfg, ch);
    if (!feas.feasible) {
        rep.status = SolveStatus::infeasible;
        rep.allocation = PowerAllocation::zeros(cfg);
        return rep;
    }

    const FeasibleSet fs = build_feasible_set(cfg, ch);
    const Objective obj{&cfg, &ch};
    const std::size_t d = static_cast<std::size_t>(cfg.n_ports * cfg.n_users);

    struct RestartOutcome {
        Vec p;
        double see = -kInf;
        std::vector<double> trace;
        bool converged = false;
        bool failed = false;
    };
    std::vector<RestartOutcome> outcomes;

    for (int r = 0; r < opts.restarts; ++r) {
        Vec p0;
        if (r == 0) {
            p0 = to_vec(feas.point);
        } else {
            CounterRng rng(0x5EEu, static_cast<std::uint64_t>(r));
            p0.resize(d);
            for (std::size_t i = 0; i < d; ++i) {
                const std::size_t port = i / static_cast<std::size_t>(cfg.n_users);
                p0[i] = rng.next_uniform() * cfg.max_port_power[port] / cfg.n_users;
            }
            p0 = fs.project(std::move(p0));
            // blend toward the known feasible point to stay inside C3/C4
            const Vec& f0 = to_vec(feas.point);
            for (std::size_t i = 0; i < d; ++i) p0[i] = 0.5 * (p0[i] + f0[i]);
            p0 = fs.project(std::move(p0));
        }

        RestartOutcome out;
        double lambda = obj.see(p0);
        Vec p = p0;
        for (int it = 0; it < opts.max_outer; ++it) {
            out.trace.push_back(lambda);
            InnerResult inner = maximize_parametric(obj, fs, lambda, p, opts);
            if (inner.line_search_failed && !inner.converged) {
                out.failed = true;
                p = std::move(inner.p);
                break;
            }
            p = std::move(inner.p);
            const double f = obj.numerator(p);
            const double g = obj.denominator(p);
            const double h = f - lambda * g;
            if (h <= opts.outer_tol * std::max(1.0, std::abs(f))) {
                out.converged = true;
                break;
            }
            lambda = f / g;
        }
        out.see = obj.see(p);
        out.p = std::move(p);
        outcomes.push_back(std::move(out));
    }

    // best by value, ties by restart index
    std::size_t best = 0;
    for (std::size_t r = 1; r < outcomes.size(); ++r)
        if (outcomes[r].see > outcomes[best].see) best = r;

    double lo = kInf, hi = -kInf;
    for (const auto& o : outcomes) {
        lo = std::min(lo, o.see);
        hi = std::max(hi, o.see);
    }
    rep.restart_spread = (hi - lo) / std::max(std::abs(hi), 1e-300);

    Vec solution = outcomes[best].p;
    double see_value = outcomes[best].see;
    rep.lambda_trace = outcomes[best].trace;

    if (see_value <= 1e-12) {
        // objective is (numerically) zero everywhere reachable: prefer the
        // minimum-total-power feasible point for a deterministic answer
        solution = min_power_point(fs, to_vec(feas.point));
        see_value = obj.denominator(solution) > 0.0 ? obj.see(solution) : 0.0;
    }

    rep.allocation = to_alloc(cfg, solution);
    rep.see_value = see_value;
    rep.kkt_residual = stationarity(fs, solution, obj.grad_see(solution));

    // constraint slacks
    for (int i = 0; i < cfg.n_ports; ++i) {
        double row = 0.0;
        for (int k = 0; k < cfg.n_users; ++k) row += rep.allocation.p(i, k);
        rep.constraint_slacks.emplace_back("C1[" + std::to_string(i) + "]",
                                           cfg.max_port_power[static_cast<std::size_t>(i)] - row);
    }
    double min_entry = kInf;
    for (double x : solution) min_entry = std::min(min_entry, x);
    rep.constraint_slacks.emplace_back("C2", min_entry);
    for (int k = 0; k < cfg.n_users; ++k)
        rep.constraint_slacks.emplace_back(
            "C3[" + std::to_string(k) + "]",
            harvested_energy_bob(cfg, ch, rep.allocation, k) -
                cfg.min_harvest_bob[static_cast<std::size_t>(k)]);
    for (int m = 0; m < cfg.n_eves; ++m)
        rep.constraint_slacks.emplace_back(
            "C4[" + std::to_string(m) + "]",
            cfg.eve_harvest_cap - harvested_energy_eve(cfg, ch, rep.allocation, m));

    // flag if the standard Bob-dominance assumption fails at the solution
    rep.bob_dominance_ok = true;
    for (int k = 0; k < cfg.n_users; ++k) {
        double worst_eve = 0.0;
        for (int m = 0; m < cfg.n_eves; ++m) {
            const SnrPair s = effective_snr(cfg, ch, rep.allocation, k, m);
            worst_eve = std::max(worst_eve, cfg.ps_eve * s.eve);
        }
        const SnrPair s = effective_snr(cfg, ch, rep.allocation, k, 0);
        if (cfg.ps_bob[static_cast<std::size_t>(k)] * s.bob < worst_eve)
            rep.bob_dominance_ok = false;
    }

    bool slacks_ok = true;
    for (const auto& [name, s] : rep.constraint_slacks)
        if (s < -1e-8) slacks_ok = false;

    const bool converged = outcomes[best].converged || see_value <= 1e-12;
    if (outcomes[best].failed && !converged)
        rep.status = SolveStatus::numerical_failure;
    else if (converged && slacks_ok && rep.kkt_residual <= 1e-5)
        rep.status = SolveStatus::optimal;
    else
        rep.status = SolveStatus::max_iterations;
    return rep;
}

GridResult grid_oracle(const SystemConfig& cfg, const ChannelRealization& ch, int resolution) {
    cfg.validate();
    ch.validate(cfg);
    if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
    const int dims = cfg.n_ports * cfg.n_users;
    if (dims > 4)
        throw std::invalid_argument("grid_oracle: n_ports*n_users must be <= 4");

    const Objective obj{&cfg, &ch};
    std::vector<Vec> c3(static_cast<std::size_t>(cfg.n_users));
    std::vector<Vec> c4;
    // reuse the harvest coefficients over per-port totals
    for (int k = 0; k < cfg.n_users; ++k) {
        c3[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(cfg.n_ports));
        for (int i = 0; i < cfg.n_ports; ++i)
            c3[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                cfg.conv_eff_bob[static_cast<std::size_t>(k)] *
                (1.0 - cfg.ps_bob[static_cast<std::size_t>(k)]) * ch.gains_bob(i, k);
    }
    if (std::isfinite(cfg.eve_harvest_cap)) {
        c4.resize(static_cast<std::size_t>(cfg.n_eves), Vec(static_cast<std::size_t>(cfg.n_ports)));
        for (int m = 0; m < cfg.n_eves; ++m)
            for (int i = 0; i < cfg.n_ports; ++i)
                c4[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] =
                    cfg.conv_eff_eve * (1.0 - cfg.ps_eve) * ch.gains_eve(i, m);
    }

    struct Best {
        double see = -kInf;
        long long flat = -1;
        Vec p;
    };
    const long long res = resolution;

    // depth-first enumeration over the entries in row-major order; the
    // per-port budget prunes whole subtrees as soon as a row overflows
    struct Walker {
        const SystemConfig* cfg;
        const Objective* obj;
        const std::vector<Vec>* c3;
        const std::vector<Vec>* c4;
        long long res;
        Vec p;
        Vec row_totals;
        Best best;

        void leaf(long long flat) {
            for (std::size_t k = 0; k < c3->size(); ++k)
                if (dot((*c3)[k], row_totals) < cfg->min_harvest_bob[k] - 1e-15) return;
            for (const auto& a : *c4)
                if (dot(a, row_totals) > cfg->eve_harvest_cap + 1e-15) return;
            const double denom = obj->denominator(p);
            if (denom <= 0.0) return;
            const double v = obj->numerator(p) / denom;
            if (v > best.see || (v == best.see && flat < best.flat)) {
                best.see = v;
                best.flat = flat;
                best.p = p;
            }
        }

        void descend(int idx, long long flat) {
            const int dims = cfg->n_ports * cfg->n_users;
            if (idx == dims) {
                leaf(flat);
                return;
            }
            const int port = idx / cfg->n_users;
            const double cap = cfg->max_port_power[static_cast<std::size_t>(port)];
            for (long long v = 0; v < res; ++v) {
                const double val = cap * static_cast<double>(v) / static_cast<double>(res - 1);
                if (row_totals[static_cast<std::size_t>(port)] + val > cap + 1e-12) break;
                p[static_cast<std::size_t>(idx)] = val;
                row_totals[static_cast<std::size_t>(port)] += val;
                descend(idx + 1, flat * res + v);
                row_totals[static_cast<std::size_t>(port)] -= val;
            }
            p[static_cast<std::size_t>(idx)] = 0.0;
        }
    };

    Best global;
#pragma omp parallel
    {
        Walker w{&cfg, &obj, &c3, &c4, res, Vec(static_cast<std::size_t>(dims)),
                 Vec(static_cast<std::size_t>(cfg.n_ports)), Best{}};
#pragma omp for schedule(dynamic)
        for (long long v0 = 0; v0 < res; ++v0) {
            const double cap = cfg.max_port_power[0];
            const double val = cap * static_cast<double>(v0) / static_cast<double>(res - 1);
            w.p[0] = val;
            w.row_totals[0] = val;
            w.descend(1, v0);
            w.row_totals[0] = 0.0;
        }
#pragma omp critical
        {
            if (w.best.flat >= 0 &&
                (w.best.see > global.see ||
                 (w.best.see == global.see && w.best.flat < global.flat)))
                global = w.best;
        }
    }

    GridResult gr;
    if (global.flat < 0) return gr; // no feasible grid point
    gr.found = true;
    gr.allocation = to_alloc(cfg, global.p);
    gr.see_value = global.see;
    return gr;
}

} // namespace see
