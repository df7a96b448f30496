#include "see/model.hpp"

#include <cmath>
#include <string>

namespace see {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double log2_1p(double x) { return std::log1p(x) / M_LN2; }

} // namespace

void SystemConfig::validate() const {
    require(n_ports > 0, "n_ports must be positive");
    require(n_users > 0, "n_users must be positive");
    require(n_eves > 0, "n_eves must be positive");
    require(circuit_power >= 0.0, "circuit_power must be >= 0");
    require(noise_bob > 0.0 && noise_eve > 0.0, "noise powers must be > 0");
    require(max_port_power.size() == static_cast<std::size_t>(n_ports),
            "max_port_power length must equal n_ports");
    for (double p : max_port_power) require(p > 0.0, "max_port_power entries must be > 0");
    require(ps_bob.size() == static_cast<std::size_t>(n_users),
            "ps_bob length must equal n_users");
    require(conv_eff_bob.size() == static_cast<std::size_t>(n_users),
            "conv_eff_bob length must equal n_users");
    require(min_harvest_bob.size() == static_cast<std::size_t>(n_users),
            "min_harvest_bob length must equal n_users");
    auto in_unit = [](double x) { return x > 0.0 && x <= 1.0; };
    for (double d : ps_bob) require(in_unit(d), "ps_bob entries must lie in (0,1]");
    for (double t : conv_eff_bob) require(in_unit(t), "conv_eff_bob entries must lie in (0,1]");
    require(in_unit(ps_eve), "ps_eve must lie in (0,1]");
    require(in_unit(conv_eff_eve), "conv_eff_eve must lie in (0,1]");
    for (double e : min_harvest_bob) require(e >= 0.0, "min_harvest_bob entries must be >= 0");
    require(eve_harvest_cap >= 0.0, "eve_harvest_cap must be >= 0");
}

void ChannelRealization::validate(const SystemConfig& cfg) const {
    require(gains_bob.rows() == static_cast<std::size_t>(cfg.n_ports) &&
                gains_bob.cols() == static_cast<std::size_t>(cfg.n_users),
            "gains_bob shape mismatch");
    require(gains_eve.rows() == static_cast<std::size_t>(cfg.n_ports) &&
                gains_eve.cols() == static_cast<std::size_t>(cfg.n_eves),
            "gains_eve shape mismatch");
    for (double g : gains_bob.data()) require(g >= 0.0, "gains must be >= 0");
    for (double g : gains_eve.data()) require(g >= 0.0, "gains must be >= 0");
}

namespace {

void check_shapes(const SystemConfig& cfg, const ChannelRealization& ch,
                  const PowerAllocation& alloc) {
    ch.validate(cfg);
    require(alloc.p.same_shape(ch.gains_bob), "allocation shape mismatch");
}

void check_user(const SystemConfig& cfg, int user) {
    require(user >= 0 && user < cfg.n_users, "user index out of range");
}

void check_eve(const SystemConfig& cfg, int eve) {
    require(eve >= 0 && eve < cfg.n_eves, "eve index out of range");
}

} // namespace

SnrPair effective_snr(const SystemConfig& cfg, const ChannelRealization& ch,
                      const PowerAllocation& alloc, int user, int eve) {
    check_shapes(cfg, ch, alloc);
    check_user(cfg, user);
    check_eve(cfg, eve);
    double b = 0.0, e = 0.0;
    for (int j = 0; j < cfg.n_ports; ++j) {
        const double pj = alloc.p(j, user);
        b += ch.gains_bob(j, user) * pj;
        e += ch.gains_eve(j, eve) * pj;
    }
    return {b, e};
}

double secrecy_rate(const SystemConfig& cfg, const ChannelRealization& ch,
                    const PowerAllocation& alloc, int user, int eve) {
    const SnrPair s = effective_snr(cfg, ch, alloc, user, eve);
    const double db = cfg.ps_bob[static_cast<std::size_t>(user)];
    return (log2_1p(db * s.bob) - log2_1p(cfg.ps_eve * s.eve)) / cfg.n_users;
}

double secrecy_rate_clamped(const SystemConfig& cfg, const ChannelRealization& ch,
                            const PowerAllocation& alloc, int user, int eve) {
    return std::max(0.0, secrecy_rate(cfg, ch, alloc, user, eve));
}

double rate_without_secrecy(const SystemConfig& cfg, const ChannelRealization& ch,
                            const PowerAllocation& alloc, int user) {
    const SnrPair s = effective_snr(cfg, ch, alloc, user, 0);
    const double db = cfg.ps_bob[static_cast<std::size_t>(user)];
    return log2_1p(db * s.bob) / cfg.n_users;
}

double total_secrecy_rate(const SystemConfig& cfg, const ChannelRealization& ch,
                          const PowerAllocation& alloc) {
    double total = 0.0;
    for (int k = 0; k < cfg.n_users; ++k) {
        // worst case over eavesdroppers = largest eve SNR
        double worst = secrecy_rate(cfg, ch, alloc, k, 0);
        for (int m = 1; m < cfg.n_eves; ++m)
            worst = std::min(worst, secrecy_rate(cfg, ch, alloc, k, m));
        total += worst;
    }
    return total;
}

double see_metric(const SystemConfig& cfg, const ChannelRealization& ch,
                  const PowerAllocation& alloc) {
    const double denom = alloc.total() + cfg.circuit_power;
    if (denom <= 0.0)
        throw NumericalError("SEE undefined: zero total power and zero circuit power");
    return total_secrecy_rate(cfg, ch, alloc) / denom;
}

double harvested_energy_bob(const SystemConfig& cfg, const ChannelRealization& ch,
                            const PowerAllocation& alloc, int user) {
    check_shapes(cfg, ch, alloc);
    check_user(cfg, user);
    const auto k = static_cast<std::size_t>(user);
    double acc = 0.0;
    for (int i = 0; i < cfg.n_ports; ++i) {
        double port_total = 0.0;
        for (int j = 0; j < cfg.n_users; ++j) port_total += alloc.p(i, j);
        acc += ch.gains_bob(i, user) * port_total;
    }
    return cfg.conv_eff_bob[k] * (1.0 - cfg.ps_bob[k]) * acc;
}

double harvested_energy_eve(const SystemConfig& cfg, const ChannelRealization& ch,
                            const PowerAllocation& alloc, int eve) {
    check_shapes(cfg, ch, alloc);
    check_eve(cfg, eve);
    double acc = 0.0;
    for (int i = 0; i < cfg.n_ports; ++i) {
        double port_total = 0.0;
        for (int j = 0; j < cfg.n_users; ++j) port_total += alloc.p(i, j);
        acc += ch.gains_eve(i, eve) * port_total;
    }
    return cfg.conv_eff_eve * (1.0 - cfg.ps_eve) * acc;
}

} // namespace see
