#ifndef SEE_MODEL_HPP
#define SEE_MODEL_HPP

#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "see/matrix.hpp"

namespace see {

// Raised when a computation leaves the range where the formulas are
// meaningful (undefined ratios, catastrophic cancellation, overflow).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using CMat = std::vector<std::complex<double>>; // row-major, shape carried separately

// Static description of the network: ports, users, eavesdroppers,
// power budgets, power-splitting ratios, harvesting parameters, noise.
struct SystemConfig {
    int n_ports = 0;                    // N
    int n_users = 0;                    // K_b
    int n_eves = 1;                     // M
    double circuit_power = 0.0;         // p_c, watts
    std::vector<double> max_port_power; // per-port budget, watts
    std::vector<double> ps_bob;         // fraction to decoding per user, (0,1]
    double ps_eve = 1.0;
    std::vector<double> conv_eff_bob;   // harvest conversion efficiency per user
    double conv_eff_eve = 1.0;
    std::vector<double> min_harvest_bob; // watts, >= 0
    double eve_harvest_cap = std::numeric_limits<double>::infinity(); // watts
    double noise_bob = 1.0;             // watts, > 0
    double noise_eve = 1.0;

    void validate() const;
};

// One draw of all channel gains. gains_* hold the effective
// channel-gain-to-noise-power ratios (per watt); raw_* optionally keep
// the complex coefficients they were derived from.
struct ChannelRealization {
    Mat gains_bob; // n_ports x n_users
    Mat gains_eve; // n_ports x n_eves
    std::optional<CMat> raw_bob;
    std::optional<CMat> raw_eve;

    void validate(const SystemConfig& cfg) const;
};

// Decision variable of the power-allocation problem: watts from port i
// to user k, all entries >= 0.
struct PowerAllocation {
    Mat p; // n_ports x n_users

    static PowerAllocation zeros(const SystemConfig& cfg) {
        return {Mat(static_cast<std::size_t>(cfg.n_ports),
                    static_cast<std::size_t>(cfg.n_users))};
    }
    double total() const {
        double s = 0.0;
        for (double x : p.data()) s += x;
        return s;
    }
};

// Effective received SNR terms of user `user` against eavesdropper `eve`:
// bob = sum_j gains_bob(j,user) p(j,user), eve likewise on the eve column.
struct SnrPair {
    double bob;
    double eve;
};
SnrPair effective_snr(const SystemConfig& cfg, const ChannelRealization& ch,
                      const PowerAllocation& alloc, int user, int eve);

// Per-user secrecy rate in bits/s/Hz, unclamped (may be negative).
double secrecy_rate(const SystemConfig& cfg, const ChannelRealization& ch,
                    const PowerAllocation& alloc, int user, int eve);
double secrecy_rate_clamped(const SystemConfig& cfg, const ChannelRealization& ch,
                            const PowerAllocation& alloc, int user, int eve);

// Per-user rate with no eavesdropper term, for without-security comparisons.
double rate_without_secrecy(const SystemConfig& cfg, const ChannelRealization& ch,
                            const PowerAllocation& alloc, int user);

// Secure energy efficiency: total secrecy rate over total consumed power.
// Uses the worst-case (rate-minimizing) eavesdropper for each user.
double see_metric(const SystemConfig& cfg, const ChannelRealization& ch,
                  const PowerAllocation& alloc);

// Total secrecy rate (numerator of the SEE ratio), worst-case eve per user.
double total_secrecy_rate(const SystemConfig& cfg, const ChannelRealization& ch,
                          const PowerAllocation& alloc);

double harvested_energy_bob(const SystemConfig& cfg, const ChannelRealization& ch,
                            const PowerAllocation& alloc, int user);
double harvested_energy_eve(const SystemConfig& cfg, const ChannelRealization& ch,
                            const PowerAllocation& alloc, int eve);

} // namespace see

#endif
