#ifndef SEE_CHANNEL_HPP
#define SEE_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "see/model.hpp"

namespace see {

// Identity string of the random generator pipeline; recorded in all
// CSV/report metadata so runs can be reproduced across versions.
inline constexpr const char* kGeneratorId = "splitmix64-boxmuller-v1";

// Counter-based random stream: the state for (seed, stream) is derived
// directly from the pair, so distinct streams can be drawn in any order
// or in parallel and still produce identical values.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double next_uniform();      // (0, 1]
    double next_exponential();  // Exp(1)
    void next_normal_pair(double& a, double& b); // standard normals

private:
    std::uint64_t state_;
};

// Seeded Rayleigh-fading channel source. large_scale_* are deterministic
// path-gain multipliers applied to |h|^2 (default all ones).
struct ChannelSampler {
    std::uint64_t seed = 0;
    Mat large_scale_bob; // n_ports x n_users; empty = all ones
    Mat large_scale_eve; // n_ports x n_eves; empty = all ones
};

// Draws one full channel realization. Pure function of (seed, draw_index).
ChannelRealization sample(const ChannelSampler& sampler, const SystemConfig& cfg,
                          std::uint64_t draw_index);

// `count` independent draws of sum_{i=1..n} |h_i|^2, i.e. Erlang(n, 1).
// Draw j uses stream j, so results do not depend on evaluation order.
std::vector<double> exp_sum_sample(const ChannelSampler& sampler, int n, int count);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

} // namespace see

#endif
