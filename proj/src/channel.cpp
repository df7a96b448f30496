#include "see/channel.hpp"

#include <cmath>

namespace see {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t CounterRng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double CounterRng::next_uniform() {
    // 53-bit mantissa, shifted into (0, 1]
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::next_exponential() { return -std::log(next_uniform()); }

void CounterRng::next_normal_pair(double& a, double& b) {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    a = r * std::cos(t);
    b = r * std::sin(t);
}

ChannelRealization sample(const ChannelSampler& sampler, const SystemConfig& cfg,
                          std::uint64_t draw_index) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.n_ports);
    const auto kb = static_cast<std::size_t>(cfg.n_users);
    const auto m = static_cast<std::size_t>(cfg.n_eves);

    const Mat ls_bob = sampler.large_scale_bob.size() ? sampler.large_scale_bob : Mat(n, kb, 1.0);
    const Mat ls_eve = sampler.large_scale_eve.size() ? sampler.large_scale_eve : Mat(n, m, 1.0);
    if (ls_bob.rows() != n || ls_bob.cols() != kb || ls_eve.rows() != n || ls_eve.cols() != m)
        throw std::invalid_argument("large-scale gain shape mismatch");

    CounterRng rng(sampler.seed, draw_index);
    ChannelRealization ch;
    ch.gains_bob = Mat(n, kb);
    ch.gains_eve = Mat(n, m);
    CMat raw_bob(n * kb), raw_eve(n * m);

    auto draw = [&](std::complex<double>& h) {
        double u, v;
        rng.next_normal_pair(u, v);
        h = std::complex<double>(u * M_SQRT1_2, v * M_SQRT1_2); // |h|^2 ~ Exp(1)
    };
    for (std::size_t i = 0; i < n * kb; ++i) draw(raw_bob[i]);
    for (std::size_t i = 0; i < n * m; ++i) draw(raw_eve[i]);

    for (std::size_t i = 0; i < n * kb; ++i)
        ch.gains_bob[i] = ls_bob[i] * std::norm(raw_bob[i]) / cfg.noise_bob;
    for (std::size_t i = 0; i < n * m; ++i)
        ch.gains_eve[i] = ls_eve[i] * std::norm(raw_eve[i]) / cfg.noise_eve;

    ch.raw_bob = std::move(raw_bob);
    ch.raw_eve = std::move(raw_eve);
    return ch;
}

std::vector<double> exp_sum_sample(const ChannelSampler& sampler, int n, int count) {
    if (n <= 0) throw std::invalid_argument("exp_sum_sample: n must be positive");
    if (count < 0) throw std::invalid_argument("exp_sum_sample: count must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        CounterRng rng(sampler.seed, static_cast<std::uint64_t>(j));
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += rng.next_exponential();
        out[static_cast<std::size_t>(j)] = s;
    }
    return out;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) {
    if (watts <= 0.0) throw std::domain_error("watts_to_dbm: power must be > 0");
    return 10.0 * std::log10(watts) + 30.0;
}

} // namespace see
