#include "see/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "see/channel.hpp"

namespace see {

namespace {

McEstimate finish(long long hits, long long trials, std::uint64_t seed) {
    const double v = static_cast<double>(hits) / static_cast<double>(trials);
    McEstimate e;
    e.value = v;
    e.stderr_ = std::sqrt(v * (1.0 - v) / static_cast<double>(trials));
    e.trials = trials;
    e.seed = seed;
    return e;
}

double erlang_draw(CounterRng& rng, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += rng.next_exponential();
    return s;
}

// One trial of the basic outage event: w^b X'' < (1 + w^e Y'') 2^z - 1.
bool outage_trial(const OutageScenario& s, std::uint64_t seed, long long t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    const double x = erlang_draw(rng, s.n_ports);
    const double y = erlang_draw(rng, s.n_ports);
    const double wb = 1.0 / s.alpha();
    const double we = 1.0 / s.beta();
    const double zl = s.z() * M_LN2;
    return wb * x < (1.0 + we * y) * std::exp(zl) - 1.0;
}

bool known_bob_trial(const OutageScenario& s, double bob_sum, std::uint64_t seed,
                     long long t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    const double y = erlang_draw(rng, s.n_ports);
    const double wb = 1.0 / s.alpha();
    const double we = 1.0 / s.beta();
    const double q = (1.0 + wb * bob_sum) * std::exp(-s.z() * M_LN2) - 1.0;
    return we * y > q;
}

bool worst_case_trial(const OutageScenario& s, std::uint64_t seed, long long t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    const double x = erlang_draw(rng, s.n_ports);
    const double wb = 1.0 / s.alpha();
    const double we = 1.0 / s.beta();
    double ymax = 0.0;
    for (int m = 0; m < s.n_eves; ++m)
        ymax = std::max(ymax, erlang_draw(rng, s.n_ports));
    const double q = (1.0 + wb * x) * std::exp(-s.z() * M_LN2) - 1.0;
    return we * ymax > q;
}

void check_trials(long long trials) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

} // namespace

McEstimate mc_outage(const OutageScenario& s, long long trials, std::uint64_t seed) {
    s.validate();
    check_trials(trials);
    long long hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
    for (long long t = 0; t < trials; ++t)
        hits += outage_trial(s, seed, t) ? 1 : 0;
    return finish(hits, trials, seed);
}

McEstimate mc_outage_serial(const OutageScenario& s, long long trials, std::uint64_t seed) {
    s.validate();
    check_trials(trials);
    long long hits = 0;
    for (long long t = 0; t < trials; ++t)
        hits += outage_trial(s, seed, t) ? 1 : 0;
    return finish(hits, trials, seed);
}

McEstimate mc_outage_known_bob(const OutageScenario& s, double bob_channel_sum,
                               long long trials, std::uint64_t seed) {
    s.validate();
    check_trials(trials);
    if (bob_channel_sum < 0.0) throw std::invalid_argument("bob_channel_sum must be >= 0");
    long long hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
    for (long long t = 0; t < trials; ++t)
        hits += known_bob_trial(s, bob_channel_sum, seed, t) ? 1 : 0;
    return finish(hits, trials, seed);
}

McEstimate mc_outage_known_bob_serial(const OutageScenario& s, double bob_channel_sum,
                                      long long trials, std::uint64_t seed) {
    s.validate();
    check_trials(trials);
    if (bob_channel_sum < 0.0) throw std::invalid_argument("bob_channel_sum must be >= 0");
    long long hits = 0;
    for (long long t = 0; t < trials; ++t)
        hits += known_bob_trial(s, bob_channel_sum, seed, t) ? 1 : 0;
    return finish(hits, trials, seed);
}

McEstimate mc_outage_worst_case(const OutageScenario& s, long long trials,
                                std::uint64_t seed) {
    s.validate();
    check_trials(trials);
    long long hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
    for (long long t = 0; t < trials; ++t)
        hits += worst_case_trial(s, seed, t) ? 1 : 0;
    return finish(hits, trials, seed);
}

McEstimate mc_outage_worst_case_serial(const OutageScenario& s, long long trials,
                                       std::uint64_t seed) {
    s.validate();
    check_trials(trials);
    long long hits = 0;
    for (long long t = 0; t < trials; ++t)
        hits += worst_case_trial(s, seed, t) ? 1 : 0;
    return finish(hits, trials, seed);
}

} // namespace see
