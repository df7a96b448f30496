#ifndef SEE_MONTECARLO_HPP
#define SEE_MONTECARLO_HPP

#include <cstdint>

#include "see/outage.hpp"

namespace see {

// Monte Carlo estimate of a probability with its binomial standard error.
struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    long long trials = 0;
    std::uint64_t seed = 0;
};

// Estimators of the outage events, sampled directly from the event
// definitions. Trial t draws from the counter-based stream (seed, t),
// so the count is independent of execution order; the OpenMP kernels
// and their serial references produce bit-identical estimates.

McEstimate mc_outage(const OutageScenario& s, long long trials, std::uint64_t seed);
McEstimate mc_outage_serial(const OutageScenario& s, long long trials, std::uint64_t seed);

McEstimate mc_outage_known_bob(const OutageScenario& s, double bob_channel_sum,
                               long long trials, std::uint64_t seed);
McEstimate mc_outage_known_bob_serial(const OutageScenario& s, double bob_channel_sum,
                                      long long trials, std::uint64_t seed);

McEstimate mc_outage_worst_case(const OutageScenario& s, long long trials,
                                std::uint64_t seed);
McEstimate mc_outage_worst_case_serial(const OutageScenario& s, long long trials,
                                       std::uint64_t seed);

} // namespace see

#endif
