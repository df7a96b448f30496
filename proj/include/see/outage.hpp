#ifndef SEE_OUTAGE_HPP
#define SEE_OUTAGE_HPP

#include "see/model.hpp"

namespace see {

// Parameters of the blanket-transmission outage analysis: every port
// transmits at the same power `port_power`, a single user, M iid eves.
struct OutageScenario {
    int n_ports = 1;           // N
    double port_power = 1.0;   // p, watts
    double circuit_power = 0;  // p_c, watts
    double ps_bob = 1.0;       // Delta^b
    double ps_eve = 1.0;       // Delta^e
    double noise_bob = 1.0;    // sigma_b^2, watts
    double noise_eve = 1.0;    // sigma_e^2, watts
    double threshold = 0.0;    // eta_th, bits/Hz per joule
    int n_eves = 1;            // M

    void validate() const;

    // Erlang rate of Bob's scaled channel sum X = w^b sum|h|^2.
    double alpha() const { return noise_bob / (ps_bob * port_power); }
    // Erlang rate of Eve's scaled channel sum Y.
    double beta() const { return noise_eve / (ps_eve * port_power); }
    // Exponent of the SNR threshold: total consumed power times eta_th.
    double z() const { return (n_ports * port_power + circuit_power) * threshold; }
};

// Erlang(n,1) CDF, i.e. the regularized lower incomplete gamma P(n, x).
double regularized_lower_gamma(int n, double x);

// Outage probability of SEE under blanket transmission, single eve,
// CSI of both links unknown. Evaluated in log space.
double outage_closed_form(const OutageScenario& s);

// Same formula evaluated naively in linear space; overflows for large z.
// Kept as an independent route for cross-checking the log-space path.
double outage_closed_form_direct(const OutageScenario& s);

// Outage probability when Bob's channel is realized and known;
// bob_channel_sum = sum_i |h_i|^2.
double outage_known_bob(const OutageScenario& s, double bob_channel_sum);

// One eavesdropper's CDF factor P(Y_m < Q'') evaluated from the printed
// closed-form series. The series alternates in sign for z > 0, so the
// value is reported together with an estimated cancellation error.
// Outside its derivation region (z > 0) the printed form can deviate
// from the true probability; quadrature_eve_cdf gives the exact value.
struct EveCdfResult {
    double value;
    double cancellation_error;
};
EveCdfResult eve_cdf_term(const OutageScenario& s);

// Worst-case outage over M iid eves using the printed series:
// 1 - eve_cdf_term(s)^M.
double outage_worst_case(const OutageScenario& s);

// Exact P(Y < Q''(X)) by adaptive quadrature over the Erlang density of
// X, with the region Q'' <= 0 excluded exactly. Numerical-truth oracle
// for the printed series.
double quadrature_eve_cdf(const OutageScenario& s, double tol = 1e-11);

// Worst-case outage built from the quadrature evaluator.
double outage_worst_case_quadrature(const OutageScenario& s, double tol = 1e-11);

} // namespace see

#endif
