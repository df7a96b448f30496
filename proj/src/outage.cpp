#include "see/outage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace see {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double la, double lb) {
    if (la == -kInf) return lb;
    if (lb == -kInf) return la;
    const double m = std::max(la, lb);
    return m + std::log1p(std::exp(std::min(la, lb) - m));
}

double lchoose(int n, int j) {
    return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
}

// log(2^z - 1) for z > 0, accurate for both tiny and huge z.
double log_pow2_minus1(double z) {
    const double zl = z * M_LN2;
    if (zl > 40.0) return zl; // 2^-z negligible
    return std::log(std::expm1(zl));
}

double clamp_probability(double v, const char* what) {
    if (v < 0.0) {
        if (v < -1e-9)
            throw NumericalError(std::string(what) + ": value " + std::to_string(v) +
                                 " below 0 beyond rounding tolerance");
        return 0.0;
    }
    if (v > 1.0) {
        if (v > 1.0 + 1e-9)
            throw NumericalError(std::string(what) + ": value " + std::to_string(v) +
                                 " above 1 beyond rounding tolerance");
        return 1.0;
    }
    return v;
}

} // namespace

void OutageScenario::validate() const {
    if (n_ports <= 0) throw std::invalid_argument("n_ports must be positive");
    if (n_eves <= 0) throw std::invalid_argument("n_eves must be positive");
    if (port_power <= 0.0) throw std::invalid_argument("port_power must be > 0");
    if (circuit_power < 0.0) throw std::invalid_argument("circuit_power must be >= 0");
    if (!(ps_bob > 0.0 && ps_bob <= 1.0) || !(ps_eve > 0.0 && ps_eve <= 1.0))
        throw std::invalid_argument("PS ratios must lie in (0,1]");
    if (noise_bob <= 0.0 || noise_eve <= 0.0)
        throw std::invalid_argument("noise powers must be > 0");
    if (threshold < 0.0) throw std::invalid_argument("threshold must be >= 0");
}

double regularized_lower_gamma(int n, double x) {
    if (n <= 0) throw std::domain_error("regularized_lower_gamma: n must be positive");
    if (x < 0.0) throw std::domain_error("regularized_lower_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < n + 1.0) {
        // lower series: P(n,x) = x^n e^-x / n! * sum_k x^k / ((n+1)...(n+k))
        double term = 1.0, sum = 1.0, denom = n;
        for (int k = 0; k < 10000; ++k) {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(n * std::log(x) - x - std::lgamma(n + 1.0));
    }
    // complement is the finite Poisson sum, free of cancellation for x >= n+1
    double term = std::exp(-x), q = term;
    for (int k = 1; k < n; ++k) {
        term *= x / k;
        q += term;
    }
    return 1.0 - q;
}

double outage_closed_form(const OutageScenario& s) {
    s.validate();
    const int n_ports = s.n_ports;
    const double alpha = s.alpha();
    const double beta = s.beta();
    const double z = s.z();

    const double log_a = z * M_LN2;                       // a = 2^z
    const double b_is_zero = (z == 0.0);
    const double log_b = b_is_zero ? -kInf : log_pow2_minus1(z); // b = 2^z - 1
    const double log_aab = log_add(log_a + std::log(alpha), std::log(beta));

    // K = beta^N e^{alpha(1-2^z)} / (N-1)!; the exponent is -alpha*b.
    const double alpha_b = b_is_zero ? 0.0 : alpha * std::exp(log_b);
    const double log_k = n_ports * std::log(beta) - alpha_b - std::lgamma(n_ports);

    double log_sum = -kInf;
    for (int n = 0; n < n_ports; ++n) {
        for (int j = 0; j <= n; ++j) {
            if (b_is_zero && j < n) continue;
            double lt = log_k + n * std::log(alpha) - std::lgamma(n + 1.0) + lchoose(n, j) +
                        j * log_a + std::lgamma(j + n_ports + 0.0) - (j + n_ports) * log_aab;
            if (j < n) lt += (n - j) * log_b;
            log_sum = log_add(log_sum, lt);
        }
    }
    return clamp_probability(1.0 - std::exp(log_sum), "outage_closed_form");
}

double outage_closed_form_direct(const OutageScenario& s) {
    s.validate();
    const int n_ports = s.n_ports;
    const double alpha = s.alpha();
    const double beta = s.beta();
    const double z = s.z();
    const double a = std::pow(2.0, z);
    const double b = a - 1.0;

    const double k_factor =
        std::pow(beta, n_ports) * std::exp(alpha * (1.0 - a)) / std::tgamma(n_ports);
    double fact_n = 1.0; // n!
    double sum = 0.0;
    for (int n = 0; n < n_ports; ++n) {
        if (n > 0) fact_n *= n;
        double inner = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double binom = std::exp(lchoose(n, j));
            inner += binom * std::pow(b, n - j) * std::pow(a, j) *
                     std::tgamma(j + n_ports + 0.0) / std::pow(a * alpha + beta, j + n_ports);
        }
        sum += std::pow(alpha, n) / fact_n * inner;
    }
    const double v = 1.0 - k_factor * sum;
    if (!std::isfinite(v))
        throw NumericalError("outage_closed_form_direct: overflow; use the log-space path");
    return v;
}

double outage_known_bob(const OutageScenario& s, double bob_channel_sum) {
    s.validate();
    if (bob_channel_sum < 0.0)
        throw std::invalid_argument("bob_channel_sum must be >= 0");
    const double wb = 1.0 / s.alpha();
    const double zl = s.z() * M_LN2;
    // Q' = (1 + w^b * sum) * 2^-z - 1
    const double q = (1.0 + wb * bob_channel_sum) * std::exp(-zl) - 1.0;
    if (q <= 0.0) return 1.0;
    return 1.0 - regularized_lower_gamma(s.n_ports, s.beta() * q);
}

EveCdfResult eve_cdf_term(const OutageScenario& s) {
    s.validate();
    const int n_ports = s.n_ports;
    const double alpha = s.alpha();
    const double beta = s.beta();
    const double z = s.z();

    const double log_ap = -z * M_LN2;                      // a' = 2^-z
    const bool bp_is_zero = (z == 0.0);
    // b' = 2^-z - 1 <= 0; log of its magnitude
    const double log_bp_mag = bp_is_zero ? -kInf : std::log(-std::expm1(log_ap));
    const double log_bba = log_add(log_ap + std::log(beta), std::log(alpha));

    const double beta_bp = bp_is_zero ? 0.0 : beta * (-std::expm1(log_ap));
    // prefactor e^{beta(1 - 2^-z)} alpha^N / (N-1)!
    const double log_k = n_ports * std::log(alpha) + beta_bp - std::lgamma(n_ports);

    double sum = 0.0, comp = 0.0, max_term = 0.0;
    int n_terms = 0;
    for (int n = 0; n < n_ports; ++n) {
        for (int j = 0; j <= n; ++j) {
            if (bp_is_zero && j < n) continue;
            double lt = log_k + n * std::log(beta) - std::lgamma(n + 1.0) + lchoose(n, j) +
                        j * log_ap + std::lgamma(j + n_ports + 0.0) - (j + n_ports) * log_bba;
            if (j < n) lt += (n - j) * log_bp_mag;
            const double sign = ((n - j) % 2 == 0) ? 1.0 : -1.0;
            const double t = sign * std::exp(lt);
            max_term = std::max(max_term, std::abs(t));
            ++n_terms;
            // Kahan compensated accumulation
            const double y = t - comp;
            const double acc = sum + y;
            comp = (acc - sum) - y;
            sum = acc;
        }
    }
    const double value = 1.0 - sum;
    const double cancel =
        max_term * std::numeric_limits<double>::epsilon() * std::max(n_terms, 1);
    if (cancel > 1e-3 && cancel > std::abs(value))
        throw NumericalError("eve_cdf_term: all significant digits lost to cancellation");
    return {value, cancel};
}

double outage_worst_case(const OutageScenario& s) {
    const EveCdfResult r = eve_cdf_term(s);
    return 1.0 - std::pow(r.value, s.n_eves);
}

namespace {

struct EveCdfIntegrand {
    int n;        // port count
    double alpha; // Erlang rate of X
    double beta;  // Erlang rate of Y
    double inv_a; // 2^-z
    double log_norm;

    double operator()(double x) const {
        const double q = (1.0 + x) * inv_a - 1.0;
        if (q <= 0.0 || x <= 0.0) return 0.0;
        const double fx = std::exp(log_norm + (n - 1) * std::log(x) - alpha * x);
        return regularized_lower_gamma(n, beta * q) * fx;
    }
};

double adaptive_simpson(const EveCdfIntegrand& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw NumericalError("quadrature_eve_cdf: recursion depth exhausted");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double quadrature_eve_cdf(const OutageScenario& s, double tol) {
    s.validate();
    const int n = s.n_ports;
    const double alpha = s.alpha();
    const double beta = s.beta();
    const double zl = s.z() * M_LN2;

    // Q''(x) > 0 only for x > 2^z - 1; below that the integrand is 0.
    const double x0 = (zl > 700.0) ? kInf : std::expm1(zl);
    if (!std::isfinite(x0)) return 0.0;
    // upper bound where the Erlang tail of X is negligible
    double hi = std::max(x0, (n + 10.0 * std::sqrt(static_cast<double>(n))) / alpha);
    while (1.0 - regularized_lower_gamma(n, alpha * hi) > 1e-16 && std::isfinite(hi))
        hi *= 2.0;
    if (1.0 - regularized_lower_gamma(n, alpha * x0) < 1e-300) return 0.0;

    EveCdfIntegrand f{n, alpha, beta, std::exp(-zl),
                      n * std::log(alpha) - std::lgamma(n)};
    // split at the Erlang mode to help the adaptive refinement
    const double mode = (n - 1) / alpha;
    std::vector<double> knots{x0};
    if (mode > x0 && mode < hi) knots.push_back(mode);
    knots.push_back(hi);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i], b = knots[i + 1];
        const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += adaptive_simpson(f, a, b, fa, fm, fb, whole, tol / 2.0, 60);
    }
    return clamp_probability(total, "quadrature_eve_cdf");
}

double outage_worst_case_quadrature(const OutageScenario& s, double tol) {
    const double term = quadrature_eve_cdf(s, tol);
    return 1.0 - std::pow(term, s.n_eves);
}

} // namespace see
