#ifndef SEE_OPTIMIZER_HPP
#define SEE_OPTIMIZER_HPP

#include <string>
#include <utility>
#include <vector>

#include "see/model.hpp"

namespace see {

struct SolverOptions {
    double outer_tol = 1e-8;  // Dinkelbach convergence on F - lambda*G
    double inner_tol = 1e-8;  // projected-gradient stationarity
    int max_outer = 100;
    int max_inner = 10000;
    int restarts = 5;         // randomized feasible starts

    void validate() const;
};

enum class SolveStatus { optimal, infeasible, max_iterations, numerical_failure };

const char* to_string(SolveStatus s);

struct SolveReport {
    PowerAllocation allocation;
    double see_value = 0.0;
    std::vector<double> lambda_trace;            // Dinkelbach parameter per outer iteration
    double kkt_residual = 0.0;
    std::vector<std::pair<std::string, double>> constraint_slacks; // >= 0 when satisfied
    SolveStatus status = SolveStatus::numerical_failure;
    double restart_spread = 0.0;                 // relative SEE spread across restarts
    bool bob_dominance_ok = true;                // Delta^b B_k > Delta^e E held at the solution
};

struct FeasibilityResult {
    bool feasible = false;
    PowerAllocation point;                 // a feasible allocation when feasible
    std::vector<std::string> violated;     // constraint families that could not be met
};

// Phase-1 feasibility: all four constraint families are linear in the
// allocation, and the harvest constraints depend only on per-port totals.
FeasibilityResult check_feasibility(const SystemConfig& cfg, const ChannelRealization& ch);

// Euclidean projection onto the feasible set C1-C4 (Dykstra alternating
// projections over the per-port capped simplices and the harvest halfspaces).
PowerAllocation project_feasible(const SystemConfig& cfg, const ChannelRealization& ch,
                                 const PowerAllocation& p);

// Maximizes F(p) - lambda*G(p) (secrecy-rate numerator minus lambda times
// consumed power) over the feasible set by projected gradient ascent.
PowerAllocation dinkelbach_subproblem(const SystemConfig& cfg, const ChannelRealization& ch,
                                      double lambda, const PowerAllocation& start,
                                      const SolverOptions& opts);

// Scaled stationarity violation of the SEE objective at `alloc`:
// ||P_C(p + grad) - p|| / (1 + ||grad||). Zero at an exact KKT point.
double kkt_residual(const SystemConfig& cfg, const ChannelRealization& ch,
                    const PowerAllocation& alloc);

// Maximizes SEE subject to C1-C4 via a Dinkelbach outer loop with a
// projected-gradient inner solver and randomized restarts.
SolveReport solve_p1(const SystemConfig& cfg, const ChannelRealization& ch,
                     const SolverOptions& opts = {});

// Exhaustive grid search over the feasible box; brute-force verification
// oracle for small instances (n_ports * n_users <= 4).
struct GridResult {
    bool found = false;
    PowerAllocation allocation;
    double see_value = 0.0;
};
GridResult grid_oracle(const SystemConfig& cfg, const ChannelRealization& ch, int resolution);

} // namespace see

#endif
