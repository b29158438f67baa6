#pragma once

#include <utility>
#include <vector>

#include "pplab/field.hpp"

namespace pplab {

/// Configuration for the regularized Picard (successive-substitution) solve.
///
/// The weight (|grad v|^2 + eps^2)^{(p-2)/2} is degenerate for p > 2 and
/// singular for p < 2 where the gradient vanishes; the eps continuation
/// handles both.  Each eps phase runs linear solves with frozen weights
/// until the relative energy decrease drops below picard_tol, then
/// warm-starts the next (smaller) eps.
struct SolverConfig {
    double p = 2.0;
    std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    double picard_tol = 1e-10;  // relative energy decrease that ends a phase
    double grad_tol = 1e-5;     // RMS Euler-Lagrange residual for `converged`
    int max_outer = 200;        // total Picard iterations across all phases
    int max_linear_iters = 50000;
    double linear_tol = 1e-10;  // relative residual of the inner CG solve
    double damping = 1.0;       // initial step fraction of each Picard update

    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    double final_energy = 0.0;
    double final_residual = 0.0;
    std::vector<double> energy_trace;        // one entry per energy evaluation
    std::vector<std::size_t> phase_starts;   // index into energy_trace per eps phase
    std::vector<double> eps_schedule;
    bool converged = false;
};

/// Discrete variational energy
///   spacing^2 * sum_interior [ (1/p)(|grad v|^2 + eps^2)^{p/2} + h*v ].
double variational_energy(const ScalarField& v, const ScalarField& h, double p, double eps);

/// Node-wise div(w grad v) - h with the same edge-midpoint weighted 5-point
/// stencil the solver uses, w = (|grad v|^2 + eps^2)^{(p-2)/2}; NaN outside
/// the interior.
ScalarField residual_field(const ScalarField& v, const ScalarField& h, double p, double eps);

/// RMS of residual_field over interior nodes.
double residual_rms(const ScalarField& v, const ScalarField& h, double p, double eps);

/// Minimize the discrete energy over fields matching `boundary` on the
/// boundary layer.  Each Picard step solves the weighted 5-point system by
/// diagonally preconditioned conjugate gradients;  the step is damped by
/// backtracking so the reported energy trace never increases within a phase.
/// Throws std::runtime_error if the energy turns non-finite (divergence).
std::pair<ScalarField, SolveReport> solve_p_poisson(std::shared_ptr<const Grid2D> grid,
                                                    const ScalarField& h,
                                                    const ScalarField& boundary,
                                                    const SolverConfig& config);

}  // namespace pplab
