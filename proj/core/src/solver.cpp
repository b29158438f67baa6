#include "pplab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "pplab/grid_ops.hpp"

namespace pplab {

void SolverConfig::validate() const {
    if (!(p > 1.0)) throw std::invalid_argument("solver: p must exceed 1");
    if (eps_schedule.empty()) throw std::invalid_argument("solver: empty eps schedule");
    for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
        if (!(eps_schedule[k] > 0))
            throw std::invalid_argument("solver: eps values must be positive");
        if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1]))
            throw std::invalid_argument("solver: eps schedule must be strictly decreasing");
    }
    if (!(picard_tol > 0) || !(grad_tol > 0) || !(linear_tol > 0))
        throw std::invalid_argument("solver: tolerances must be positive");
    if (max_outer < 1 || max_linear_iters < 1)
        throw std::invalid_argument("solver: iteration caps must be positive");
    if (!(damping > 0) || damping > 1.0)
        throw std::invalid_argument("solver: damping must lie in (0, 1]");
}

namespace {

constexpr int kDi[4] = {1, -1, 0, 0};
constexpr int kDj[4] = {0, 0, 1, -1};

// Squared nodal gradient magnitudes at interior and boundary nodes
// (boundary best-effort; NaN where no stencil applies).
std::vector<double> nodal_grad_sq(const ScalarField& v) {
    const VectorField g = gradient(v, MissingPolicy::strict);
    std::vector<double> g2(v.grid().size(), kNaN);
    for (std::size_t n = 0; n < g2.size(); ++n) {
        const Vec2 vec = g[n];
        if (std::isfinite(vec.x) && std::isfinite(vec.y)) g2[n] = vec.x * vec.x + vec.y * vec.y;
    }
    return g2;
}

// Edge-midpoint weight between two nodes: the two nodal squared gradient
// magnitudes are averaged before the (p-2)/2 power, preserving symmetry of
// the linear system.
double edge_weight(double g2a, double g2b, double p, double eps) {
    double m;
    if (std::isfinite(g2a) && std::isfinite(g2b))
        m = 0.5 * (g2a + g2b);
    else if (std::isfinite(g2a))
        m = g2a;
    else if (std::isfinite(g2b))
        m = g2b;
    else
        m = 0.0;
    return std::pow(m + eps * eps, 0.5 * (p - 2));
}

struct WeightedSystem {
    // Per interior node, weights toward +x, -x, +y, -y.
    std::vector<std::array<double, 4>> w;
    const Grid2D* grid;
    const std::vector<std::size_t>* interior;
    std::vector<std::ptrdiff_t> unknown_of_node;  // -1 for non-interior

    double h2;  // spacing^2

    // y <- A x with A = -div(w grad .) restricted to the unknowns.
    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        const Grid2D& g = *grid;
        const auto& ids = *interior;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            auto [i, j] = g.ij(ids[k]);
            double acc = 0.0;
            for (int d = 0; d < 4; ++d) {
                const std::size_t nb = g.index(i + kDi[d], j + kDj[d]);
                const std::ptrdiff_t u = unknown_of_node[nb];
                const double xnb = u >= 0 ? x[u] : 0.0;  // boundary part lives in b
                acc += w[k][d] * (x[k] - xnb);
            }
            y[k] = acc / h2;
        }
    }

    double diag(std::size_t k) const {
        return (w[k][0] + w[k][1] + w[k][2] + w[k][3]) / h2;
    }
};

WeightedSystem assemble(const ScalarField& v, double p, double eps) {
    const Grid2D& g = v.grid();
    const auto g2 = nodal_grad_sq(v);
    WeightedSystem sys;
    sys.grid = &g;
    sys.interior = &g.interior_nodes();
    sys.h2 = g.spacing() * g.spacing();
    sys.unknown_of_node.assign(g.size(), -1);
    const auto& ids = g.interior_nodes();
    for (std::size_t k = 0; k < ids.size(); ++k) sys.unknown_of_node[ids[k]] = k;
    sys.w.resize(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
        auto [i, j] = g.ij(ids[k]);
        for (int d = 0; d < 4; ++d) {
            const std::size_t nb = g.index(i + kDi[d], j + kDj[d]);
            sys.w[k][d] = edge_weight(g2[ids[k]], g2[nb], p, eps);
        }
    }
    return sys;
}

// Right-hand side of A x = b for unknowns: -h plus boundary contributions.
std::vector<double> system_rhs(const WeightedSystem& sys, const ScalarField& v,
                               const ScalarField& h) {
    const Grid2D& g = *sys.grid;
    const auto& ids = *sys.interior;
    std::vector<double> b(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
        auto [i, j] = g.ij(ids[k]);
        double acc = -h[ids[k]];
        for (int d = 0; d < 4; ++d) {
            const std::size_t nb = g.index(i + kDi[d], j + kDj[d]);
            if (sys.unknown_of_node[nb] < 0) acc += sys.w[k][d] * v[nb] / sys.h2;
        }
        b[k] = acc;
    }
    return b;
}

double dot_seq(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

// Jacobi-preconditioned conjugate gradients; deterministic sequential loops.
std::vector<double> pcg(const WeightedSystem& sys, const std::vector<double>& b,
                        std::vector<double> x, double tol, int max_iters) {
    const std::size_t n = b.size();
    std::vector<double> r(n), z(n), d(n), Ad(n), inv_diag(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = sys.diag(k);
        if (!(a > 0)) throw std::runtime_error("linear solver: non-positive diagonal weight");
        inv_diag[k] = 1.0 / a;
    }
    sys.apply(x, Ad);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - Ad[k];
    const double bnorm = std::sqrt(dot_seq(b, b));
    const double stop = tol * (bnorm > 0 ? bnorm : 1.0);
    double rnorm = std::sqrt(dot_seq(r, r));
    if (rnorm <= stop) return x;
    for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
    d = z;
    double rz = dot_seq(r, z);
    for (int it = 0; it < max_iters; ++it) {
        sys.apply(d, Ad);
        const double dAd = dot_seq(d, Ad);
        if (!(dAd > 0)) throw std::runtime_error("linear solver: lost positive definiteness");
        const double alpha = rz / dAd;
        for (std::size_t k = 0; k < n; ++k) x[k] += alpha * d[k];
        for (std::size_t k = 0; k < n; ++k) r[k] -= alpha * Ad[k];
        rnorm = std::sqrt(dot_seq(r, r));
        if (rnorm <= stop) return x;
        for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
        const double rz_new = dot_seq(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < n; ++k) d[k] = z[k] + beta * d[k];
    }
    throw std::runtime_error("linear solver: conjugate gradients hit max_linear_iters");
}

void check_boundary_data(const Grid2D& g, const ScalarField& boundary) {
    for (std::size_t n = 0; n < g.size(); ++n)
        if (g.node_class(n) == NodeClass::boundary && !std::isfinite(boundary[n]))
            throw std::invalid_argument("solve: boundary data missing at a boundary node");
}

}  // namespace

double variational_energy(const ScalarField& v, const ScalarField& h, double p, double eps) {
    if (!(p > 1.0)) throw std::invalid_argument("variational_energy: p must exceed 1");
    if (eps < 0) throw std::invalid_argument("variational_energy: eps must be non-negative");
    const Grid2D& g = v.grid();
    const auto g2 = nodal_grad_sq(v);
    const double e2 = eps * eps;
    double sum = 0.0;
    for (std::size_t n : g.interior_nodes())
        sum += std::pow(g2[n] + e2, 0.5 * p) / p + h[n] * v[n];
    return g.spacing() * g.spacing() * sum;
}

ScalarField residual_field(const ScalarField& v, const ScalarField& h, double p, double eps) {
    if (!(p > 1.0)) throw std::invalid_argument("residual_field: p must exceed 1");
    const WeightedSystem sys = assemble(v, p, eps);
    const Grid2D& g = v.grid();
    const auto& ids = g.interior_nodes();
    ScalarField out(v.grid_ptr(), kNaN);
    for (std::size_t k = 0; k < ids.size(); ++k) {
        auto [i, j] = g.ij(ids[k]);
        double flux = 0.0;
        bool ok = true;
        for (int d = 0; d < 4; ++d) {
            const double vn = v[g.index(i + kDi[d], j + kDj[d])];
            if (!std::isfinite(vn)) {
                ok = false;
                break;
            }
            flux += sys.w[k][d] * (vn - v[ids[k]]);
        }
        out[ids[k]] = ok ? flux / sys.h2 - h[ids[k]] : kNaN;
    }
    return out;
}

double residual_rms(const ScalarField& v, const ScalarField& h, double p, double eps) {
    const ScalarField res = residual_field(v, h, p, eps);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t n : v.grid().interior_nodes()) {
        if (!std::isfinite(res[n])) continue;
        sum += res[n] * res[n];
        ++count;
    }
    if (count == 0) throw std::runtime_error("residual_rms: no evaluable interior nodes");
    return std::sqrt(sum / count);
}

std::pair<ScalarField, SolveReport> solve_p_poisson(std::shared_ptr<const Grid2D> grid,
                                                    const ScalarField& h,
                                                    const ScalarField& boundary,
                                                    const SolverConfig& config) {
    config.validate();
    const Grid2D& g = *grid;
    check_boundary_data(g, boundary);

    // Start from the mean boundary value in the interior.
    double bsum = 0.0;
    std::size_t bcount = 0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (g.node_class(n) == NodeClass::boundary) {
            bsum += boundary[n];
            ++bcount;
        }
    }
    const double bmean = bcount ? bsum / bcount : 0.0;
    ScalarField v(grid, kNaN);
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (g.node_class(n) == NodeClass::boundary) v[n] = boundary[n];
        else if (g.interior(n)) v[n] = bmean;
    }

    SolveReport report;
    report.eps_schedule = config.eps_schedule;
    const auto& ids = g.interior_nodes();
    bool cap_hit = false;

    for (double eps : config.eps_schedule) {
        double energy_cur = variational_energy(v, h, config.p, eps);
        if (!std::isfinite(energy_cur))
            throw std::runtime_error("solve: non-finite energy (diverged)");
        report.phase_starts.push_back(report.energy_trace.size());
        report.energy_trace.push_back(energy_cur);
        for (;;) {
            if (report.iterations >= config.max_outer) {
                cap_hit = true;
                break;
            }
            const WeightedSystem sys = assemble(v, config.p, eps);
            const auto b = system_rhs(sys, v, h);
            std::vector<double> x(ids.size());
            for (std::size_t k = 0; k < ids.size(); ++k) x[k] = v[ids[k]];
            const std::vector<double> x0 = x;
            x = pcg(sys, b, std::move(x), config.linear_tol, config.max_linear_iters);

            // Backtracking on the true energy keeps the trace non-increasing;
            // the full step is accepted in the regular case.
            ScalarField trial = v;
            double t = config.damping;
            double energy_new = energy_cur;
            bool accepted = false;
            for (int ls = 0; ls < 46; ++ls) {
                for (std::size_t k = 0; k < ids.size(); ++k)
                    trial[ids[k]] = x0[k] + t * (x[k] - x0[k]);
                energy_new = variational_energy(trial, h, config.p, eps);
                if (std::isfinite(energy_new) && energy_new <= energy_cur) {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            ++report.iterations;
            if (!accepted) {
                // No descent along the Picard direction: the phase has stalled
                // at the discrete minimizer.
                report.energy_trace.push_back(energy_cur);
                break;
            }
            v = trial;
            report.energy_trace.push_back(energy_new);
            const double decrease = energy_cur - energy_new;
            energy_cur = energy_new;
            if (decrease <= config.picard_tol * std::max(std::abs(energy_cur), 1e-300)) break;
        }
        if (cap_hit) break;
    }

    const double eps_final = config.eps_schedule.back();
    report.final_energy = variational_energy(v, h, config.p, eps_final);
    report.final_residual = residual_rms(v, h, config.p, eps_final);
    report.converged = !cap_hit && report.final_residual < config.grad_tol;
    return {std::move(v), std::move(report)};
}

}  // namespace pplab
