#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "rsa/field.hpp"

namespace rsa {

enum class Scheme { fd1, fd2, sl1, sl2 };
enum class EdgeDetector { g1, g2tilde };
enum class DegenerateBranch { centered, literal };

/// Pointwise front-speed factors g(|grad I_filt|) in [0, 1] plus the
/// gradient range they were computed from.
struct EdgeField {
    ScalarField g;
    EdgeDetector kind = EdgeDetector::g2tilde;
    double param = 0.8;       // p for g1, c2 for g2tilde
    double grad_min = 0.0;
    double grad_max = 0.0;
};

struct LevelSetConfig {
    Scheme scheme = Scheme::fd1;
    EdgeDetector detector = EdgeDetector::g2tilde;
    double p = 2.0;                  // g1 exponent
    double c2 = 0.8;                 // g2tilde cutoff
    double nu = 1e-4;                // curvature weight (fd2/sl2)
    double dt = 0.0;                 // 0 selects the scheme default
    double switch_c = 1.0;           // degenerate-branch switch constant C
    double switch_s = 1.0;           // switch exponent s, threshold C*dx^s
    DegenerateBranch degenerate = DegenerateBranch::centered;
    double eps_front = 0.1;          // front-band tolerance eps_F
    double eps = 1e-3;               // stopping tolerance
    double t_max = 50.0;
    int sl_directions = 16;          // unit-ball samples besides the center
    void validate() const;
};

/// dx/4 for fd1, dx^2 for fd2, dx for the SL schemes.
double scheme_default_dt(Scheme scheme, double dx);

/// Level-set representation at time t = n * dt.
struct FrontState {
    ScalarField v;
    double t = 0.0;
    long n = 0;

    /// Nodes with |v| <= eps_front.
    std::vector<std::pair<std::size_t, std::size_t>> front_nodes(double eps_front) const;
    std::size_t front_size(double eps_front) const;
};

/// Rectangular initial front inset from the image border, positive inside
/// (contracting evolution): u0 = 1 - max(|x-a/2|, |y-b/2|) / (half - 2dx).
FrontState initial_front(std::size_t rows, std::size_t cols, double dx);

double edge_g1(double grad_mag, double p);
double edge_g2(double grad_mag, double m, double M);
double edge_g2tilde(double grad_mag, double m, double M, double c2);

EdgeField build_edge_field(const ScalarField& filtered, EdgeDetector kind, double param);

/// Godunov upwind gradient used by the FD schemes.
double upwind_gradient(const DiffOps& d);

/// Curvature numerator over |Dc| (the second-order FD correction).
double curvature_term(const DiffOps& d);

/// Unit-tangent direction scaled by sqrt(2), orthogonal to the centered
/// gradient; only valid where |Dc| > 0. Returns (sigma_x, sigma_y).
std::pair<double, double> curvature_sigma(const DiffOps& d);

FrontState fd1_step(const FrontState& state, const EdgeField& g, double dt);
FrontState fd2_step(const FrontState& state, const EdgeField& g, double dt, double nu,
                    double switch_c, double switch_s,
                    DegenerateBranch degenerate = DegenerateBranch::centered);
FrontState sl1_step(const FrontState& state, const EdgeField& g, double dt, int sl_directions);
FrontState sl2_step(const FrontState& state, const EdgeField& g, double dt, double nu,
                    double switch_c, double switch_s, int sl_directions,
                    DegenerateBranch degenerate = DegenerateBranch::centered);

enum class StopStatus { run_on, converged, front_vanished };

struct StopCheck {
    StopStatus status = StopStatus::run_on;
    double residual = 0.0;        // dx^2 * sum over the front band of |dv|
    std::size_t front_size = 0;   // band size taken from prev
};

StopCheck check_stop(const FrontState& prev, const FrontState& next, double eps,
                     double eps_front);

enum class EvolveStatus { converged, front_vanished, t_max_reached };

struct TraceEntry {
    long step = 0;
    double t = 0.0;
    double residual = 0.0;
    std::size_t front_size = 0;
};

struct EvolveResult {
    FrontState final;
    EvolveStatus status = EvolveStatus::t_max_reached;
    std::vector<TraceEntry> trace;
};

using SnapshotFn = std::function<void(const FrontState&)>;

EvolveResult evolve(FrontState v0, const EdgeField& g, const LevelSetConfig& cfg,
                    const SnapshotFn& snapshot = {});

}  // namespace rsa
