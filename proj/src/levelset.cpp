#include "rsa/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rsa/errors.hpp"

namespace rsa {

void LevelSetConfig::validate() const {
    if (detector == EdgeDetector::g1 && !(p >= 1.0))
        throw DomainError("edge detector g1 requires p >= 1");
    if (detector == EdgeDetector::g2tilde && !(c2 >= 0.0 && c2 < 1.0))
        throw DomainError("edge detector g2tilde requires c2 in [0, 1)");
    if (!(nu >= 0.0)) throw DomainError("curvature weight nu must be >= 0");
    if (dt < 0.0) throw DomainError("dt must be positive (or 0 for the scheme default)");
    if (!(switch_c > 0.0) || !(switch_s > 0.0))
        throw DomainError("switch constants C and s must be positive");
    if (!(eps_front > 0.0) || !(eps > 0.0))
        throw DomainError("tolerances eps_front and eps must be positive");
    if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
    if ((scheme == Scheme::sl1 || scheme == Scheme::sl2) && sl_directions < 8)
        throw DomainError("SL schemes require at least 8 unit-ball directions");
}

double scheme_default_dt(Scheme scheme, double dx) {
    switch (scheme) {
        case Scheme::fd1: return dx / 4.0;
        case Scheme::fd2: return dx * dx;
        default: return dx;
    }
}

std::vector<std::pair<std::size_t, std::size_t>> FrontState::front_nodes(
    double eps_front) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j)
            if (std::abs(v(i, j)) <= eps_front) out.emplace_back(i, j);
    return out;
}

std::size_t FrontState::front_size(double eps_front) const {
    std::size_t n = 0;
    for (double x : v.values())
        if (std::abs(x) <= eps_front) ++n;
    return n;
}

FrontState initial_front(std::size_t rows, std::size_t cols, double dx) {
    if (rows < 3 || cols < 3) throw DomainError("initial_front: grid must be at least 3x3");
    const double a = static_cast<double>(cols) * dx;
    const double b = static_cast<double>(rows) * dx;
    const double cx = a / 2.0;
    const double cy = b / 2.0;
    const double wx = std::max(a / 2.0 - 2.0 * dx, dx / 2.0);
    const double wy = std::max(b / 2.0 - 2.0 * dx, dx / 2.0);
    FrontState st;
    st.v = ScalarField(rows, cols, dx);
    for (std::size_t i = 0; i < rows; ++i) {
        const double y = st.v.y_of(i);
        for (std::size_t j = 0; j < cols; ++j) {
            const double x = st.v.x_of(j);
            st.v(i, j) = 1.0 - std::max(std::abs(x - cx) / wx, std::abs(y - cy) / wy);
        }
    }
    return st;
}

double edge_g1(double grad_mag, double p) { return 1.0 / (1.0 + std::pow(grad_mag, p)); }

double edge_g2(double grad_mag, double m, double M) {
    return 1.0 - (grad_mag - m) / (M - m);
}

double edge_g2tilde(double grad_mag, double m, double M, double c2) {
    if (!(M > m)) throw DegenerateRange("edge_g2tilde: gradient range is degenerate (m == M)");
    return std::max(edge_g2(grad_mag, m, M) - c2, 0.0) / (1.0 - c2);
}

EdgeField build_edge_field(const ScalarField& filtered, EdgeDetector kind, double param) {
    const std::size_t rows = filtered.rows();
    const std::size_t cols = filtered.cols();
    ScalarField grad(rows, cols, filtered.dx());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const DiffOps d = diff_ops(filtered, i, j);
            grad(i, j) = std::hypot(d.dcx, d.dcy);
        }
    }
    EdgeField e;
    e.kind = kind;
    e.param = param;
    e.grad_min = grad.min_value();
    e.grad_max = grad.max_value();
    e.g = ScalarField(rows, cols, filtered.dx());
    for (std::size_t k = 0; k < grad.size(); ++k) {
        e.g.values()[k] = (kind == EdgeDetector::g1)
                              ? edge_g1(grad.values()[k], param)
                              : edge_g2tilde(grad.values()[k], e.grad_min, e.grad_max, param);
    }
    return e;
}

double upwind_gradient(const DiffOps& d) {
    const double a = std::max(d.dmx, 0.0);
    const double b = std::min(d.dpx, 0.0);
    const double c = std::max(d.dmy, 0.0);
    const double e = std::min(d.dpy, 0.0);
    return std::sqrt(a * a + b * b + c * c + e * e);
}

double curvature_term(const DiffOps& d) {
    const double mag = std::sqrt(d.dcx * d.dcx + d.dcy * d.dcy);
    return (d.d2x * d.dcy * d.dcy - 2.0 * d.dcx * d.dcy * d.dxy + d.d2y * d.dcx * d.dcx) / mag;
}

std::pair<double, double> curvature_sigma(const DiffOps& d) {
    const double mag = std::sqrt(d.dcx * d.dcx + d.dcy * d.dcy);
    const double scale = std::numbers::sqrt2 / mag;
    return {scale * d.dcy, -scale * d.dcx};
}

namespace {

FrontState advance(const FrontState& state, ScalarField next_v, double dt) {
    FrontState out;
    out.v = std::move(next_v);
    out.t = state.t + dt;
    out.n = state.n + 1;
    return out;
}

// Shared FD kernel. nu == 0 takes exactly the first-order path so
// fd2_step(nu = 0) is bit-identical to fd1_step.
FrontState fd_step(const FrontState& state, const EdgeField& g, double dt, double nu,
                   double switch_c, double switch_s, DegenerateBranch degenerate) {
    const ScalarField& v = state.v;
    const double dx = v.dx();
    const double threshold = switch_c * std::pow(dx, switch_s);
    ScalarField next(v.rows(), v.cols(), dx);
    for (std::size_t i = 0; i < v.rows(); ++i) {
        for (std::size_t j = 0; j < v.cols(); ++j) {
            const DiffOps d = diff_ops(v, i, j);
            const double gij = g.g(i, j);
            double upd = v(i, j) - dt * gij * upwind_gradient(d);
            if (nu != 0.0) {
                const double dc_mag = std::sqrt(d.dcx * d.dcx + d.dcy * d.dcy);
                if (dc_mag > threshold) {
                    upd += nu * dt * gij * curvature_term(d);
                } else {
                    const StencilSample s = neumann_sample(v, i, j);
                    double nb = s.xp + s.yp + s.xm + s.ym;
                    if (degenerate == DegenerateBranch::centered) nb -= 4.0 * s.c;
                    upd += nu / 4.0 * gij * nb;
                }
            }
            next(i, j) = upd;
        }
    }
    return advance(state, std::move(next), dt);
}

// Shared SL kernel; same nu == 0 contract as the FD kernel.
FrontState sl_step(const FrontState& state, const EdgeField& g, double dt, double nu,
                   double switch_c, double switch_s, int sl_directions,
                   DegenerateBranch degenerate) {
    const ScalarField& v = state.v;
    const double dx = v.dx();
    const double threshold = switch_c * std::pow(dx, switch_s);
    const double sqrt_dt = std::sqrt(dt);

    std::vector<std::pair<double, double>> dirs;
    dirs.reserve(static_cast<std::size_t>(sl_directions));
    for (int k = 0; k < sl_directions; ++k) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(k) /
                          static_cast<double>(sl_directions);
        dirs.emplace_back(std::cos(th), std::sin(th));
    }

    ScalarField next(v.rows(), v.cols(), dx);
    for (std::size_t i = 0; i < v.rows(); ++i) {
        const double y = v.y_of(i);
        for (std::size_t j = 0; j < v.cols(); ++j) {
            const double x = v.x_of(j);
            const double gij = g.g(i, j);
            double best = v(i, j);  // the a = 0 candidate
            const double step = dt * gij;
            if (step > 0.0) {
                for (const auto& [ax, ay] : dirs)
                    best = std::min(best, bilinear_interp(v, x - step * ax, y - step * ay));
            }
            double upd = best;
            if (nu != 0.0) {
                const DiffOps d = diff_ops(v, i, j);
                const double dc_mag = std::sqrt(d.dcx * d.dcx + d.dcy * d.dcy);
                if (dc_mag > threshold) {
                    const auto [sx, sy] = curvature_sigma(d);
                    upd += nu / 2.0 * gij *
                           (bilinear_interp(v, x + sx * sqrt_dt, y + sy * sqrt_dt) +
                            bilinear_interp(v, x - sx * sqrt_dt, y - sy * sqrt_dt));
                } else {
                    const StencilSample s = neumann_sample(v, i, j);
                    double nb = s.xp + s.yp + s.xm + s.ym;
                    if (degenerate == DegenerateBranch::centered) nb -= 4.0 * s.c;
                    upd += nu / 4.0 * gij * nb;
                }
            }
            next(i, j) = upd;
        }
    }
    return advance(state, std::move(next), dt);
}

}  // namespace

FrontState fd1_step(const FrontState& state, const EdgeField& g, double dt) {
    return fd_step(state, g, dt, 0.0, 1.0, 1.0, DegenerateBranch::centered);
}

FrontState fd2_step(const FrontState& state, const EdgeField& g, double dt, double nu,
                    double switch_c, double switch_s, DegenerateBranch degenerate) {
    return fd_step(state, g, dt, nu, switch_c, switch_s, degenerate);
}

FrontState sl1_step(const FrontState& state, const EdgeField& g, double dt,
                    int sl_directions) {
    return sl_step(state, g, dt, 0.0, 1.0, 1.0, sl_directions, DegenerateBranch::centered);
}

FrontState sl2_step(const FrontState& state, const EdgeField& g, double dt, double nu,
                    double switch_c, double switch_s, int sl_directions,
                    DegenerateBranch degenerate) {
    return sl_step(state, g, dt, nu, switch_c, switch_s, sl_directions, degenerate);
}

StopCheck check_stop(const FrontState& prev, const FrontState& next, double eps,
                     double eps_front) {
    StopCheck out;
    const double dx2 = prev.v.dx() * prev.v.dx();
    double sum = 0.0;
    for (std::size_t k = 0; k < prev.v.size(); ++k) {
        if (std::abs(prev.v.values()[k]) <= eps_front) {
            ++out.front_size;
            sum += std::abs(next.v.values()[k] - prev.v.values()[k]);
        }
    }
    out.residual = dx2 * sum;
    if (out.front_size == 0)
        out.status = StopStatus::front_vanished;
    else if (out.residual <= eps)
        out.status = StopStatus::converged;
    return out;
}

EvolveResult evolve(FrontState v0, const EdgeField& g, const LevelSetConfig& cfg,
                    const SnapshotFn& snapshot) {
    cfg.validate();
    const double dt = cfg.dt > 0.0 ? cfg.dt : scheme_default_dt(cfg.scheme, v0.v.dx());

    EvolveResult res;
    if (v0.front_size(cfg.eps_front) == 0) {
        res.final = std::move(v0);
        res.status = EvolveStatus::front_vanished;
        return res;
    }

    FrontState state = std::move(v0);
    while (state.t < cfg.t_max) {
        FrontState next;
        switch (cfg.scheme) {
            case Scheme::fd1: next = fd1_step(state, g, dt); break;
            case Scheme::fd2:
                next = fd2_step(state, g, dt, cfg.nu, cfg.switch_c, cfg.switch_s,
                                cfg.degenerate);
                break;
            case Scheme::sl1: next = sl1_step(state, g, dt, cfg.sl_directions); break;
            case Scheme::sl2:
                next = sl2_step(state, g, dt, cfg.nu, cfg.switch_c, cfg.switch_s,
                                cfg.sl_directions, cfg.degenerate);
                break;
        }
        const StopCheck sc = check_stop(state, next, cfg.eps, cfg.eps_front);
        res.trace.push_back({next.n, next.t, sc.residual, sc.front_size});
        state = std::move(next);
        if (snapshot) snapshot(state);
        if (sc.status == StopStatus::converged) {
            res.final = std::move(state);
            res.status = EvolveStatus::converged;
            return res;
        }
        if (sc.status == StopStatus::front_vanished) {
            res.final = std::move(state);
            res.status = EvolveStatus::front_vanished;
            return res;
        }
    }
    res.final = std::move(state);
    res.status = EvolveStatus::t_max_reached;
    return res;
}

}  // namespace rsa
