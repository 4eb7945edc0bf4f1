#include "rsa/rescale.hpp"

#include <array>
#include <cmath>
#include <string>

#include "rsa/errors.hpp"

namespace rsa {

namespace {

void check_unit_interval(double x, const char* fn) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError(std::string(fn) + ": argument " + std::to_string(x) +
                          " outside [0, 1]");
}

constexpr int kBins = 256;

int bin_of(double v) {
    int b = static_cast<int>(v * kBins);
    if (b < 0) b = 0;
    if (b >= kBins) b = kBins - 1;
    return b;
}

}  // namespace

void RescaleSpec::validate() const {
    if (kind == RescaleKind::r1 || kind == RescaleKind::r2) {
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw DomainError("alpha = " + std::to_string(alpha) + " outside (0, 1]");
    }
    if (kind == RescaleKind::r3) {
        if (beta < 1) throw DomainError("beta = " + std::to_string(beta) + " must be >= 1");
        if (tau && !(*tau >= 0.0 && *tau < 1.0))
            throw DomainError("tau = " + std::to_string(*tau) + " outside [0, 1)");
    }
}

ScalarField minmax_normalize(const RawImage& img, double dx) {
    const double m0 = img.min_value();
    const double M0 = img.max_value();
    if (!(M0 > m0))
        throw ConstantImage("minmax_normalize: image is constant (value " +
                            std::to_string(m0) + ")");
    ScalarField out(img.rows, img.cols, dx);
    const double span = M0 - m0;
    for (std::size_t k = 0; k < img.values.size(); ++k)
        out.values()[k] = (img.values[k] - m0) / span;
    return out;
}

double r1(double x, double alpha) {
    check_unit_interval(x, "r1");
    return std::pow(x, alpha);
}

double r2(double x, double alpha) {
    check_unit_interval(x, "r2");
    return std::pow(std::log(x + 1.0) / std::log(2.0), alpha);
}

double r3(double x, int beta, double tau) {
    check_unit_interval(x, "r3");
    const double b = static_cast<double>(beta);
    if (tau <= 0.0) {
        // Degenerate threshold: the lower branch is empty and the upper
        // branch reduces to x^(1/beta).
        return std::pow(x, 1.0 / b);
    }
    if (x < tau) return std::pow(x, b) / std::pow(tau, b - 1.0);
    return std::pow(x - tau, 1.0 / b) / std::pow(1.0 - tau, 1.0 / b - 1.0) + tau;
}

double otsu_threshold(const ScalarField& f) {
    std::array<std::size_t, kBins> count{};
    std::array<double, kBins> vsum{};
    for (double v : f.values()) {
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError("otsu_threshold: value " + std::to_string(v) +
                              " outside [0, 1]");
        const int b = bin_of(v);
        count[b] += 1;
        vsum[b] += v;
    }

    const double total = static_cast<double>(f.size());
    const double total_sum = f.sum();

    double best_var = -1.0;
    int best_k = -1;
    std::size_t n0 = 0;
    double s0 = 0.0;
    for (int k = 1; k < kBins; ++k) {
        n0 += count[k - 1];
        s0 += vsum[k - 1];
        const std::size_t n1 = f.size() - n0;
        if (n0 == 0 || n1 == 0) continue;
        const double w0 = static_cast<double>(n0) / total;
        const double w1 = static_cast<double>(n1) / total;
        const double mu0 = s0 / static_cast<double>(n0);
        const double mu1 = (total_sum - s0) / static_cast<double>(n1);
        const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_k = k;
        }
    }
    if (best_k < 0)
        throw ConstantImage("otsu_threshold: all values fall into one histogram bin");
    return static_cast<double>(best_k) / kBins;
}

ScalarField apply_rescale(const ScalarField& f, const RescaleSpec& spec, double* tau_used) {
    spec.validate();
    if (tau_used) *tau_used = 0.0;
    ScalarField out = f;
    switch (spec.kind) {
        case RescaleKind::none:
            break;
        case RescaleKind::r1:
            for (double& v : out.values()) v = r1(v, spec.alpha);
            break;
        case RescaleKind::r2:
            for (double& v : out.values()) v = r2(v, spec.alpha);
            break;
        case RescaleKind::r3: {
            const double tau = spec.tau ? *spec.tau : otsu_threshold(f);
            if (tau_used) *tau_used = tau;
            for (double& v : out.values()) v = r3(v, spec.beta, tau);
            break;
        }
    }
    return out;
}

}  // namespace rsa
