#include "rsa/phantom.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rsa/errors.hpp"

namespace rsa {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream per pixel index.
std::uint64_t pixel_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (index * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL);
    splitmix64(s);
    splitmix64(s);
    return s;
}

double uniform01(std::uint64_t& s) {
    return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}

double standard_normal(std::uint64_t& s) {
    double u1 = uniform01(s);
    const double u2 = uniform01(s);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t poisson_sample(std::uint64_t& s, double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda > 30.0) {
        const double v = lambda + std::sqrt(lambda) * standard_normal(s);
        return v > 0.0 ? static_cast<std::uint64_t>(std::llround(v)) : 0;
    }
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(s);
    } while (p > limit);
    return k - 1;
}

}  // namespace

void PhantomSpec::validate() const {
    if (rows < 3 || cols < 3) throw DomainError("phantom grid must be at least 3x3");
    for (const auto& src : sources) {
        if (!(src.radius > 0.0)) throw DomainError("phantom source radius must be positive");
        if (!(src.amplitude > 0.0))
            throw DomainError("phantom source amplitude must be positive");
    }
    if (noise != NoiseKind::none && !(noise_param > 0.0))
        throw DomainError("noise parameter must be positive");
}

Phantom generate(const PhantomSpec& spec) {
    spec.validate();
    Phantom out;
    out.image.rows = spec.rows;
    out.image.cols = spec.cols;
    out.image.header.naxis1 = static_cast<long>(spec.cols);
    out.image.header.naxis2 = static_cast<long>(spec.rows);
    out.image.values.assign(spec.rows * spec.cols, spec.background);
    out.truth_masks.assign(spec.sources.size(), Mask(spec.rows, spec.cols));

    const double iso = std::exp(-2.0);  // 2-sigma isophote level, relative to amplitude
    for (std::size_t i = 0; i < spec.rows; ++i) {
        for (std::size_t j = 0; j < spec.cols; ++j) {
            const std::size_t k = i * spec.cols + j;
            for (std::size_t si = 0; si < spec.sources.size(); ++si) {
                const auto& src = spec.sources[si];
                const double dxp = static_cast<double>(j) - src.cx;
                const double dyp = static_cast<double>(i) - src.cy;
                const double d2 = dxp * dxp + dyp * dyp;
                const double contrib =
                    src.amplitude * std::exp(-d2 / (2.0 * src.radius * src.radius));
                out.image.values[k] += contrib;
                if (contrib >= src.amplitude * iso) out.truth_masks[si].m[k] = 1;
            }
        }
    }

    if (spec.noise != NoiseKind::none) {
        for (std::size_t k = 0; k < out.image.values.size(); ++k) {
            std::uint64_t s = pixel_stream(spec.seed, k);
            if (spec.noise == NoiseKind::gaussian) {
                out.image.values[k] += spec.noise_param * standard_normal(s);
            } else {
                const double lambda = std::max(out.image.values[k], 0.0) * spec.noise_param;
                out.image.values[k] =
                    static_cast<double>(poisson_sample(s, lambda)) / spec.noise_param;
            }
        }
    }
    return out;
}

double iou(const Mask& a, const Mask& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw DomainError("iou: shape mismatch");
    std::size_t inter = 0, uni = 0;
    for (std::size_t k = 0; k < a.m.size(); ++k) {
        const bool pa = a.m[k] != 0, pb = b.m[k] != 0;
        inter += (pa && pb) ? 1 : 0;
        uni += (pa || pb) ? 1 : 0;
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

PhantomSpec parse_phantom_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open phantom spec: " + path.string());
    PhantomSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected key = value");
        auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        std::istringstream vs(value);
        try {
            if (key == "rows") spec.rows = std::stoul(value);
            else if (key == "cols") spec.cols = std::stoul(value);
            else if (key == "background") spec.background = std::stod(value);
            else if (key == "seed") spec.seed = std::stoull(value);
            else if (key == "noise") {
                std::string kind;
                vs >> kind;
                if (kind == "none") spec.noise = NoiseKind::none;
                else if (kind == "gaussian") { spec.noise = NoiseKind::gaussian; vs >> spec.noise_param; }
                else if (kind == "poisson") { spec.noise = NoiseKind::poisson; vs >> spec.noise_param; }
                else throw ConfigError("unknown noise kind '" + kind + "'");
                if (vs.fail()) throw ConfigError("noise '" + kind + "' needs a parameter");
            } else if (key == "source") {
                PhantomSource src;
                vs >> src.cx >> src.cy >> src.amplitude >> src.radius;
                if (vs.fail())
                    throw ConfigError("source needs 'cx cy amplitude radius'");
                spec.sources.push_back(src);
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": bad value for '" + key + "'");
        }
    }
    return spec;
}

}  // namespace rsa
