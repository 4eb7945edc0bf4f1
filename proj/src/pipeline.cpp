#include "rsa/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rsa/errors.hpp"
#include "rsa/fits.hpp"

namespace rsa {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string normalize_key(std::string key) {
    for (char& c : key)
        if (c == '-') c = '_';
    return key;
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': bad real value '" + value + "'");
    }
}

long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': bad integer value '" + value + "'");
    }
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::fd1: return "fd1";
        case Scheme::fd2: return "fd2";
        case Scheme::sl1: return "sl1";
        default: return "sl2";
    }
}

std::string rescale_name(RescaleKind k) {
    switch (k) {
        case RescaleKind::none: return "none";
        case RescaleKind::r1: return "r1";
        case RescaleKind::r2: return "r2";
        default: return "r3";
    }
}

std::string filter_name(FilterKind k) {
    switch (k) {
        case FilterKind::none: return "none";
        case FilterKind::gaussian: return "gaussian";
        default: return "pm";
    }
}

void write_front_csv(const std::filesystem::path& path, const FrontState& state,
                     double eps_front) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write front CSV: " + path.string());
    out << "step,t,x,y\n";
    for (const auto& [i, j] : state.front_nodes(eps_front))
        out << state.n << "," << state.t << "," << state.v.x_of(j) << ","
            << state.v.y_of(i) << "\n";
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

std::string to_string(EvolveStatus s) {
    switch (s) {
        case EvolveStatus::converged: return "converged";
        case EvolveStatus::front_vanished: return "front_vanished";
        default: return "t_max_reached";
    }
}

void PipelineConfig::validate() const {
    if (input_fits.has_value() == phantom_spec.has_value())
        throw ConfigError("exactly one input source required: --input or --phantom");
    if (!(dx > 0.0)) throw ConfigError("dx must be positive");
    if (snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
    rescale.validate();
    levelset.validate();
    filter.validate(dx);
}

void apply_config_key(PipelineConfig& cfg, const std::string& raw_key,
                      const std::string& value) {
    const std::string key = normalize_key(raw_key);
    if (key == "input") cfg.input_fits = value;
    else if (key == "phantom") cfg.phantom_spec = value;
    else if (key == "dx") cfg.dx = parse_real(key, value);
    else if (key == "rescale") {
        if (value == "none") cfg.rescale.kind = RescaleKind::none;
        else if (value == "r1") cfg.rescale.kind = RescaleKind::r1;
        else if (value == "r2") cfg.rescale.kind = RescaleKind::r2;
        else if (value == "r3") cfg.rescale.kind = RescaleKind::r3;
        else throw ConfigError("rescale must be one of none/r1/r2/r3, got '" + value + "'");
    } else if (key == "alpha") {
        cfg.rescale.alpha = parse_real(key, value);
        if (!(cfg.rescale.alpha > 0.0 && cfg.rescale.alpha <= 1.0))
            throw ConfigError("alpha = " + value + " outside (0, 1]");
    } else if (key == "beta") {
        cfg.rescale.beta = static_cast<int>(parse_int(key, value));
        if (cfg.rescale.beta < 1) throw ConfigError("beta must be >= 1");
    } else if (key == "tau") {
        const double tau = parse_real(key, value);
        if (!(tau >= 0.0 && tau < 1.0)) throw ConfigError("tau = " + value + " outside [0, 1)");
        cfg.rescale.tau = tau;
    } else if (key == "filter") {
        if (value == "none") cfg.filter.kind = FilterKind::none;
        else if (value == "gaussian") cfg.filter.kind = FilterKind::gaussian;
        else if (value == "pm") cfg.filter.kind = FilterKind::perona_malik;
        else throw ConfigError("filter must be one of none/gaussian/pm, got '" + value + "'");
    } else if (key == "filter_iters") {
        cfg.filter.iterations = static_cast<int>(parse_int(key, value));
        if (cfg.filter.iterations < 0) throw ConfigError("filter_iters must be >= 0");
    } else if (key == "filter_dt") cfg.filter.dt = parse_real(key, value);
    else if (key == "mu") cfg.filter.mu = parse_real(key, value);
    else if (key == "pm_diffusivity") {
        if (value == "f1") cfg.filter.diffusivity = PmDiffusivity::f1;
        else if (value == "f2") cfg.filter.diffusivity = PmDiffusivity::f2;
        else throw ConfigError("pm_diffusivity must be f1 or f2, got '" + value + "'");
    } else if (key == "scheme") {
        if (value == "fd1") cfg.levelset.scheme = Scheme::fd1;
        else if (value == "fd2") cfg.levelset.scheme = Scheme::fd2;
        else if (value == "sl1") cfg.levelset.scheme = Scheme::sl1;
        else if (value == "sl2") cfg.levelset.scheme = Scheme::sl2;
        else throw ConfigError("scheme must be one of fd1/fd2/sl1/sl2, got '" + value + "'");
    } else if (key == "edge") {
        if (value == "g1") cfg.levelset.detector = EdgeDetector::g1;
        else if (value == "g2t") cfg.levelset.detector = EdgeDetector::g2tilde;
        else throw ConfigError("edge must be g1 or g2t, got '" + value + "'");
    } else if (key == "p") cfg.levelset.p = parse_real(key, value);
    else if (key == "c2") cfg.levelset.c2 = parse_real(key, value);
    else if (key == "nu") cfg.levelset.nu = parse_real(key, value);
    else if (key == "switch_c") cfg.levelset.switch_c = parse_real(key, value);
    else if (key == "switch_s") cfg.levelset.switch_s = parse_real(key, value);
    else if (key == "degenerate") {
        if (value == "centered") cfg.levelset.degenerate = DegenerateBranch::centered;
        else if (value == "literal") cfg.levelset.degenerate = DegenerateBranch::literal;
        else throw ConfigError("degenerate must be centered or literal, got '" + value + "'");
    } else if (key == "dt") cfg.levelset.dt = parse_real(key, value);
    else if (key == "eps") cfg.levelset.eps = parse_real(key, value);
    else if (key == "eps_front") cfg.levelset.eps_front = parse_real(key, value);
    else if (key == "tmax") cfg.levelset.t_max = parse_real(key, value);
    else if (key == "sl_directions") cfg.levelset.sl_directions = static_cast<int>(parse_int(key, value));
    else if (key == "order") {
        if (value == "rsa") cfg.order = PipelineOrder::rescale_then_filter;
        else if (value == "filter_first" || value == "filter-first")
            cfg.order = PipelineOrder::filter_then_rescale;
        else throw ConfigError("order must be rsa or filter-first, got '" + value + "'");
    } else if (key == "min_area") cfg.min_area = static_cast<std::size_t>(parse_int(key, value));
    else if (key == "snapshot_every") cfg.snapshot_every = parse_int(key, value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "save_input") cfg.save_input_fits = value;
    else throw ConfigError("unknown configuration key '" + raw_key + "'");
}

PipelineConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected key = value");
        auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        apply_config_key(cfg, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return cfg;
}

PipelineReport run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);

    RawImage original;
    if (cfg.input_fits) {
        if (!std::filesystem::exists(*cfg.input_fits))
            throw Error("input file not found: " + cfg.input_fits->string());
        original = read_fits_file(*cfg.input_fits);
    } else {
        PhantomSpec spec = parse_phantom_spec(*cfg.phantom_spec);
        if (cfg.seed) spec.seed = *cfg.seed;
        original = generate(spec).image;
    }
    if (original.rows < 3 || original.cols < 3)
        throw DomainError("input image must be at least 3x3");
    if (cfg.save_input_fits) write_fits_file(original, *cfg.save_input_fits);

    // Step 1: bring the physical values into [0, 1].
    const ScalarField normalized = minmax_normalize(original, cfg.dx);

    // Steps 2 and 3, in the configured order.
    double tau_used = 0.0;
    ScalarField rescaled(1, 1, 1.0);
    ScalarField filtered(1, 1, 1.0);
    if (cfg.order == PipelineOrder::rescale_then_filter) {
        rescaled = apply_rescale(normalized, cfg.rescale, &tau_used);
        filtered = run_filter(rescaled, cfg.filter);
    } else {
        const ScalarField pre = run_filter(normalized, cfg.filter);
        rescaled = apply_rescale(pre, cfg.rescale, &tau_used);
        filtered = rescaled;
    }

    // Step 4: front evolution driven by the edge detector.
    const double detector_param =
        cfg.levelset.detector == EdgeDetector::g1 ? cfg.levelset.p : cfg.levelset.c2;
    const EdgeField edge = build_edge_field(filtered, cfg.levelset.detector, detector_param);
    FrontState front0 = initial_front(original.rows, original.cols, cfg.dx);

    SnapshotFn snapshot;
    if (cfg.snapshot_every > 0) {
        const auto dir = cfg.out_dir;
        const double eps_front = cfg.levelset.eps_front;
        const long every = cfg.snapshot_every;
        snapshot = [dir, eps_front, every](const FrontState& st) {
            if (st.n % every != 0) return;
            char name[32];
            std::snprintf(name, sizeof(name), "front_%04ld.csv", st.n);
            write_front_csv(dir / name, st, eps_front);
        };
    }
    EvolveResult evo = evolve(std::move(front0), edge, cfg.levelset, snapshot);

    // Object extraction and catalog.
    const Mask mask = object_mask(evo.final);
    Labeling lab = label_components(mask, cfg.min_area, cfg.dx);
    compute_mean_intensities(lab, original);
    const ScalarField segmented = render_segmented(lab, cfg.dx);

    write_pgm(rescaled, cfg.out_dir / "rescaled.pgm");
    write_pgm(filtered, cfg.out_dir / "filtered.pgm");
    write_pgm(segmented, cfg.out_dir / "segmented.pgm");
    write_front_csv(cfg.out_dir / "front_final.csv", evo.final, cfg.levelset.eps_front);

    ordered_json catalog = ordered_json::array();
    for (const auto& rec : lab.catalog.objects) {
        catalog.push_back({{"label", rec.label},
                           {"area", rec.area},
                           {"centroid", {rec.centroid_x, rec.centroid_y}},
                           {"bbox", {rec.imin, rec.imax, rec.jmin, rec.jmax}},
                           {"mean_intensity", rec.mean_intensity}});
    }
    {
        std::ofstream out(cfg.out_dir / "catalog.json");
        out << catalog.dump(2) << "\n";
    }

    PipelineReport report;
    report.status = evo.status;
    report.t_final = evo.final.t;
    report.steps = evo.final.n;
    report.object_count = lab.catalog.objects.size();
    report.tau_used = tau_used;
    report.catalog = lab.catalog;
    report.exit_code = evo.status == EvolveStatus::t_max_reached ? 2 : 0;

    const double dt_eff = cfg.levelset.dt > 0.0
                              ? cfg.levelset.dt
                              : scheme_default_dt(cfg.levelset.scheme, cfg.dx);
    ordered_json params{
        {"input", cfg.input_fits ? cfg.input_fits->string() : ""},
        {"phantom", cfg.phantom_spec ? cfg.phantom_spec->string() : ""},
        {"dx", cfg.dx},
        {"rescale", rescale_name(cfg.rescale.kind)},
        {"alpha", cfg.rescale.alpha},
        {"beta", cfg.rescale.beta},
        {"tau", tau_used},
        {"filter", filter_name(cfg.filter.kind)},
        {"filter_iters", cfg.filter.iterations},
        {"filter_dt", cfg.filter.dt},
        {"mu", cfg.filter.mu},
        {"pm_diffusivity", cfg.filter.diffusivity == PmDiffusivity::f1 ? "f1" : "f2"},
        {"scheme", scheme_name(cfg.levelset.scheme)},
        {"edge", cfg.levelset.detector == EdgeDetector::g1 ? "g1" : "g2t"},
        {"p", cfg.levelset.p},
        {"c2", cfg.levelset.c2},
        {"nu", cfg.levelset.nu},
        {"dt", dt_eff},
        {"switch_c", cfg.levelset.switch_c},
        {"switch_s", cfg.levelset.switch_s},
        {"degenerate",
         cfg.levelset.degenerate == DegenerateBranch::centered ? "centered" : "literal"},
        {"eps", cfg.levelset.eps},
        {"eps_front", cfg.levelset.eps_front},
        {"tmax", cfg.levelset.t_max},
        {"sl_directions", cfg.levelset.sl_directions},
        {"order",
         cfg.order == PipelineOrder::rescale_then_filter ? "rsa" : "filter-first"},
        {"min_area", cfg.min_area},
        {"snapshot_every", cfg.snapshot_every},
        {"seed", cfg.seed ? ordered_json(*cfg.seed) : ordered_json(nullptr)},
        {"out", cfg.out_dir.string()}};

    ordered_json rep{{"timestamp", iso_timestamp()},
                     {"status", to_string(evo.status)},
                     {"t_final", report.t_final},
                     {"steps", report.steps},
                     {"object_count", report.object_count},
                     {"parameters", params}};
    {
        std::ofstream out(cfg.out_dir / "report.json");
        out << rep.dump(2) << "\n";
    }
    return report;
}

}  // namespace rsa
