#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "rsa/extraction.hpp"
#include "rsa/filtering.hpp"
#include "rsa/levelset.hpp"
#include "rsa/phantom.hpp"
#include "rsa/rescale.hpp"

namespace rsa {

enum class PipelineOrder { rescale_then_filter, filter_then_rescale };

struct PipelineConfig {
    std::optional<std::filesystem::path> input_fits;
    std::optional<std::filesystem::path> phantom_spec;
    double dx = 0.1;
    RescaleSpec rescale;
    FilterSpec filter;
    LevelSetConfig levelset;
    PipelineOrder order = PipelineOrder::rescale_then_filter;
    std::filesystem::path out_dir = "out";
    long snapshot_every = 0;            // 0 disables front snapshots
    std::size_t min_area = 3;
    std::optional<std::uint64_t> seed;  // overrides the phantom spec seed
    std::optional<std::filesystem::path> save_input_fits;

    void validate() const;
};

struct PipelineReport {
    EvolveStatus status = EvolveStatus::t_max_reached;
    double t_final = 0.0;
    long steps = 0;
    std::size_t object_count = 0;
    double tau_used = 0.0;
    SegmentCatalog catalog;
    int exit_code = 0;
};

/// Runs the full segmentation pipeline and writes rescaled.pgm,
/// filtered.pgm, segmented.pgm, catalog.json, front_final.csv, optional
/// front_NNNN.csv snapshots, and report.json into the output directory.
PipelineReport run_pipeline(const PipelineConfig& cfg);

/// Applies one "key = value" setting; throws ConfigError on unknown keys
/// or out-of-range values. Shared by the config file reader and the CLI.
void apply_config_key(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Flat key=value file, # comments. Settings applied on top of defaults.
PipelineConfig parse_config_file(const std::filesystem::path& path);

std::string to_string(EvolveStatus s);

}  // namespace rsa
