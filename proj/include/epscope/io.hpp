#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "epscope/epfind.hpp"
#include "epscope/model.hpp"
#include "epscope/monodromy.hpp"
#include "epscope/sweep.hpp"

namespace epscope {

struct SweepBlock {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::size_t steps = 0;
    bool with_vectors = false;
};

struct LocateBlock {
    bool closed_form = false;
    std::optional<SearchRegion> region;
};

struct EncircleBlock {
    LoopSpec loop;
};

/// One run of the tool: a model plus at most one block per command.
struct RunConfig {
    std::variant<TwoLevelParams, MatrixFamily> model;
    std::optional<SweepBlock> sweep;
    std::optional<LocateBlock> locate;
    std::optional<EncircleBlock> encircle;
    std::uint64_t seed = 0;

    MatrixFamily family() const;
    const TwoLevelParams* two_level() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

/// Named model presets (fig1-top, fig1-bottom, fig1-mu0, fig1-real-ep).
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

/// Trajectory CSV: header lambda,re_E1,im_E1,re_E2,im_E2,... one row per
/// accepted step, full double precision.
void write_trajectory_csv(const TrajectorySet& t, const std::string& path);
TrajectorySet read_trajectory_csv(const std::string& path);

std::string eps_to_json(const std::vector<EPLocation>& eps, const PairingReport& report);
std::string monodromy_to_json(const MonodromyResult& r);
std::string sweep_summary_to_json(const CrossingClass& c);

/// Command drivers shared by the CLI and the integration tests. Return the
/// process exit code: 0 success, 2 validation error, 3 numerical failure.
int cmd_sweep(const RunConfig& config, const std::string& out_dir, std::string& err);
int cmd_locate(const RunConfig& config, const std::string& out_dir, std::string& err);
int cmd_encircle(const RunConfig& config, const std::string& out_dir, std::string& err);

} // namespace epscope
