#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vineprune/camera.hpp"

namespace vineprune {

// The seven parent->child organ relationships the model builder runs, in
// execution order.
enum class ConnectionKind {
    MainCordonArm,
    MainCordonSpur,
    MainCordonCane,
    ArmSpur,
    ArmCane,
    SpurCane,
    CaneNode,
};
inline constexpr int kConnectionKindCount = 7;

const char* to_string(ConnectionKind kind);

// Connection-search parameters for one relationship.
struct ConnectionParams {
    int dilation_px = 3;
    int max_iter = 5;
    int n_slots = 4;
    bool include_top = true;

    friend bool operator==(const ConnectionParams&, const ConnectionParams&) = default;
};

enum class AdjacencyMetric { Max, Min };
enum class RootOriginSide { Left, Right };
enum class PassOrder { CordonFirst, SpecificFirst };

// Everything tunable about the pipeline. Defaults are plausible agronomic
// magnitudes for spur-pruned vines; real deployments override them from a
// flat key=value file (see docs/config.example.conf for the key list).
struct PipelineConfig {
    CameraIntrinsics intrinsics;

    // Pruning-region location sector angles, radians. alpha_i is accepted
    // and stored but the location classifier only consumes alpha_v and
    // alpha_d; the intermediate band is whatever the other two leave.
    double alpha_v = 1.5707963267948966;
    double alpha_i = 1.5707963267948966;
    double alpha_d = 1.5707963267948966;

    // Growth-direction slope thresholds (lateral, cross), dimensionless.
    double alpha_l = 0.578;
    double alpha_c = 0.578;

    double vigor_min_m = 0.006;
    double vigor_max_m = 0.014;

    double adjacency_min_m = 0.10;
    AdjacencyMetric adjacency_metric = AdjacencyMetric::Max;

    int spur_nodes_n = 2;
    double cut_offset_d_m = 0.02;

    int correction_max_radius_px = 24;
    int depth_median_window_px = 2;

    RootOriginSide root_origin_side = RootOriginSide::Left;
    PassOrder pass_order = PassOrder::CordonFirst;

    std::array<ConnectionParams, kConnectionKindCount> connections{};

    // Decision-table override, one rule string per entry; empty means the
    // built-in table (see cut_rules.hpp).
    std::vector<std::string> cut_rules;

    const ConnectionParams& connection(ConnectionKind kind) const {
        return connections[size_t(kind)];
    }
    ConnectionParams& connection(ConnectionKind kind) { return connections[size_t(kind)]; }

    // Enforce the documented ranges; throws ConfigError naming the field.
    void validate() const;
};

// Parse config text / file. Unknown keys are rejected; absent keys keep
// their defaults; the result is validated.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::string& path);

// Canonical one-line-per-key rendering of every setting, used for the run
// manifest hash; identical configs hash identically regardless of source
// file formatting.
std::string canonical_config(const PipelineConfig& config);
uint64_t config_hash(const PipelineConfig& config);

} // namespace vineprune
