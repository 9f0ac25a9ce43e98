#pragma once

#include "bpsgcn/kvconfig.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace bpsgcn {

using Vec2 = Eigen::Vector2d;

/// One agent's frame-indexed 2-D positions. Frame indices are strictly
/// increasing and a track has at least 2 frames (a velocity needs a
/// predecessor).
struct AgentTrack {
    long long agent_id = 0;
    std::vector<std::pair<long, Vec2>> frames;
};

enum class SceneUnit { meters, pixels };

struct Scene {
    std::vector<AgentTrack> tracks; // sorted by agent_id
    double frame_rate = 2.5;
    SceneUnit unit = SceneUnit::meters;
    /// SDD class strings, metadata only; never fed to the model.
    std::map<long long, std::string> class_names;
};

/// One observation/prediction unit: every listed agent is present at all
/// t_obs + t_fut steps.
struct Window {
    std::vector<long long> agent_ids;
    /// [agent][step], size t_obs per agent.
    std::vector<std::vector<Vec2>> observed;
    /// [agent][step], size t_fut per agent.
    std::vector<std::vector<Vec2>> future;

    int agent_count() const { return static_cast<int>(agent_ids.size()); }
    int t_obs() const { return observed.empty() ? 0 : static_cast<int>(observed[0].size()); }
    int t_fut() const { return future.empty() ? 0 : static_cast<int>(future[0].size()); }
};

/// Whitespace-separated `frame_id agent_id x y` rows.
Scene load_ethucy(const std::string& path);

/// Writes a scene in the same row format with fixed decimal precision.
/// Rows are ordered by (frame, agent_id). Reloading reproduces the tracks
/// exactly as decimal text.
void write_ethucy(const Scene& scene, const std::string& path, int precision = 6);

/// SDD annotation rows: track xmin ymin xmax ymax frame lost occluded
/// generated "label". Position is the bounding-box center; lost rows are
/// dropped; the class string is kept as metadata only.
Scene load_sdd(const std::string& path);

/// Sliding windows over the scene's frame timeline. Agents missing any step
/// of a window are excluded from it; empty windows are dropped.
std::vector<Window> make_windows(const Scene& scene, int t_obs, int t_fut, int stride);

/// One synthetic behavior family: per-agent speed and turn rate are drawn
/// uniformly from the ranges, and per-step velocity noise is isotropic
/// Gaussian with the given scale.
struct BehaviorModeSpec {
    std::string name;
    double speed_min = 1.0, speed_max = 1.0;
    double turn_min = 0.0, turn_max = 0.0; // radians per step
    double noise = 0.0;                    // velocity noise scale, scene units per step
};

/// Deterministic multi-behavior scene: n_agents per mode, n_frames steps,
/// all agents co-present. Returns the generator's mode index per agent,
/// aligned with Scene::tracks order.
std::pair<Scene, std::vector<int>> gen_synthetic(const std::vector<BehaviorModeSpec>& modes,
                                                 int n_agents, unsigned long long seed,
                                                 int n_frames = 20);

/// Split manifest: repeated `train|val|test = <path>` keys plus an optional
/// `format = ethucy|sdd` (default ethucy).
struct SplitManifest {
    std::vector<std::string> train, val, test;
    std::string format = "ethucy";
};

SplitManifest load_split_manifest(const std::string& path);

/// Binary window cache with a version header; byte-deterministic for equal
/// inputs.
void save_window_cache(const std::string& path, const std::vector<Window>& windows, int t_obs,
                       int t_fut);
std::vector<Window> load_window_cache(const std::string& path, int* t_obs = nullptr,
                                      int* t_fut = nullptr);

} // namespace bpsgcn
