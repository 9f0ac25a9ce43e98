#include "bpsgcn/data.hpp"

#include "bpsgcn/errors.hpp"
#include "bpsgcn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace bpsgcn {

namespace {

Scene finalize_scene(std::map<long long, std::vector<std::pair<long, Vec2>>>& by_agent,
                     SceneUnit unit, double frame_rate) {
    Scene scene;
    scene.unit = unit;
    scene.frame_rate = frame_rate;
    for (auto& [id, frames] : by_agent) {
        std::sort(frames.begin(), frames.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 1; i < frames.size(); ++i)
            if (frames[i].first == frames[i - 1].first)
                throw ParseError("duplicate frame " + std::to_string(frames[i].first) +
                                 " for agent " + std::to_string(id));
        if (frames.size() < 2) continue; // a velocity needs a predecessor
        AgentTrack t;
        t.agent_id = id;
        t.frames = std::move(frames);
        scene.tracks.push_back(std::move(t));
    }
    return scene;
}

} // namespace

Scene load_ethucy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StateError("cannot open dataset file: " + path);
    std::map<long long, std::vector<std::pair<long, Vec2>>> by_agent;
    std::string line;
    long lineno = 0;
    long rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        double frame, agent, x, y;
        if (!(ls >> frame >> agent >> x >> y))
            throw ParseError("expected `frame_id agent_id x y`", lineno);
        std::string extra;
        if (ls >> extra) throw ParseError("trailing fields", lineno);
        by_agent[static_cast<long long>(agent)].emplace_back(static_cast<long>(frame),
                                                             Vec2(x, y));
        ++rows;
    }
    if (rows == 0) throw ParseError("empty scene: " + path);
    return finalize_scene(by_agent, SceneUnit::meters, 2.5);
}

void write_ethucy(const Scene& scene, const std::string& path, int precision) {
    struct Row {
        long frame;
        long long agent;
        Vec2 p;
    };
    std::vector<Row> rows;
    for (const auto& t : scene.tracks)
        for (const auto& [frame, p] : t.frames) rows.push_back({frame, t.agent_id, p});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.frame, a.agent) < std::tie(b.frame, b.agent);
    });
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw StateError("cannot write dataset file: " + path);
    out.setf(std::ios::fixed);
    out.precision(precision);
    for (const Row& r : rows)
        out << r.frame << " " << r.agent << " " << r.p.x() << " " << r.p.y() << "\n";
}

Scene load_sdd(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StateError("cannot open dataset file: " + path);
    std::map<long long, std::vector<std::pair<long, Vec2>>> by_agent;
    std::map<long long, std::string> classes;
    std::string line;
    long lineno = 0;
    long rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        long long track;
        double xmin, ymin, xmax, ymax;
        long frame;
        int lost, occluded, generated;
        if (!(ls >> track >> xmin >> ymin >> xmax >> ymax >> frame >> lost >> occluded >>
              generated))
            throw ParseError("expected 10-column SDD annotation row", lineno);
        std::string label;
        std::getline(ls, label);
        // strip whitespace and optional quotes from the class string
        const auto b = label.find_first_not_of(" \t\"");
        const auto e = label.find_last_not_of(" \t\r\"");
        label = b == std::string::npos ? "" : label.substr(b, e - b + 1);
        ++rows;
        if (lost) continue;
        by_agent[track].emplace_back(frame, Vec2(0.5 * (xmin + xmax), 0.5 * (ymin + ymax)));
        if (!label.empty()) classes[track] = label;
    }
    if (rows == 0) throw ParseError("empty scene: " + path);
    Scene scene = finalize_scene(by_agent, SceneUnit::pixels, 30.0);
    for (const auto& t : scene.tracks) {
        auto it = classes.find(t.agent_id);
        if (it != classes.end()) scene.class_names[t.agent_id] = it->second;
    }
    return scene;
}

std::vector<Window> make_windows(const Scene& scene, int t_obs, int t_fut, int stride) {
    if (t_obs < 2) throw ArgumentError("make_windows: t_obs must be >= 2");
    if (t_fut < 1) throw ArgumentError("make_windows: t_fut must be >= 1");
    if (stride < 1) throw ArgumentError("make_windows: stride must be >= 1");

    std::set<long> frame_set;
    for (const auto& t : scene.tracks)
        for (const auto& [frame, p] : t.frames) frame_set.insert(frame);
    const std::vector<long> timeline(frame_set.begin(), frame_set.end());
    const int span = t_obs + t_fut;

    // per-agent frame -> position lookup
    std::vector<std::map<long, Vec2>> lookup(scene.tracks.size());
    for (std::size_t a = 0; a < scene.tracks.size(); ++a)
        for (const auto& [frame, p] : scene.tracks[a].frames) lookup[a][frame] = p;

    std::vector<Window> windows;
    for (std::size_t start = 0; start + span <= timeline.size(); start += stride) {
        Window w;
        for (std::size_t a = 0; a < scene.tracks.size(); ++a) {
            std::vector<Vec2> obs, fut;
            bool complete = true;
            for (int s = 0; s < span && complete; ++s) {
                auto it = lookup[a].find(timeline[start + s]);
                if (it == lookup[a].end()) {
                    complete = false;
                    break;
                }
                (s < t_obs ? obs : fut).push_back(it->second);
            }
            if (!complete) continue;
            w.agent_ids.push_back(scene.tracks[a].agent_id);
            w.observed.push_back(std::move(obs));
            w.future.push_back(std::move(fut));
        }
        if (w.agent_count() > 0) windows.push_back(std::move(w));
    }
    return windows;
}

std::pair<Scene, std::vector<int>> gen_synthetic(const std::vector<BehaviorModeSpec>& modes,
                                                 int n_agents, unsigned long long seed,
                                                 int n_frames) {
    if (n_agents < 1) throw ArgumentError("gen_synthetic: n_agents must be >= 1");
    if (modes.empty()) throw ArgumentError("gen_synthetic: at least one mode");
    if (n_frames < 2) throw ArgumentError("gen_synthetic: n_frames must be >= 2");

    Rng rng(seed);
    Scene scene;
    scene.unit = SceneUnit::meters;
    std::vector<int> labels;
    long long next_id = 0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const BehaviorModeSpec& mode = modes[m];
        for (int a = 0; a < n_agents; ++a) {
            const double speed = rng.uniform(mode.speed_min, mode.speed_max);
            const double turn = rng.uniform(mode.turn_min, mode.turn_max);
            double heading = rng.uniform(0.0, 6.283185307179586);
            Vec2 pos(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0));
            AgentTrack track;
            track.agent_id = next_id++;
            track.frames.emplace_back(0, pos);
            for (int f = 1; f < n_frames; ++f) {
                Vec2 v(speed * std::cos(heading), speed * std::sin(heading));
                if (mode.noise > 0.0) {
                    v.x() += mode.noise * rng.normal();
                    v.y() += mode.noise * rng.normal();
                }
                pos += v;
                heading += turn;
                track.frames.emplace_back(f, pos);
            }
            scene.tracks.push_back(std::move(track));
            labels.push_back(static_cast<int>(m));
        }
    }
    return {std::move(scene), std::move(labels)};
}

SplitManifest load_split_manifest(const std::string& path) {
    const KvConfig cfg = KvConfig::parse_file(path);
    SplitManifest m;
    m.train = cfg.get_all("train");
    m.val = cfg.get_all("val");
    m.test = cfg.get_all("test");
    m.format = cfg.get_or("format", "ethucy");
    if (m.format != "ethucy" && m.format != "sdd")
        throw ArgumentError("split manifest: unknown format " + m.format);
    return m;
}

namespace {
constexpr char kCacheMagic[8] = {'B', 'P', 'W', 'C', '0', '0', '0', '1'};

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
template <typename T>
T take(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
} // namespace

void save_window_cache(const std::string& path, const std::vector<Window>& windows, int t_obs,
                       int t_fut) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StateError("cannot write window cache: " + path);
    out.write(kCacheMagic, sizeof(kCacheMagic));
    put<std::uint32_t>(out, 1); // format version
    put<std::int32_t>(out, t_obs);
    put<std::int32_t>(out, t_fut);
    put<std::uint64_t>(out, windows.size());
    for (const Window& w : windows) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(w.agent_count()));
        for (long long id : w.agent_ids) put<std::int64_t>(out, id);
        for (const auto& track : w.observed)
            for (const Vec2& p : track) {
                put<double>(out, p.x());
                put<double>(out, p.y());
            }
        for (const auto& track : w.future)
            for (const Vec2& p : track) {
                put<double>(out, p.x());
                put<double>(out, p.y());
            }
    }
    if (!out) throw StateError("short write on window cache: " + path);
}

std::vector<Window> load_window_cache(const std::string& path, int* t_obs_out, int* t_fut_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StateError("cannot open window cache: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCacheMagic, sizeof(kCacheMagic)) != 0)
        throw ParseError("bad window cache magic in " + path);
    if (take<std::uint32_t>(in) != 1) throw ParseError("unsupported window cache version");
    const int t_obs = take<std::int32_t>(in);
    const int t_fut = take<std::int32_t>(in);
    const std::uint64_t count = take<std::uint64_t>(in);
    std::vector<Window> windows;
    windows.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Window w;
        const std::uint32_t n = take<std::uint32_t>(in);
        w.agent_ids.resize(n);
        for (std::uint32_t a = 0; a < n; ++a) w.agent_ids[a] = take<std::int64_t>(in);
        w.observed.assign(n, std::vector<Vec2>(t_obs));
        w.future.assign(n, std::vector<Vec2>(t_fut));
        for (std::uint32_t a = 0; a < n; ++a)
            for (int s = 0; s < t_obs; ++s) {
                const double x = take<double>(in);
                const double y = take<double>(in);
                w.observed[a][s] = Vec2(x, y);
            }
        for (std::uint32_t a = 0; a < n; ++a)
            for (int s = 0; s < t_fut; ++s) {
                const double x = take<double>(in);
                const double y = take<double>(in);
                w.future[a][s] = Vec2(x, y);
            }
        if (!in) throw ParseError("truncated window cache: " + path);
        windows.push_back(std::move(w));
    }
    if (t_obs_out) *t_obs_out = t_obs;
    if (t_fut_out) *t_fut_out = t_fut;
    return windows;
}

} // namespace bpsgcn
