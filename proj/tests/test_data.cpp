#include "bpsgcn/data.hpp"

#include "bpsgcn/errors.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace bpsgcn;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::trunc);
    out << content;
    return path;
}

} // namespace

TEST_CASE("load_ethucy: basic parse, grouping, sorting") {
    const std::string path = write_temp("ethucy_ok.txt", "0 1 0.0 0.0\n"
                                                         "10 1 1.0 0.0\n");
    Scene s = load_ethucy(path);
    REQUIRE(s.tracks.size() == 1);
    CHECK(s.tracks[0].agent_id == 1);
    REQUIRE(s.tracks[0].frames.size() == 2);
    CHECK(s.tracks[0].frames[1].second.x() == doctest::Approx(1.0));
    std::remove(path.c_str());
}

TEST_CASE("load_ethucy: interleaved agents are grouped and frame-sorted") {
    const std::string path = write_temp("ethucy_interleave.txt", "20 2 5 5\n"
                                                                 "0 1 0 0\n"
                                                                 "10 2 4 4\n"
                                                                 "10 1 1 0\n");
    Scene s = load_ethucy(path);
    REQUIRE(s.tracks.size() == 2);
    CHECK(s.tracks[0].agent_id == 1);
    CHECK(s.tracks[1].agent_id == 2);
    CHECK(s.tracks[1].frames[0].first == 10);
    CHECK(s.tracks[1].frames[1].first == 20);
    std::remove(path.c_str());
}

TEST_CASE("load_ethucy: malformed row reports the line") {
    const std::string path = write_temp("ethucy_bad.txt", "a b c\n");
    try {
        load_ethucy(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
    std::remove(path.c_str());
}

TEST_CASE("load_ethucy: empty file is an error") {
    const std::string path = write_temp("ethucy_empty.txt", "");
    CHECK_THROWS_AS(load_ethucy(path), ParseError);
    std::remove(path.c_str());
}

TEST_CASE("ethucy round-trip is text-exact") {
    const std::string path = write_temp("ethucy_rt.txt", "0 1 0.123456 7.5\n"
                                                         "10 1 1.0 0.25\n"
                                                         "0 2 -3.25 2.0\n"
                                                         "10 2 -4.5 2.125\n");
    Scene s1 = load_ethucy(path);
    const std::string out1 = (std::filesystem::temp_directory_path() / "rt1.txt").string();
    const std::string out2 = (std::filesystem::temp_directory_path() / "rt2.txt").string();
    write_ethucy(s1, out1);
    Scene s2 = load_ethucy(out1);
    write_ethucy(s2, out2);
    std::ifstream f1(out1), f2(out2);
    std::stringstream b1, b2;
    b1 << f1.rdbuf();
    b2 << f2.rdbuf();
    CHECK(b1.str() == b2.str());
    REQUIRE(s2.tracks.size() == s1.tracks.size());
    for (std::size_t i = 0; i < s1.tracks.size(); ++i) {
        REQUIRE(s2.tracks[i].frames.size() == s1.tracks[i].frames.size());
        for (std::size_t j = 0; j < s1.tracks[i].frames.size(); ++j)
            CHECK(s2.tracks[i].frames[j].second == s1.tracks[i].frames[j].second);
    }
    std::remove(path.c_str());
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("load_sdd: bbox center, lost filter, class metadata") {
    const std::string path = write_temp("sdd.txt",
                                        "1 0 0 2 2 0 0 0 0 \"Biker\"\n"
                                        "1 1 1 3 3 1 0 0 0 \"Biker\"\n"
                                        "2 0 0 2 2 0 1 0 0 \"Pedestrian\"\n" // lost
                                        "3 4 4 6 6 0 0 0 0 \"Cart\"\n"
                                        "3 5 5 7 7 1 0 0 0 \"Cart\"\n");
    Scene s = load_sdd(path);
    REQUIRE(s.tracks.size() == 2); // agent 2 entirely lost, agent 3 kept
    CHECK(s.tracks[0].agent_id == 1);
    CHECK(s.tracks[0].frames[0].second == Vec2(1, 1));
    CHECK(s.unit == SceneUnit::pixels);
    CHECK(s.class_names.at(1) == "Biker");
    CHECK(s.class_names.at(3) == "Cart");
    CHECK(s.class_names.count(2) == 0);
    std::remove(path.c_str());
}

TEST_CASE("make_windows: exact count on a 20-frame track") {
    std::vector<BehaviorModeSpec> modes{{"straight", 1, 1, 0, 0, 0}};
    auto [scene, labels] = gen_synthetic(modes, 1, 42, 20);
    auto windows = make_windows(scene, 8, 12, 1);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].agent_count() == 1);
    CHECK(windows[0].t_obs() == 8);
    CHECK(windows[0].t_fut() == 12);
}

TEST_CASE("make_windows: agents with gaps are excluded") {
    Scene scene;
    AgentTrack full;
    full.agent_id = 1;
    for (int f = 0; f < 20; ++f) full.frames.emplace_back(f, Vec2(f, 0));
    AgentTrack partial;
    partial.agent_id = 2;
    for (int f = 0; f < 10; ++f) partial.frames.emplace_back(f, Vec2(f, 1));
    scene.tracks = {full, partial};
    auto windows = make_windows(scene, 8, 12, 1);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].agent_ids == std::vector<long long>{1});
}

TEST_CASE("make_windows: stride 20 on a 40-frame track gives 2 windows") {
    Scene scene;
    AgentTrack t;
    t.agent_id = 7;
    for (int f = 0; f < 40; ++f) t.frames.emplace_back(f, Vec2(f, f));
    scene.tracks = {t};
    auto windows = make_windows(scene, 8, 12, 20);
    CHECK(windows.size() == 2);
}

TEST_CASE("make_windows: validates arguments") {
    Scene scene;
    CHECK_THROWS_AS(make_windows(scene, 1, 12, 1), ArgumentError);
    CHECK_THROWS_AS(make_windows(scene, 8, 0, 1), ArgumentError);
}

TEST_CASE("gen_synthetic: determinism, labels, degenerate mode") {
    std::vector<BehaviorModeSpec> modes{{"slow", 0.2, 0.5, -0.05, 0.05, 0.02},
                                        {"fast", 1.5, 2.5, 0, 0, 0.01},
                                        {"curved", 0.8, 1.2, 0.15, 0.25, 0.02}};
    auto [s1, l1] = gen_synthetic(modes, 50, 7, 20);
    auto [s2, l2] = gen_synthetic(modes, 50, 7, 20);
    CHECK(l1.size() == 150);
    CHECK(l1 == l2);
    REQUIRE(s1.tracks.size() == s2.tracks.size());
    for (std::size_t i = 0; i < s1.tracks.size(); ++i)
        for (std::size_t f = 0; f < s1.tracks[i].frames.size(); ++f)
            CHECK(s1.tracks[i].frames[f].second == s2.tracks[i].frames[f].second);

    // zero noise, zero turn -> perfectly straight constant-speed steps
    std::vector<BehaviorModeSpec> straight{{"s", 1.0, 1.0, 0, 0, 0}};
    auto [s3, l3] = gen_synthetic(straight, 1, 3, 10);
    const auto& fr = s3.tracks[0].frames;
    const Vec2 step = fr[1].second - fr[0].second;
    for (std::size_t f = 1; f < fr.size(); ++f) {
        const Vec2 d = fr[f].second - fr[f - 1].second;
        CHECK((d - step).norm() < 1e-12);
    }
    CHECK(step.norm() == doctest::Approx(1.0));

    CHECK_THROWS_AS(gen_synthetic(straight, 0, 1, 10), ArgumentError);
}

TEST_CASE("window cache round-trips") {
    std::vector<BehaviorModeSpec> modes{{"m", 1, 1, 0, 0.1, 0.05}};
    auto [scene, labels] = gen_synthetic(modes, 4, 11, 25);
    auto windows = make_windows(scene, 8, 12, 2);
    REQUIRE(!windows.empty());
    const std::string path =
        (std::filesystem::temp_directory_path() / "bpsgcn_cache.bin").string();
    save_window_cache(path, windows, 8, 12);
    int t_obs = 0, t_fut = 0;
    auto loaded = load_window_cache(path, &t_obs, &t_fut);
    CHECK(t_obs == 8);
    CHECK(t_fut == 12);
    REQUIRE(loaded.size() == windows.size());
    for (std::size_t w = 0; w < windows.size(); ++w) {
        CHECK(loaded[w].agent_ids == windows[w].agent_ids);
        for (int a = 0; a < windows[w].agent_count(); ++a)
            for (int s = 0; s < 8; ++s)
                CHECK(loaded[w].observed[a][s] == windows[w].observed[a][s]);
    }
    std::remove(path.c_str());
}

TEST_CASE("split manifest parsing") {
    const std::string path = write_temp("split.cfg", "format = ethucy\n"
                                                     "train = a.txt\n"
                                                     "train = b.txt\n"
                                                     "val = c.txt\n"
                                                     "test = d.txt\n");
    SplitManifest m = load_split_manifest(path);
    CHECK(m.train.size() == 2);
    CHECK(m.val.size() == 1);
    CHECK(m.test.size() == 1);
    CHECK(m.format == "ethucy");
    std::remove(path.c_str());
}
