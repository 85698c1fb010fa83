// Copyright 2026 The augsurf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace augsurf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("augsurf_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }

    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }

    std::string operator/(const std::string& f) const {
        return (path / f).string();
    }
};

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
    args.insert(args.begin(), "augsurf");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) {
        *out_text = out.str() + err.str();
    }
    return code;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) {
        out.push_back(l);
    }
    return out;
}

} // namespace

TEST_CASE("build writes a PLY and a report") {
    TempDir dir("build");
    REQUIRE(run({"gen", "torus", dir / "torus.obj", "--n", "12", "--m", "8"}) == 0);
    std::string text;
    REQUIRE(run({"build", "--family", "d5c2p2s4", "--mode", "g2", "--param", "centripetal", dir / "torus.obj",
                 "--samples", "3", "--obj", dir / "torus_tri.obj"},
                &text)
            == 0);
    CHECK(text.find("96 regular, 0 gregory") != std::string::npos);
    const std::string ply = slurp(dir / "torus.ply");
    CHECK(ply.rfind("ply\nformat ascii 1.0\n", 0) == 0);
    CHECK(ply.find("property double mean_curvature") != std::string::npos);
    CHECK(ply.find("property double isophote") != std::string::npos);
    const auto report = nlohmann::json::parse(slurp(dir / "torus.report.json"));
    CHECK(report["build"]["regular_patches"] == 96);
    CHECK(report["continuity"]["summary"]["position_gap"]["max"].get<double>() < 1e-10);
    CHECK(report["continuity"]["edges"].size() == 192);
    CHECK(fs::exists(dir / "torus_tri.obj"));
}

TEST_CASE("usage errors exit with 2 before any work") {
    TempDir dir("usage");
    REQUIRE(run({"gen", "cube", dir / "cube.obj"}) == 0);
    CHECK(run({"build", "--mode", "g2", "--family", "d3c1p2s4", dir / "cube.obj"}) == 2);
    CHECK_FALSE(fs::exists(dir / "cube.ply"));
    CHECK(run({"build", "--mode", "g3", dir / "cube.obj"}) == 2);
    CHECK(run({"build", "--family", "d7", dir / "cube.obj"}) == 2);
    CHECK(run({"build", "--r-degree", "3", dir / "cube.obj"}) == 2);
    CHECK(run({"build", "--alpha", "2", dir / "cube.obj"}) == 2);
    CHECK(run({"build", "--param", "uniform", "--alpha", "0.3", dir / "cube.obj"}) == 2);
    CHECK(run({"build", "--bogus", dir / "cube.obj"}) == 2);
    CHECK(run({"build"}) == 2);
    CHECK(run({}) == 2);
    CHECK(run({"gen", "klein-bottle", dir / "k.obj"}) == 2);
    CHECK(run({"--help"}) == 0);
}

TEST_CASE("data errors exit with 1 and name the element") {
    TempDir dir("data");
    REQUIRE(run({"gen", "cube", dir / "cube.obj"}) == 0);
    std::string text;
    CHECK(run({"build", "--param", "mean", dir / "cube.obj"}, &text) == 1);
    CHECK(text.find("[vertex") != std::string::npos);
    CHECK(run({"build", dir / "missing.obj"}) == 1);
    CHECK(run({"compare", dir / "cube.obj"}) == 1);
    std::ofstream(dir / "bad.obj") << "v 0 0 0\nf 1 2 3 4\n";
    CHECK(run({"build", dir / "bad.obj"}) == 1);
}

TEST_CASE("g1 builds and the cube works in both modes") {
    TempDir dir("modes");
    REQUIRE(run({"gen", "cube", dir / "cube.obj"}) == 0);
    std::string text;
    CHECK(run({"build", "--mode", "g1", "--family", "d3c1p2s4", dir / "cube.obj", "--samples", "2"}, &text) == 0);
    CHECK(text.find("0 regular, 6 gregory") != std::string::npos);
    CHECK(run({"build", "--mode", "g2", "--r-degree", "1", dir / "cube.obj", "--samples", "2"}) == 0);
}

TEST_CASE("config file fills options that flags leave unset") {
    TempDir dir("config");
    REQUIRE(run({"gen", "sphere", dir / "s.obj", "--n", "2"}) == 0);
    std::ofstream(dir / "cfg.json") << R"({"mode": "g1", "family": "d3c1p2s4", "samples": 2, "report": ")"
                                    << dir / "from_config.json" << "\"}";
    CHECK(run({"build", dir / "s.obj", "--config", dir / "cfg.json"}) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "from_config.json"));
    CHECK(j["build"]["mode"] == "g1");
    CHECK(j["tessellation"]["samples_per_edge"] == 2);
    // The flag wins over the file.
    CHECK(run({"build", dir / "s.obj", "--config", dir / "cfg.json", "--samples", "3"}) == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "from_config.json"))["tessellation"]["samples_per_edge"] == 3);
    std::ofstream(dir / "bad.json") << R"({"colour": "red"})";
    CHECK(run({"build", dir / "s.obj", "--config", dir / "bad.json"}) == 2);
}

TEST_CASE("edge parameter sidecar") {
    TempDir dir("params");
    REQUIRE(run({"gen", "torus", dir / "t.obj", "--n", "8", "--m", "6"}) == 0);
    const QuadMesh m = build_connectivity(load_obj(dir / "t.obj"));
    save_edge_params(m, assign_edge_params(m, ParamMethod::Uniform), dir / "p.json");
    CHECK(run({"build", dir / "t.obj", "--params", dir / "p.json", "--samples", "2", "--out", dir / "a.ply"}) == 0);
    CHECK(run({"build", dir / "t.obj", "--param", "uniform", "--samples", "2", "--out", dir / "b.ply"}) == 0);
    CHECK(slurp(dir / "a.ply") == slurp(dir / "b.ply"));
}

TEST_CASE("builds are byte-identical across runs") {
    TempDir dir("determinism");
    REQUIRE(run({"gen", "torus-irregular", dir / "t.obj"}) == 0);
    for (const char* tag : {"1", "2"}) {
        REQUIRE(run({"build", dir / "t.obj", "--samples", "3", "--out", dir / (std::string("r") + tag + ".ply"),
                     "--report", dir / (std::string("r") + tag + ".json")})
                == 0);
    }
    CHECK(slurp(dir / "r1.ply") == slurp(dir / "r2.ply"));
    CHECK(slurp(dir / "r1.json") == slurp(dir / "r2.json"));
}

TEST_CASE("curve samples and comb") {
    TempDir dir("curve");
    std::ofstream(dir / "square.txt") << "# unit square\n0 0\n1 0\n1 1\n0 1\n";
    REQUIRE(run({"curve", dir / "square.txt", "--samples", "40"}) == 0);
    const auto rows = lines(slurp(dir / "square.csv"));
    REQUIRE(rows.size() == 41);
    CHECK(rows[0] == "x,px,py,pz,curvature");
    // Quarter turns map samples k onto k + 10.
    std::vector<std::array<double, 5>> v;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::array<double, 5> r{};
        std::sscanf(rows[i].c_str(), "%lf,%lf,%lf,%lf,%lf", &r[0], &r[1], &r[2], &r[3], &r[4]);
        v.push_back(r);
    }
    for (int k = 0; k < 40; ++k) {
        const auto& a = v[k];
        const auto& b = v[(k + 10) % 40];
        // Rotation by +90 degrees about the centre (0.5, 0.5).
        CHECK(std::abs((1.0 - a[2]) - b[1]) < 1e-12);
        CHECK(std::abs(a[1] - b[2]) < 1e-12);
        CHECK(std::abs(a[4] - b[4]) < 1e-9);
    }
    const std::string svg = slurp(dir / "square.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<line") != std::string::npos);

    std::ofstream(dir / "three.txt") << "0 0\n1 0\n0 1\n";
    CHECK(run({"curve", dir / "three.txt"}) == 2);
    CHECK(run({"curve", dir / "square.txt", "--param", "mean"}) == 2);
    std::ofstream(dir / "junk.txt") << "0 0\n1 x\n";
    CHECK(run({"curve", dir / "junk.txt"}) == 1);
}

TEST_CASE("centripetal curves wiggle no more than uniform ones") {
    std::vector<Vec3> pts;
    for (int i = 0; i <= 6; ++i) {
        const double t = std::numbers::pi * i / 6;
        pts.emplace_back(std::cos(t), 0.6 * std::sin(t), 0.0);
    }
    for (const char* fam : {"d3c1p2s4", "d5c2p2s4"}) {
        const auto u = cli::sample_polyline(pts, family_from_name(fam), ParamMethod::Uniform, 0.5, true, 2000);
        const auto c = cli::sample_polyline(pts, family_from_name(fam), ParamMethod::Centripetal, 0.5, true, 2000);
        CHECK(u.sign_changes == 4);
        CHECK(c.sign_changes == 0);
    }
}

TEST_CASE("compare against mean parameters") {
    TempDir dir("compare");
    SECTION("uniform grid: both surfaces coincide") {
        REQUIRE(run({"gen", "plane", dir / "p.obj", "--n", "6", "--m", "5"}) == 0);
        REQUIRE(run({"compare", dir / "p.obj", "--report", dir / "p.json"}) == 0);
        const auto j = nlohmann::json::parse(slurp(dir / "p.json"));
        CHECK(j["position_delta"]["max"].get<double>() < 1e-10);
        for (const char* side : {"augmented", "mean"}) {
            for (const char* key : {"param", "section_curves", "section_sign_changes", "mean_curvature_min",
                                    "mean_curvature_max", "max_position_gap"}) {
                CHECK(j[side].contains(key));
            }
        }
        CHECK(j["mean"]["param"] == "mean");
    }
    SECTION("uneven torus") {
        REQUIRE(run({"gen", "torus-uneven", dir / "t.obj", "--n", "16", "--m", "8", "--warp", "0.9"}) == 0);
        REQUIRE(run({"compare", dir / "t.obj", "--samples", "4"}) == 0);
        const auto j = nlohmann::json::parse(slurp(dir / "t.compare.json"));
        CHECK(j["augmented"]["section_sign_changes"].get<int>() <= j["mean"]["section_sign_changes"].get<int>());
        CHECK(j["position_delta"]["max"].get<double>() > 1e-3);
        CHECK(j["augmented"]["max_position_gap"].get<double>() < 1e-8);
        CHECK(j["mean"]["max_position_gap"].get<double>() < 1e-8);
    }
}
