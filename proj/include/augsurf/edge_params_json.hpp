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

#pragma once

#include <augsurf/quad_mesh.hpp>

#include <json.hpp>

#include <fstream>
#include <string>

namespace augsurf {

/// Edge intervals as [{"edge": [vi, vj], "d": value}, ...].
inline nlohmann::json edge_params_to_json(const QuadMesh& mesh, const EdgeParams& params) {
    require_connectivity(mesh);
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        arr.push_back({{"edge", {mesh.edges[e].v0, mesh.edges[e].v1}}, {"d", params.d[e]}});
    }
    return arr;
}

/// Every mesh edge must appear exactly once with a positive interval.
inline EdgeParams edge_params_from_json(const QuadMesh& mesh, const nlohmann::json& j) {
    require_connectivity(mesh);
    if (!j.is_array()) {
        throw Error(ErrorKind::Io, "edge parameter file must hold a JSON array");
    }
    EdgeParams params;
    params.d.assign(mesh.edges.size(), 0.0);
    for (const auto& item : j) {
        int a = -1;
        int b = -1;
        double d = 0.0;
        try {
            a = item.at("edge").at(0).get<int>();
            b = item.at("edge").at(1).get<int>();
            d = item.at("d").get<double>();
        }
        catch (const nlohmann::json::exception& ex) {
            throw Error(ErrorKind::Io, std::string("malformed edge parameter entry: ") + ex.what());
        }
        if (a < 0 || b < 0 || a >= static_cast<int>(mesh.vertices.size()) || b >= static_cast<int>(mesh.vertices.size())) {
            throw Error(ErrorKind::Domain, "edge parameter entry names a missing vertex");
        }
        int h = mesh.find_halfedge(a, b);
        if (h < 0) {
            h = mesh.find_halfedge(b, a);
        }
        if (h < 0) {
            throw Error(ErrorKind::Domain, "no edge " + std::to_string(a) + "-" + std::to_string(b), -1, a);
        }
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw Error(ErrorKind::Domain, "edge interval must be positive", -1, a);
        }
        const int e = mesh.edge_of(h);
        if (params.d[e] != 0.0) {
            throw Error(ErrorKind::Domain, "edge " + std::to_string(a) + "-" + std::to_string(b) + " listed twice", -1, a);
        }
        params.d[e] = d;
    }
    for (std::size_t e = 0; e < params.d.size(); ++e) {
        if (params.d[e] == 0.0) {
            throw Error(ErrorKind::Domain, "no interval for edge " + std::to_string(mesh.edges[e].v0) + "-"
                                               + std::to_string(mesh.edges[e].v1),
                        -1, mesh.edges[e].v0);
        }
    }
    return params;
}

inline EdgeParams load_edge_params(const QuadMesh& mesh, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    }
    catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::Io, "cannot parse '" + path + "': " + ex.what());
    }
    return edge_params_from_json(mesh, j);
}

inline void save_edge_params(const QuadMesh& mesh, const EdgeParams& params, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    }
    out << edge_params_to_json(mesh, params).dump(1) << '\n';
}

} // namespace augsurf
