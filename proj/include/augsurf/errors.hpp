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

#include <stdexcept>
#include <string>
#include <utility>

namespace augsurf {

enum class ErrorKind {
    Domain,
    DegenerateEdge,
    UnsupportedFace,
    Io,
    Structural,
    Unsupported,
    Contract,
    DegenerateEstimate,
    Fit,
    Construction,
};

inline const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Domain:
        return "domain error";
    case ErrorKind::DegenerateEdge:
        return "degenerate edge";
    case ErrorKind::UnsupportedFace:
        return "unsupported face";
    case ErrorKind::Io:
        return "I/O error";
    case ErrorKind::Structural:
        return "structural error";
    case ErrorKind::Unsupported:
        return "unsupported";
    case ErrorKind::Contract:
        return "contract violation";
    case ErrorKind::DegenerateEstimate:
        return "degenerate estimate";
    case ErrorKind::Fit:
        return "fit error";
    case ErrorKind::Construction:
        return "construction error";
    }
    return "error";
}

/// Single exception type for the library. Face and vertex ids are -1 when
/// they do not apply.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, int face = -1, int vertex = -1)
        : std::runtime_error(compose_(kind, message, face, vertex))
        , kind_(kind)
        , message_(message)
        , face_(face)
        , vertex_(vertex) {
    }

    /// Message without the kind prefix and id suffixes.
    const std::string& message() const {
        return message_;
    }

    ErrorKind kind() const {
        return kind_;
    }

    int face() const {
        return face_;
    }

    int vertex() const {
        return vertex_;
    }

private:
    ErrorKind kind_;
    std::string message_;
    int face_;
    int vertex_;

    static std::string compose_(ErrorKind kind, const std::string& message, int face, int vertex) {
        std::string s = error_kind_name(kind);
        s += ": ";
        s += message;
        if (face >= 0) {
            s += " [face " + std::to_string(face) + "]";
        }
        if (vertex >= 0) {
            s += " [vertex " + std::to_string(vertex) + "]";
        }
        return s;
    }
};

} // namespace augsurf
