// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "chipforge/expected.hpp"

namespace chipforge {

struct WorkspaceError {
    std::string message;
};

/// Fresh scratch directory, removed on destruction. Names are unique per
/// process (pid + atomic counter), so concurrent evaluations never share a
/// path.
class Workspace {
public:
    /// root = "" uses $TMPDIR (or /tmp) + "/chipforge".
    static Expected<Workspace, WorkspaceError> create(const std::string& root = "");

    Workspace(Workspace&& other) noexcept : path_(std::move(other.path_)) {
        other.path_.clear();
    }
    Workspace& operator=(Workspace&& other) noexcept;
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
    ~Workspace();

    const std::string& path() const { return path_; }
    std::string id() const; // directory basename

    /// Write a file inside the workspace; returns its full path.
    Expected<std::string, WorkspaceError> write_file(const std::string& name,
                                                     const std::string& contents) const;

private:
    explicit Workspace(std::string path) : path_(std::move(path)) {}
    std::string path_;
};

} // namespace chipforge
