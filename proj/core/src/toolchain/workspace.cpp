// SPDX-License-Identifier: Apache-2.0
#include "chipforge/toolchain/workspace.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <system_error>

#include <unistd.h>

namespace chipforge {

namespace fs = std::filesystem;

namespace {

std::atomic<std::uint64_t> g_ws_counter{0};

std::string default_root() {
    const char* tmp = std::getenv("TMPDIR");
    fs::path base = (tmp && *tmp) ? fs::path(tmp) : fs::path("/tmp");
    return (base / "chipforge").string();
}

} // namespace

Expected<Workspace, WorkspaceError> Workspace::create(const std::string& root) {
    const fs::path base = root.empty() ? fs::path(default_root()) : fs::path(root);
    std::error_code ec;
    fs::create_directories(base, ec);
    if (ec) {
        return WorkspaceError{"cannot create workspace root " + base.string() + ": " +
                              ec.message()};
    }

    const std::string name = "ws-" + std::to_string(::getpid()) + "-" +
                             std::to_string(g_ws_counter.fetch_add(1));
    const fs::path dir = base / name;
    if (!fs::create_directory(dir, ec) || ec) {
        return WorkspaceError{"cannot create workspace " + dir.string() +
                              (ec ? ": " + ec.message() : "")};
    }
    return Workspace(dir.string());
}

Workspace& Workspace::operator=(Workspace&& other) noexcept {
    if (this != &other) {
        if (!path_.empty()) {
            std::error_code ec;
            fs::remove_all(path_, ec);
        }
        path_ = std::move(other.path_);
        other.path_.clear();
    }
    return *this;
}

Workspace::~Workspace() {
    if (path_.empty()) return;
    std::error_code ec;
    fs::remove_all(path_, ec);
}

std::string Workspace::id() const { return fs::path(path_).filename().string(); }

Expected<std::string, WorkspaceError> Workspace::write_file(const std::string& name,
                                                            const std::string& contents) const {
    const fs::path file = fs::path(path_) / name;
    std::ofstream out(file, std::ios::binary);
    if (!out) return WorkspaceError{"cannot open " + file.string() + " for writing"};
    out << contents;
    out.close();
    if (!out) return WorkspaceError{"write failed for " + file.string()};
    return file.string();
}

} // namespace chipforge
