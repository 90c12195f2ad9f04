// SPDX-License-Identifier: Apache-2.0
#include "chipforge/toolchain/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace chipforge {

namespace {

constexpr std::size_t kOutputCap = 4 * 1024 * 1024;

void close_fd(int& fd) {
    if (fd >= 0) {
        ::close(fd);
        fd = -1;
    }
}

} // namespace

RunResult run_command(const std::vector<std::string>& argv, const std::string& cwd,
                      double timeout_s) {
    RunResult result;
    if (argv.empty()) {
        result.spawn_failed = true;
        result.error = "empty command";
        return result;
    }

    int out_pipe[2] = {-1, -1};
    int err_pipe[2] = {-1, -1}; // exec-errno channel, close-on-exec
    if (::pipe(out_pipe) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0) {
        close_fd(out_pipe[0]);
        close_fd(out_pipe[1]);
        result.spawn_failed = true;
        result.error = std::string("pipe: ") + std::strerror(errno);
        return result;
    }

    const pid_t pid = ::fork();
    if (pid < 0) {
        for (int* p : {out_pipe, err_pipe}) {
            close_fd(p[0]);
            close_fd(p[1]);
        }
        result.spawn_failed = true;
        result.error = std::string("fork: ") + std::strerror(errno);
        return result;
    }

    if (pid == 0) {
        ::setpgid(0, 0);
        ::close(out_pipe[0]);
        ::close(err_pipe[0]);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::dup2(out_pipe[1], STDERR_FILENO);
        ::close(out_pipe[1]);
        if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
            const int e = errno;
            (void)!::write(err_pipe[1], &e, sizeof e);
            ::_exit(127);
        }
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        ::execvp(args[0], args.data());
        const int e = errno;
        (void)!::write(err_pipe[1], &e, sizeof e);
        ::_exit(127);
    }

    ::setpgid(pid, pid); // also from the parent side, to close the race
    close_fd(out_pipe[1]);
    close_fd(err_pipe[1]);

    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
    bool overflowed = false;
    char buf[4096];
    bool out_open = true;
    while (out_open) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            result.timed_out = true;
            ::kill(-pid, SIGKILL);
            break;
        }
        const auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        struct pollfd pfd = {out_pipe[0], POLLIN, 0};
        const int pr = ::poll(&pfd, 1, int(std::min<long long>(remaining, 1000)));
        if (pr < 0 && errno != EINTR) break;
        if (pr <= 0) continue;
        const ssize_t n = ::read(out_pipe[0], buf, sizeof buf);
        if (n <= 0) {
            out_open = false;
            break;
        }
        if (result.output.size() < kOutputCap) {
            const std::size_t take =
                std::min(std::size_t(n), kOutputCap - result.output.size());
            result.output.append(buf, take);
            if (take < std::size_t(n) && !overflowed) {
                overflowed = true;
                result.output += "\n[output truncated]\n";
            }
        }
    }
    if (result.timed_out) {
        // Drain whatever was flushed before the kill.
        ssize_t n;
        while ((n = ::read(out_pipe[0], buf, sizeof buf)) > 0) {
            if (result.output.size() < kOutputCap)
                result.output.append(buf, std::min(std::size_t(n),
                                                   kOutputCap - result.output.size()));
        }
    }
    close_fd(out_pipe[0]);

    int exec_errno = 0;
    const ssize_t en = ::read(err_pipe[0], &exec_errno, sizeof exec_errno);
    close_fd(err_pipe[0]);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {}

    if (en == sizeof exec_errno) {
        result.spawn_failed = true;
        result.error = argv[0] + ": " + std::strerror(exec_errno);
        return result;
    }
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
    return result;
}

} // namespace chipforge
