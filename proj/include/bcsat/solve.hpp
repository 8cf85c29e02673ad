#pragma once

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fcntl.h>
#include <filesystem>
#include <fstream>
#include <optional>
#include <signal.h>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/types.h>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>
#include <vector>

#include "bcsat/cnf.hpp"
#include "bcsat/io.hpp"
#include "bcsat/sat_solver.hpp"

namespace bcsat {

struct SolverConfig {
    // Shell command template with a {cnf} placeholder for the DIMACS path.
    // Unset: the built-in CDCL solver runs in-process.
    std::optional<std::string> command;
    double timeout_s = 0.0; // wall clock; <= 0 disables the limit
};

inline std::optional<std::string> env_solver_command() {
    const char* v = std::getenv("BCSAT_SOLVER");
    if (v != nullptr && *v != '\0') return std::string(v);
    return std::nullopt;
}

namespace detail {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "bcsat.XXXXXX").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (mkdtemp(buf.data()) == nullptr)
            throw std::runtime_error("cannot create temporary directory");
        path = buf.data();
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline std::string substitute_cnf_path(const std::string& command, const std::string& path) {
    std::string out;
    std::size_t pos = 0;
    bool found = false;
    while (true) {
        std::size_t hit = command.find("{cnf}", pos);
        if (hit == std::string::npos) {
            out.append(command, pos, std::string::npos);
            break;
        }
        out.append(command, pos, hit - pos);
        out += path;
        pos = hit + 5;
        found = true;
    }
    if (!found)
        throw std::invalid_argument("solver command must contain the {cnf} placeholder: " +
                                    command);
    return out;
}

struct RunResult {
    bool timed_out = false;
    int exit_code = -1;   // valid when !signaled
    int term_signal = 0;  // valid when signaled
    bool signaled = false;
};

// Runs `command` under /bin/sh with stdout+stderr captured to out_path.
// On timeout the whole process group is killed.
inline RunResult run_with_timeout(const std::string& command, const std::string& out_path,
                                  double timeout_s) {
    pid_t pid = fork();
    if (pid < 0) throw std::runtime_error("fork failed");
    if (pid == 0) {
        setpgid(0, 0);
        int fd = open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
        if (fd >= 0) {
            dup2(fd, STDOUT_FILENO);
            dup2(fd, STDERR_FILENO);
            if (fd > STDERR_FILENO) close(fd);
        }
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    setpgid(pid, pid); // also from the parent side, to lose no races
    const bool has_deadline = timeout_s > 0;
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::duration<double>(has_deadline ? timeout_s : 0);
    RunResult r;
    while (true) {
        int status = 0;
        pid_t got = waitpid(pid, &status, WNOHANG);
        if (got == pid) {
            if (WIFEXITED(status)) {
                r.exit_code = WEXITSTATUS(status);
            } else if (WIFSIGNALED(status)) {
                r.signaled = true;
                r.term_signal = WTERMSIG(status);
            }
            return r;
        }
        if (got < 0) throw std::runtime_error("waitpid failed");
        if (has_deadline && std::chrono::steady_clock::now() >= deadline) {
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            r.timed_out = true;
            return r;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
}

inline std::string tail_of(const std::string& s, std::size_t limit = 600) {
    if (s.size() <= limit) return s;
    return "..." + s.substr(s.size() - limit);
}

} // namespace detail

// Runs an external DIMACS solver on f. Verdict comes from the "s SATISFIABLE"
// / "s UNSATISFIABLE" line, with SAT-competition exit codes 10/20 as the
// fallback when no s-line appears. Models are read from "v " lines, which
// must end with the 0 terminator. A SAT verdict without a complete model is a
// solver error, as is any unrecognized outcome; solver failures are reported,
// never thrown.
inline SolveOutcome solve_external(const CnfFormula& f, const std::string& command,
                                   double timeout_s = 0.0) {
    auto start = std::chrono::steady_clock::now();
    SolveOutcome out;
    detail::TempDir tmp;
    std::string cnf_path = (tmp.path / "instance.cnf").string();
    std::string out_path = (tmp.path / "solver.out").string();
    write_cnf_file(cnf_path, f);
    std::string cmd = detail::substitute_cnf_path(command, cnf_path);
    detail::RunResult run = detail::run_with_timeout(cmd, out_path, timeout_s);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (run.timed_out) {
        out.status = SolveStatus::Timeout;
        return out;
    }
    std::string text;
    {
        std::ifstream in(out_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    std::optional<bool> verdict_sat;
    std::vector<long long> model_lits;
    bool model_terminated = false;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.size() >= 2 && line[0] == 's' && std::isspace(static_cast<unsigned char>(line[1]))) {
            std::istringstream ss(line.substr(1));
            std::string word;
            ss >> word;
            if (word == "SATISFIABLE") verdict_sat = true;
            else if (word == "UNSATISFIABLE") verdict_sat = false;
        } else if (line.size() >= 2 && line[0] == 'v' &&
                   std::isspace(static_cast<unsigned char>(line[1]))) {
            std::istringstream ss(line.substr(1));
            long long l = 0;
            while (ss >> l) {
                if (l == 0) {
                    model_terminated = true;
                    break;
                }
                model_lits.push_back(l);
            }
        }
    }
    if (!verdict_sat.has_value()) {
        if (run.signaled) {
            out.status = SolveStatus::SolverError;
            out.detail = "solver killed by signal " + std::to_string(run.term_signal) + "\n" +
                         detail::tail_of(text);
            return out;
        }
        if (run.exit_code == 10) verdict_sat = true;
        else if (run.exit_code == 20) verdict_sat = false;
        else {
            out.status = SolveStatus::SolverError;
            out.detail = "no verdict from solver (exit code " + std::to_string(run.exit_code) +
                         ")\n" + detail::tail_of(text);
            return out;
        }
    }
    if (!*verdict_sat) {
        out.status = SolveStatus::Unsat;
        return out;
    }
    if (!model_terminated) {
        out.status = SolveStatus::SolverError;
        out.detail = model_lits.empty() ? "satisfiable but no model printed"
                                        : "model missing its 0 terminator";
        return out;
    }
    Assignment a(static_cast<std::size_t>(f.n_vars), false);
    for (long long l : model_lits) {
        long long v = l < 0 ? -l : l;
        if (v >= 1 && v <= f.n_vars) a[static_cast<std::size_t>(v - 1)] = l > 0;
    }
    out.status = SolveStatus::Sat;
    out.model = std::move(a);
    return out;
}

// External solver when configured, built-in CDCL otherwise.
inline SolveOutcome solve_cnf(const CnfFormula& f, const SolverConfig& cfg = {}) {
    if (cfg.command) return solve_external(f, *cfg.command, cfg.timeout_s);
    return solve_internal(f, cfg.timeout_s);
}

} // namespace bcsat
