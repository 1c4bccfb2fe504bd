#include "tileproof/smt/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <vector>

extern char** environ;

namespace tileproof::smt {

const char* to_string(Status s) {
  switch (s) {
    case Status::Sat: return "sat";
    case Status::Unsat: return "unsat";
    case Status::Unknown: return "unknown";
    case Status::Timeout: return "timeout";
    case Status::Crash: return "crash";
  }
  return "?";
}

namespace {

bool executable(const std::string& p) {
  struct stat st {};
  return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
}

struct Fd {
  int fd = -1;
  ~Fd() { close(); }
  void close() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

void ignore_sigpipe() {
  static const bool once = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)once;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string Solver::resolve(const std::string& requested) {
  std::string name = requested;
  if (name.empty()) {
    const char* env = std::getenv("TILEPROOF_SOLVER");
    name = (env && *env) ? env : "z3";
  }
  if (name.find('/') != std::string::npos) {
    if (executable(name)) return name;
    throw ConfigError("solver binary not found or not executable: " + name);
  }
  const char* path = std::getenv("PATH");
  std::stringstream ss(path ? path : "/usr/local/bin:/usr/bin:/bin");
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    std::string cand = dir + "/" + name;
    if (executable(cand)) return cand;
  }
  throw ConfigError("solver '" + name + "' not found on PATH (set --solver or TILEPROOF_SOLVER)");
}

Solver::Solver(std::string path, std::string args) : path_(std::move(path)), args_(std::move(args)) {}

SolverResult Solver::check(const std::string& script, int timeout_ms) const {
  ignore_sigpipe();
  SolverResult res;
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  int in[2], out[2], err[2];
  if (::pipe2(in, O_CLOEXEC) != 0) {
    res.status = Status::Crash;
    res.errors = "pipe failed";
    return res;
  }
  if (::pipe2(out, O_CLOEXEC) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    res.status = Status::Crash;
    res.errors = "pipe failed";
    return res;
  }
  if (::pipe2(err, O_CLOEXEC) != 0) {
    for (int f : {in[0], in[1], out[0], out[1]}) ::close(f);
    res.status = Status::Crash;
    res.errors = "pipe failed";
    return res;
  }
  Fd to_child{in[1]}, from_child{out[0]}, err_child{err[0]};
  Fd child_in{in[0]}, child_out{out[1]}, child_err{err[1]};

  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, in[0], 0);
  posix_spawn_file_actions_adddup2(&fa, out[1], 1);
  posix_spawn_file_actions_adddup2(&fa, err[1], 2);

  std::vector<std::string> argv_s{path_};
  {
    std::stringstream ss(args_);
    std::string a;
    while (ss >> a) argv_s.push_back(a);
  }
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  int rc = posix_spawn(&pid, path_.c_str(), &fa, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  child_in.close();
  child_out.close();
  child_err.close();
  if (rc != 0) {
    res.status = Status::Crash;
    res.errors = std::string("spawn failed: ") + std::strerror(rc);
    res.wall_ms = elapsed_ms();
    return res;
  }

  ::fcntl(to_child.fd, F_SETFL, ::fcntl(to_child.fd, F_GETFL) | O_NONBLOCK);
  size_t written = 0;
  bool timed_out = false;
  char buf[4096];
  while (from_child.fd >= 0 || err_child.fd >= 0) {
    double left = timeout_ms - elapsed_ms();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    std::vector<pollfd> fds;
    if (to_child.fd >= 0) fds.push_back({to_child.fd, POLLOUT, 0});
    if (from_child.fd >= 0) fds.push_back({from_child.fd, POLLIN, 0});
    if (err_child.fd >= 0) fds.push_back({err_child.fd, POLLIN, 0});
    int n = ::poll(fds.data(), fds.size(), static_cast<int>(left) + 1);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (const auto& p : fds) {
      if (!p.revents) continue;
      if (p.fd == to_child.fd) {
        if (p.revents & (POLLERR | POLLHUP)) {
          to_child.close();
          continue;
        }
        ssize_t w = ::write(to_child.fd, script.data() + written, script.size() - written);
        if (w > 0) written += static_cast<size_t>(w);
        if (w < 0 && errno != EAGAIN) to_child.close();
        if (written >= script.size()) to_child.close();
      } else {
        ssize_t r = ::read(p.fd, buf, sizeof buf);
        if (r > 0) {
          (p.fd == from_child.fd ? res.output : res.errors).append(buf, static_cast<size_t>(r));
        } else if (r == 0 || errno != EAGAIN) {
          if (p.fd == from_child.fd) from_child.close();
          else err_child.close();
        }
      }
    }
  }
  if (timed_out) {
    ::kill(pid, SIGKILL);
  }
  int wstatus = 0;
  while (::waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) {
  }
  res.wall_ms = elapsed_ms();
  if (timed_out) {
    res.status = Status::Timeout;
    return res;
  }
  res.exit_code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : 128 + WTERMSIG(wstatus);

  std::string first;
  size_t nl = res.output.find('\n');
  first = trim(res.output.substr(0, nl));
  if (first == "sat") res.status = Status::Sat;
  else if (first == "unsat") res.status = Status::Unsat;
  else if (first == "unknown") res.status = Status::Unknown;
  else res.status = Status::Crash;

  if (res.status == Status::Sat && nl != std::string::npos) {
    try {
      auto rest = parse_sexprs(res.output.substr(nl + 1));
      Model m;
      bool got = false;
      for (const auto& s : rest) {
        if (s.atom) continue;
        if (s.items.empty()) {
          got = true;
          continue;
        }
        const SExpr& head = s.items[0];
        if (head.is("model") || (!head.atom && !head.items.empty() && head.items[0].is("define-fun"))) {
          Model parsed = parse_model(s);
          m.values = std::move(parsed.values);
          got = true;
        } else if (head.is("error")) {
          continue;
        } else if (!head.atom && head.items.size() == 2) {
          parse_get_value(s, m);
          got = true;
        }
      }
      if (got || rest.empty()) res.model = std::move(m);
    } catch (const SExprError&) {
      res.model.reset();
    }
  }
  return res;
}

}  // namespace tileproof::smt
