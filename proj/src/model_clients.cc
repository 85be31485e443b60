// Copyright 2026 The M2C Authors
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

#include "m2c/model_clients.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <mutex>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "m2c/error.h"

namespace m2c {
namespace {

const TestCase& CaseOf(const ModelRequest& request) {
  if (request.test_case == nullptr) {
    throw Error(ErrorCode::kUsage, "builtin clients need the test case");
  }
  return *request.test_case;
}

Json RequestBody(const ModelRequest& request) {
  return Json{{"prompt", request.prompt},
              {"temperature", request.decoding.temperature},
              {"max_steps", request.decoding.max_steps}};
}

std::string TextFromResponse(std::string_view body) {
  try {
    Json json = Json::parse(body);
    return json.at("text").get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kTransport,
                std::string("malformed model response: ") + e.what());
  }
}

class OracleClient : public ModelClient {
 public:
  std::string Id() const override { return "oracle"; }
  std::string Complete(const ModelRequest& request) override {
    return CaseOf(request).gold_answer;
  }
};

class MorphMockClient : public ModelClient {
 public:
  std::string Id() const override { return "mock:morph"; }
  std::string Complete(const ModelRequest& request) override {
    const TestCase& tc = CaseOf(request);
    for (const Matcher& matcher : tc.matchers) {
      if (matcher.kind != MatcherKind::kGoldForm) continue;
      for (const FormVariant& variant : matcher.variants) {
        if (Judge(variant.text, tc.matchers).kind ==
            VerdictKind::kMorphologicalError) {
          return variant.text;
        }
      }
    }
    return "???";
  }
};

class GarbageMockClient : public ModelClient {
 public:
  std::string Id() const override { return "mock:garbage"; }
  std::string Complete(const ModelRequest&) override { return "???"; }
};

class HttpClient : public ModelClient {
 public:
  HttpClient(const std::string& endpoint, std::chrono::milliseconds timeout)
      : timeout_(timeout) {
    std::size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos) {
      throw Error(ErrorCode::kUsage,
                  "endpoint must look like http://host:port/path");
    }
    std::size_t slash = endpoint.find('/', scheme + 3);
    base_ = endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : endpoint.substr(slash);
    if (const char* key = std::getenv("M2C_API_KEY")) token_ = key;
  }

  std::string Id() const override { return "http"; }

  std::string Complete(const ModelRequest& request) override {
    httplib::Client client(base_);
    auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
        timeout_ - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    httplib::Headers headers;
    if (!token_.empty()) {
      headers.emplace("Authorization", "Bearer " + token_);
    }
    auto response = client.Post(path_, headers, RequestBody(request).dump(),
                                "application/json");
    if (!response) {
      throw Error(ErrorCode::kTransport,
                  "POST " + base_ + path_ + ": " +
                      httplib::to_string(response.error()));
    }
    if (response->status != 200) {
      throw Error(ErrorCode::kTransport,
                  "POST " + base_ + path_ + ": HTTP " +
                      std::to_string(response->status));
    }
    return TextFromResponse(response->body);
  }

 private:
  std::string base_;
  std::string path_;
  std::string token_;
  std::chrono::milliseconds timeout_;
};

class SubprocessClient : public ModelClient {
 public:
  SubprocessClient(std::string command, std::chrono::milliseconds timeout)
      : command_(std::move(command)), timeout_(timeout) {}
  ~SubprocessClient() override { Stop(); }

  std::string Id() const override { return "subprocess"; }

  std::string Complete(const ModelRequest& request) override {
    std::lock_guard<std::mutex> lock(mutex_);
    try {
      if (fd_ < 0) Start();
      WriteLine(RequestBody(request).dump() + "\n");
      return TextFromResponse(ReadLine());
    } catch (const Error&) {
      Stop();
      throw;
    }
  }

 private:
  void Start() {
    int fds[2];
    if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
      throw Error(ErrorCode::kTransport,
                  std::string("socketpair: ") + std::strerror(errno));
    }
    pid_t pid = fork();
    if (pid < 0) {
      close(fds[0]);
      close(fds[1]);
      throw Error(ErrorCode::kTransport,
                  std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
      dup2(fds[1], STDIN_FILENO);
      dup2(fds[1], STDOUT_FILENO);
      execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(fds[1]);
    fd_ = fds[0];
    pid_ = pid;
    buffer_.clear();
  }

  void Stop() {
    if (fd_ >= 0) {
      close(fd_);
      fd_ = -1;
    }
    if (pid_ > 0) {
      int status = 0;
      if (waitpid(pid_, &status, WNOHANG) == 0) {
        kill(pid_, SIGTERM);
        waitpid(pid_, &status, 0);
      }
      pid_ = -1;
    }
  }

  void WriteLine(const std::string& line) {
    std::size_t sent = 0;
    while (sent < line.size()) {
      ssize_t n = send(fd_, line.data() + sent, line.size() - sent,
                       MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        throw Error(ErrorCode::kTransport,
                    "model process closed its input: " + command_);
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string ReadLine() {
    auto deadline = std::chrono::steady_clock::now() + timeout_;
    while (true) {
      std::size_t newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return line;
      }
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        throw Error(ErrorCode::kTransport, "model process timed out");
      }
      pollfd pfd{fd_, POLLIN, 0};
      int ready = poll(&pfd, 1, static_cast<int>(left.count()));
      if (ready < 0 && errno == EINTR) continue;
      if (ready <= 0) continue;
      char chunk[4096];
      ssize_t n = recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        throw Error(ErrorCode::kTransport,
                    "model process exited: " + command_);
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  std::string command_;
  std::chrono::milliseconds timeout_;
  std::mutex mutex_;
  int fd_ = -1;
  pid_t pid_ = -1;
  std::string buffer_;
};

}  // namespace

std::unique_ptr<ModelClient> MakeOracleClient() {
  return std::make_unique<OracleClient>();
}

std::unique_ptr<ModelClient> MakeMorphMockClient() {
  return std::make_unique<MorphMockClient>();
}

std::unique_ptr<ModelClient> MakeGarbageMockClient() {
  return std::make_unique<GarbageMockClient>();
}

std::unique_ptr<ModelClient> MakeHttpClient(const std::string& endpoint,
                                            std::chrono::milliseconds timeout) {
  return std::make_unique<HttpClient>(endpoint, timeout);
}

std::unique_ptr<ModelClient> MakeSubprocessClient(
    const std::string& command, std::chrono::milliseconds timeout) {
  return std::make_unique<SubprocessClient>(command, timeout);
}

}  // namespace m2c
