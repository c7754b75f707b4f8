// Copyright 2026 The DNA Authors
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

#ifndef DNA_TOOLS_SERVICE_H_
#define DNA_TOOLS_SERVICE_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dna/json_io.h"
#include "dna/search.h"

namespace dna::tools {

struct ServiceConfig {
  std::filesystem::path maps_dir;
  std::optional<std::filesystem::path> jobs_dir;  // finished jobs persisted here
  int workers = 1;  // concurrent search jobs
  int threads = 1;  // solver threads per job
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

enum class JobStatus { kQueued, kRunning, kDone, kFailed };
const char* JobStatusName(JobStatus s);

// Request handling for the HTTP API, independent of the transport so tests
// can drive it directly. Routes live under /api/v1; /api is an alias.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse Handle(const std::string& method, const std::string& path,
                      const std::string& body);

  // Blocks until the job leaves the queued/running states.
  void Wait(const std::string& job_id);

 private:
  struct Environment {
    std::string id;
    std::string map_text;
    std::unique_ptr<GridMdp> mdp;
    ValueIterationResult benchmark;
  };

  struct Job {
    std::string id;
    std::string env_id;
    SearchConfig config;
    JobStatus status = JobStatus::kQueued;
    SearchReport progress;
    std::string error;
    std::optional<Json> document;
    std::string canonical;  // CanonicalDump(*document)
    std::shared_ptr<const OptionsBundle> bundle;
  };

  const Environment* FindEnv(const std::string& id);
  std::vector<std::string> EnvIds() const;

  HttpResponse ListEnvs();
  HttpResponse GetEnv(const std::string& id);
  HttpResponse PostSearch(const std::string& body);
  HttpResponse GetSearch(const std::string& job_id, bool document_only);
  HttpResponse PostRollout(const std::string& body);
  HttpResponse GetOption(const std::string& ref);
  HttpResponse GetDiff(const std::string& ref, const std::string& other);

  // Resolves "j<k>-o<i>"; fills `status` with 404/409 on failure.
  std::shared_ptr<const OptionsBundle> ResolveOption(const std::string& ref,
                                                     std::string* option_id,
                                                     HttpResponse* status);

  void WorkerLoop();
  void RunJob(const std::string& job_id);
  void Persist(const Job& job);
  void LoadPersisted();

  ServiceConfig config_;
  mutable std::mutex env_mu_;
  std::map<std::string, std::unique_ptr<Environment>> envs_;

  std::mutex jobs_mu_;
  std::condition_variable jobs_cv_;
  std::map<std::string, std::unique_ptr<Job>> jobs_;
  std::deque<std::string> queue_;
  std::uint64_t next_job_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

// HTTP transport with CORS headers for the explorer UI.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  // Binds `port` (0 picks a free one) and returns the bound port, or -1.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); returns false if the listener failed.
  bool Serve();
  // Blocks until Serve() accepts connections.
  void WaitUntilReady();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dna::tools

#endif  // DNA_TOOLS_SERVICE_H_
