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

#include "service.h"

#include <algorithm>
#include <regex>
#include <utility>

#include <httplib.h>

#include "dna/error.h"
#include "dna/rollout_sim.h"

namespace dna::tools {

const char* JobStatusName(JobStatus s) {
  switch (s) {
    case JobStatus::kQueued:
      return "queued";
    case JobStatus::kRunning:
      return "running";
    case JobStatus::kDone:
      return "done";
    case JobStatus::kFailed:
      return "failed";
  }
  return "unknown";
}

namespace {

HttpResponse JsonResponse(int status, const Json& body) {
  return {status, "application/json", CanonicalDump(body)};
}

HttpResponse ErrorResponse(int status, const std::string& message) {
  return JsonResponse(status, {{"error", message}, {"status", status}});
}

int StatusFor(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kZeroBenchmark:
      return 422;
    case ErrorCode::kNotConverged:
    case ErrorCode::kCapExhausted:
    case ErrorCode::kIo:
      return 500;
    default:
      return 400;
  }
}

bool ValidId(const std::string& id) {
  static const std::regex kId("[A-Za-z0-9_.-]+");
  return std::regex_match(id, kId) && id.find("..") == std::string::npos;
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {
  if (config_.jobs_dir) {
    std::filesystem::create_directories(*config_.jobs_dir);
    LoadPersisted();
  }
  const int workers = std::max(1, config_.workers);
  for (int i = 0; i < workers; ++i) workers_.emplace_back([this] { WorkerLoop(); });
}

Service::~Service() {
  {
    std::lock_guard<std::mutex> lock(jobs_mu_);
    stopping_ = true;
  }
  jobs_cv_.notify_all();
  for (std::thread& t : workers_) t.join();
}

std::vector<std::string> Service::EnvIds() const {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(config_.maps_dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

const Service::Environment* Service::FindEnv(const std::string& id) {
  if (!ValidId(id)) return nullptr;
  std::lock_guard<std::mutex> lock(env_mu_);
  if (auto it = envs_.find(id); it != envs_.end()) return it->second.get();
  const std::filesystem::path map_path = config_.maps_dir / (id + ".txt");
  if (!std::filesystem::is_regular_file(map_path)) return nullptr;
  auto env = std::make_unique<Environment>();
  env->id = id;
  env->map_text = ReadTextFile(map_path);
  MdpConfig cfg;
  const std::filesystem::path cfg_path = config_.maps_dir / (id + ".json");
  if (std::filesystem::is_regular_file(cfg_path)) cfg = MdpConfigFromJson(ReadJsonFile(cfg_path));
  env->mdp = std::make_unique<GridMdp>(LoadGridMap(env->map_text, cfg));
  env->benchmark = ValueIteration(env->mdp->tabular());
  return envs_.emplace(id, std::move(env)).first->second.get();
}

HttpResponse Service::Handle(const std::string& method, const std::string& raw_path,
                             const std::string& body) {
  std::string path = raw_path.substr(0, raw_path.find('?'));
  if (path.rfind("/api/v1/", 0) == 0 || path == "/api/v1") {
    path = "/api" + path.substr(7);
  }
  while (path.size() > 1 && path.back() == '/') path.pop_back();
  if (method == "OPTIONS") return {204, "text/plain", ""};

  static const std::regex kEnv("/api/env/([^/]+)");
  static const std::regex kJob("/api/search/([^/]+)");
  static const std::regex kJobDoc("/api/search/([^/]+)/document");
  static const std::regex kOption("/api/option/([^/]+)");
  static const std::regex kDiff("/api/option/([^/]+)/diff/([^/]+)");
  std::smatch m;
  try {
    if (method == "GET") {
      if (path == "/api/envs") return ListEnvs();
      if (std::regex_match(path, m, kEnv)) return GetEnv(m[1]);
      if (std::regex_match(path, m, kJobDoc)) return GetSearch(m[1], true);
      if (std::regex_match(path, m, kJob)) return GetSearch(m[1], false);
      if (std::regex_match(path, m, kDiff)) return GetDiff(m[1], m[2]);
      if (std::regex_match(path, m, kOption)) return GetOption(m[1]);
    } else if (method == "POST") {
      if (path == "/api/search") return PostSearch(body);
      if (path == "/api/rollout") return PostRollout(body);
    }
  } catch (const Error& e) {
    return ErrorResponse(StatusFor(e), e.what());
  } catch (const Json::exception& e) {
    return ErrorResponse(400, e.what());
  } catch (const std::exception& e) {
    return ErrorResponse(500, e.what());
  }
  return ErrorResponse(404, "no route for " + method + " " + raw_path);
}

HttpResponse Service::ListEnvs() {
  Json envs = Json::array();
  for (const std::string& id : EnvIds()) {
    const Environment* env = FindEnv(id);
    if (env == nullptr) continue;
    envs.push_back({{"id", id},
                    {"shape", env->mdp->grid().extents()},
                    {"start", StateToJson(env->mdp->grid().State(env->mdp->start()))}});
  }
  return JsonResponse(200, {{"envs", envs}});
}

HttpResponse Service::GetEnv(const std::string& id) {
  const Environment* env = FindEnv(id);
  if (env == nullptr) return ErrorResponse(404, "unknown environment '" + id + "'");
  const GridMdp& mdp = *env->mdp;
  const Grid& grid = mdp.grid();
  Json rows = Json::array();
  Json heat = Json::array();
  for (int y = 0; y < grid.extent(0); ++y) {
    std::string row;
    Json values = Json::array();
    for (int x = 0; x < grid.extent(1); ++x) {
      const StateId s = grid.Id({y, x});
      row += static_cast<char>(mdp.tile(s));
      values.push_back(env->benchmark.v[s]);
    }
    rows.push_back(row);
    heat.push_back(values);
  }
  return JsonResponse(200, {{"id", id},
                            {"shape", grid.extents()},
                            {"tiles", rows},
                            {"config", MdpConfigToJson(mdp.config())},
                            {"start", StateToJson(grid.State(mdp.start()))},
                            {"v_star", heat}});
}

HttpResponse Service::PostSearch(const std::string& body) {
  Json request;
  try {
    request = Json::parse(body);
  } catch (const Json::parse_error& e) {
    return ErrorResponse(400, std::string("malformed JSON: ") + e.what());
  }
  if (!request.is_object()) return ErrorResponse(400, "body must be a JSON object");
  auto env_it = request.find("env");
  if (env_it == request.end() || !env_it->is_string()) {
    return ErrorResponse(400, "$.env: expected an environment id");
  }
  const std::string env_id = env_it->get<std::string>();
  const Environment* env = FindEnv(env_id);
  if (env == nullptr) return ErrorResponse(404, "unknown environment '" + env_id + "'");
  request.erase("env");
  SearchConfig cfg = SearchConfigFromJson(request, env->mdp->config());
  cfg.threads = config_.threads;
  cfg.Validate(env->mdp->grid());
  if (!(env->benchmark.v[env->mdp->grid().Id(cfg.start)] > 0.0)) {
    return ErrorResponse(422, "V*(start) is zero; no benchmark to compare against");
  }
  std::string id;
  {
    std::lock_guard<std::mutex> lock(jobs_mu_);
    id = "j" + std::to_string(next_job_++);
    auto job = std::make_unique<Job>();
    job->id = id;
    job->env_id = env_id;
    job->config = cfg;
    jobs_.emplace(id, std::move(job));
    queue_.push_back(id);
  }
  jobs_cv_.notify_one();
  return JsonResponse(202, {{"job", id}, {"status", JobStatusName(JobStatus::kQueued)}});
}

HttpResponse Service::GetSearch(const std::string& job_id, bool document_only) {
  std::lock_guard<std::mutex> lock(jobs_mu_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) return ErrorResponse(404, "unknown job '" + job_id + "'");
  const Job& job = *it->second;
  if (document_only) {
    if (job.status != JobStatus::kDone) {
      return ErrorResponse(409, "job " + job_id + " is " + JobStatusName(job.status));
    }
    return {200, "application/json", job.canonical};
  }
  Json out = {{"job", job.id},
              {"env", job.env_id},
              {"status", JobStatusName(job.status)},
              {"progress", SearchReportToJson(job.progress)},
              {"search", SearchConfigToJson(job.config)}};
  if (job.status == JobStatus::kDone) out["result"] = *job.document;
  if (job.status == JobStatus::kFailed) out["error"] = job.error;
  return JsonResponse(200, out);
}

std::shared_ptr<const OptionsBundle> Service::ResolveOption(const std::string& ref,
                                                            std::string* option_id,
                                                            HttpResponse* status) {
  const auto dash = ref.rfind('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == ref.size()) {
    *status = ErrorResponse(404, "unknown option '" + ref + "'");
    return nullptr;
  }
  const std::string job_id = ref.substr(0, dash);
  *option_id = ref.substr(dash + 1);
  std::lock_guard<std::mutex> lock(jobs_mu_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) {
    *status = ErrorResponse(404, "unknown job '" + job_id + "'");
    return nullptr;
  }
  const Job& job = *it->second;
  if (job.status != JobStatus::kDone) {
    *status = ErrorResponse(409, "job " + job_id + " is " + JobStatusName(job.status));
    return nullptr;
  }
  const auto& ids = job.bundle->ids;
  if (std::find(ids.begin(), ids.end(), *option_id) == ids.end()) {
    *status = ErrorResponse(404, "unknown option '" + ref + "'");
    return nullptr;
  }
  return job.bundle;
}

HttpResponse Service::PostRollout(const std::string& body) {
  Json request;
  try {
    request = Json::parse(body);
  } catch (const Json::parse_error& e) {
    return ErrorResponse(400, std::string("malformed JSON: ") + e.what());
  }
  if (!request.is_object()) return ErrorResponse(400, "body must be a JSON object");
  for (const auto& [key, value] : request.items()) {
    if (key != "option" && key != "n" && key != "seed" && key != "samples") {
      return ErrorResponse(400, "$." + key + ": unknown key");
    }
  }
  auto opt_it = request.find("option");
  if (opt_it == request.end() || !opt_it->is_string()) {
    return ErrorResponse(400, "$.option: expected an option reference like j1-o0");
  }
  SimOptions sim;
  sim.threads = config_.threads;
  if (auto it = request.find("n"); it != request.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
      return ErrorResponse(400, "$.n: expected an integer >= 1");
    }
    sim.n = it->get<std::int64_t>();
  }
  if (auto it = request.find("seed"); it != request.end()) {
    if (!it->is_number_unsigned()) return ErrorResponse(400, "$.seed: expected an unsigned integer");
    sim.seed = it->get<std::uint64_t>();
  }
  sim.samples = static_cast<int>(std::min<std::int64_t>(sim.n, kMaxSampleTrajectories));
  if (auto it = request.find("samples"); it != request.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0 ||
        it->get<std::int64_t>() > kMaxSampleTrajectories) {
      return ErrorResponse(400, "$.samples: expected an integer in [0, 20]");
    }
    sim.samples = static_cast<int>(std::min<std::int64_t>(sim.n, it->get<std::int64_t>()));
  }
  std::string option_id;
  HttpResponse failure;
  const auto bundle = ResolveOption(opt_it->get<std::string>(), &option_id, &failure);
  if (!bundle) return failure;
  const TabularMdp& mdp = bundle->mdp.tabular();
  const Policy pi_star = GreedyPolicy(ValueIteration(mdp).q);
  const SimReport report =
      SimulateOption(mdp, bundle->Find(option_id), pi_star,
                     bundle->mdp.grid().Id(bundle->config.start), sim,
                     opt_it->get<std::string>());
  return JsonResponse(200, SimReportToJson(bundle->mdp.grid(), report));
}

HttpResponse Service::GetOption(const std::string& ref) {
  std::string option_id;
  HttpResponse failure;
  const auto bundle = ResolveOption(ref, &option_id, &failure);
  if (!bundle) return failure;
  return JsonResponse(200, OptionToJson(bundle->mdp.grid(), bundle->Find(option_id), option_id));
}

HttpResponse Service::GetDiff(const std::string& ref, const std::string& other) {
  std::string a_id, b_id;
  HttpResponse failure;
  const auto a = ResolveOption(ref, &a_id, &failure);
  if (!a) return failure;
  const auto b = ResolveOption(other, &b_id, &failure);
  if (!b) return failure;
  if (a->mdp.grid().extents() != b->mdp.grid().extents() ||
      a->mdp.ToMapText() != b->mdp.ToMapText()) {
    return ErrorResponse(400, "options belong to different environments");
  }
  Json states = Json::array();
  for (StateId s : ActionDiff(a->Find(a_id), b->Find(b_id))) {
    states.push_back(StateToJson(a->mdp.grid().State(s)));
  }
  return JsonResponse(200, {{"option", ref}, {"other", other}, {"states", states}});
}

void Service::Wait(const std::string& job_id) {
  std::unique_lock<std::mutex> lock(jobs_mu_);
  jobs_cv_.wait(lock, [&] {
    auto it = jobs_.find(job_id);
    return it == jobs_.end() || it->second->status == JobStatus::kDone ||
           it->second->status == JobStatus::kFailed;
  });
}

void Service::WorkerLoop() {
  for (;;) {
    std::string id;
    {
      std::unique_lock<std::mutex> lock(jobs_mu_);
      jobs_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = queue_.front();
      queue_.pop_front();
      jobs_.at(id)->status = JobStatus::kRunning;
    }
    jobs_cv_.notify_all();
    RunJob(id);
    jobs_cv_.notify_all();
  }
}

void Service::RunJob(const std::string& job_id) {
  std::string env_id;
  SearchConfig cfg;
  {
    std::lock_guard<std::mutex> lock(jobs_mu_);
    const Job& job = *jobs_.at(job_id);
    env_id = job.env_id;
    cfg = job.config;
  }
  try {
    const Environment* env = FindEnv(env_id);
    if (env == nullptr) throw Error(ErrorCode::kIo, "environment " + env_id + " disappeared");
    const SearchResult result =
        CorridorSearch(*env->mdp, env->benchmark.q, cfg, [&](const SearchReport& r) {
          std::lock_guard<std::mutex> lock(jobs_mu_);
          jobs_.at(job_id)->progress = r;
        });
    Json doc = OptionsDocument(*env->mdp, cfg, result);
    auto bundle = std::make_shared<const OptionsBundle>(ParseOptionsDocument(doc));
    std::lock_guard<std::mutex> lock(jobs_mu_);
    Job& job = *jobs_.at(job_id);
    job.progress = result.report;
    job.canonical = CanonicalDump(doc);
    job.document = std::move(doc);
    job.bundle = std::move(bundle);
    job.status = JobStatus::kDone;
    Persist(job);
  } catch (const std::exception& e) {
    std::lock_guard<std::mutex> lock(jobs_mu_);
    Job& job = *jobs_.at(job_id);
    job.error = e.what();
    job.status = JobStatus::kFailed;
  }
}

void Service::Persist(const Job& job) {
  if (!config_.jobs_dir) return;
  const Json record = {{"job", job.id},
                       {"env", job.env_id},
                       {"status", JobStatusName(job.status)},
                       {"result", *job.document}};
  WriteTextFile(*config_.jobs_dir / (job.id + ".json"), CanonicalDump(record));
}

void Service::LoadPersisted() {
  static const std::regex kFile("j([0-9]+)\\.json");
  for (const auto& entry : std::filesystem::directory_iterator(*config_.jobs_dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, kFile)) continue;
    try {
      const Json record = ReadJsonFile(entry.path());
      auto job = std::make_unique<Job>();
      job->id = record.at("job").get<std::string>();
      job->env_id = record.at("env").get<std::string>();
      job->document = record.at("result");
      job->canonical = CanonicalDump(*job->document);
      auto bundle = std::make_shared<const OptionsBundle>(ParseOptionsDocument(*job->document));
      job->config = bundle->config;
      job->bundle = std::move(bundle);
      job->progress.depth = job->config.cells;
      job->status = JobStatus::kDone;
      next_job_ = std::max<std::uint64_t>(next_job_, std::stoull(m[1]) + 1);
      jobs_.emplace(job->id, std::move(job));
    } catch (const std::exception&) {
      // Unreadable records are left on disk and ignored.
    }
  }
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>()) {
  impl_->server.set_default_headers(
      {{"Access-Control-Allow-Origin", "*"},
       {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
       {"Access-Control-Allow-Headers", "Content-Type"}});
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse r = service.Handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  impl_->server.Get(".*", forward);
  impl_->server.Post(".*", forward);
  impl_->server.Options(".*", forward);
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::Serve() { return impl_->server.listen_after_bind(); }

void HttpServer::WaitUntilReady() { impl_->server.wait_until_ready(); }

void HttpServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace dna::tools
