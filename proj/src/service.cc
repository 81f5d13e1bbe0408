// Copyright 2026 The termset Authors.
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

#include "termset/service.h"

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "termset/error.h"
#include "termset/project.h"
#include "termset/text.h"

namespace termset {

namespace fs = std::filesystem;
using nlohmann::json;

void ServiceConfig::ApplyJson(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  }
  for (const auto &[key, value] : doc.items()) {
    if (key == "host") {
      if (!value.is_string()) throw Error(ErrorCode::kInvalidArgument, "expected a string", key);
      host = value.get<std::string>();
    } else if (key == "port") {
      if (!value.is_number_integer() || value.get<int64_t>() < 0 ||
          value.get<int64_t>() > 65535) {
        throw Error(ErrorCode::kInvalidArgument, "expected a port number", key);
      }
      port = value.get<int>();
    } else if (key == "data_root") {
      if (!value.is_string()) throw Error(ErrorCode::kInvalidArgument, "expected a string", key);
      data_root = value.get<std::string>();
    } else if (key == "web_root") {
      if (!value.is_string()) throw Error(ErrorCode::kInvalidArgument, "expected a string", key);
      web_root = fs::path(value.get<std::string>());
    } else if (key == "pipeline") {
      ApplyPipelineJson(value.dump(), pipeline, "pipeline");
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown field", key);
    }
  }
}

ServiceConfig ServiceConfig::LoadFile(const fs::path &path) {
  ServiceConfig config;
  config.ApplyJson(ReadFile(path));
  return config;
}

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return 400;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict:
    case ErrorCode::kMode: return 409;
    default: return 500;
  }
}

namespace {

// Runs submitted tasks one at a time in submission order.
class JobQueue {
 public:
  JobQueue() : thread_([this] { Loop(); }) {}
  ~JobQueue() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      stopping_ = true;
    }
    cv_.notify_all();
    thread_.join();
  }

  void Submit(std::function<void()> task) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      tasks_.push_back(std::move(task));
      ++pending_;
    }
    cv_.notify_all();
  }

  void WaitIdle() {
    std::unique_lock<std::mutex> lock(mu_);
    idle_cv_.wait(lock, [&] { return pending_ == 0; });
  }

  bool Busy() {
    std::lock_guard<std::mutex> lock(mu_);
    return pending_ > 0;
  }

 private:
  void Loop() {
    for (;;) {
      std::function<void()> task;
      {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [&] { return stopping_ || !tasks_.empty(); });
        if (tasks_.empty()) return;
        task = std::move(tasks_.front());
        tasks_.pop_front();
      }
      try {
        task();
      } catch (...) {
        // Failures are recorded on the job itself.
      }
      {
        std::lock_guard<std::mutex> lock(mu_);
        --pending_;
      }
      idle_cv_.notify_all();
    }
  }

  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable idle_cv_;
  std::deque<std::function<void()>> tasks_;
  size_t pending_ = 0;
  bool stopping_ = false;
  std::thread thread_;
};

json ParseBody(const httplib::Request &req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "request body must be a JSON object", "body");
  }
  return body;
}

std::vector<GroupId> IdList(const json &body, const std::string &key) {
  auto it = body.find(key);
  if (it == body.end()) throw Error(ErrorCode::kInvalidArgument, "missing field", key);
  if (!it->is_array()) throw Error(ErrorCode::kInvalidArgument, "expected an array", key);
  std::vector<GroupId> ids;
  for (size_t i = 0; i < it->size(); ++i) {
    if (!(*it)[i].is_number_integer()) {
      throw Error(ErrorCode::kInvalidArgument, "expected an integer group id",
                  key + "[" + std::to_string(i) + "]");
    }
    ids.push_back((*it)[i].get<GroupId>());
  }
  return ids;
}

size_t SizeField(const json &body, const std::string &key, size_t fallback) {
  auto it = body.find(key);
  if (it == body.end()) return fallback;
  if (!it->is_number_integer() || it->get<int64_t>() < 0) {
    throw Error(ErrorCode::kInvalidArgument, "expected a nonnegative integer", key);
  }
  return it->get<size_t>();
}

size_t SizeParam(const httplib::Request &req, const std::string &key, size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string value = req.get_param_value(key);
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos ||
      value.size() > 18) {
    throw Error(ErrorCode::kInvalidArgument, "expected a nonnegative integer", key);
  }
  return std::stoull(value);
}

GroupId GroupIdParam(const std::string &text) {
  if (text.empty() || text.size() > 18 ||
      text.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::kNotFound, "unknown group id '" + text + "'");
  }
  return std::stoll(text);
}

void SendJson(httplib::Response &res, const std::string &body, int status = 200) {
  res.status = status;
  res.set_content(body, "application/json");
}

void SendError(httplib::Response &res, const Error &e) {
  json body = {{"code", std::string(ErrorCodeName(e.code()))}, {"message", e.what()}};
  if (!e.field().empty()) body["field"] = e.field();
  SendJson(res, body.dump(), HttpStatus(e.code()));
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceConfig c) : config(std::move(c)) {}

  Project &GetProject(const std::string &id) {
    std::lock_guard<std::mutex> lock(projects_mu);
    auto it = projects.find(id);
    if (it != projects.end()) return *it->second;
    if (!IsValidProjectId(id)) {
      throw Error(ErrorCode::kNotFound, "unknown project '" + id + "'");
    }
    fs::path dir = config.data_root / id;
    if (!fs::exists(dir / "project.json")) {
      throw Error(ErrorCode::kNotFound, "unknown project '" + id + "'");
    }
    auto project = Project::Open(dir);
    Project &ref = *project;
    projects[id] = std::move(project);
    return ref;
  }

  std::string NextProjectId() {
    uint64_t next = 1;
    std::error_code ec;
    for (const auto &entry : fs::directory_iterator(config.data_root, ec)) {
      std::string name = entry.path().filename().string();
      if (name.size() > 1 && name[0] == 'p' &&
          name.find_first_not_of("0123456789", 1) == std::string::npos &&
          name.size() < 19) {
        next = std::max<uint64_t>(next, std::stoull(name.substr(1)) + 1);
      }
    }
    return "p" + std::to_string(next);
  }

  using Handler = std::function<void(const httplib::Request &, httplib::Response &)>;
  static httplib::Server::Handler Wrap(Handler handler) {
    return [handler](const httplib::Request &req, httplib::Response &res) {
      try {
        handler(req, res);
      } catch (const Error &e) {
        SendError(res, e);
      } catch (const std::exception &e) {
        SendError(res, Error(ErrorCode::kInternal, e.what()));
      }
    };
  }

  void Routes() {
    server.Post("/projects", Wrap([this](const auto &req, auto &res) {
      json body = ParseBody(req);
      std::string name;
      if (auto it = body.find("name"); it != body.end()) {
        if (!it->is_string()) throw Error(ErrorCode::kInvalidArgument, "expected a string", "name");
        name = it->template get<std::string>();
      } else {
        throw Error(ErrorCode::kInvalidArgument, "missing field", "name");
      }
      std::lock_guard<std::mutex> lock(create_mu);
      std::string id;
      if (auto it = body.find("id"); it != body.end()) {
        if (!it->is_string() || !IsValidProjectId(it->template get<std::string>())) {
          throw Error(ErrorCode::kInvalidArgument,
                      "project id must match [A-Za-z0-9_-]{1,64}", "id");
        }
        id = it->template get<std::string>();
      } else {
        id = NextProjectId();
      }
      auto project = Project::Create(config.data_root / id, id, name);
      {
        std::lock_guard<std::mutex> plock(projects_mu);
        projects[id] = std::move(project);
      }
      SendJson(res, json({{"id", id}, {"name", name}}).dump(), 201);
    }));

    server.Get("/projects", Wrap([this](const auto &, auto &res) {
      std::vector<std::string> ids;
      std::error_code ec;
      for (const auto &entry : fs::directory_iterator(config.data_root, ec)) {
        if (fs::exists(entry.path() / "project.json")) {
          ids.push_back(entry.path().filename().string());
        }
      }
      std::sort(ids.begin(), ids.end());
      json out = json::array();
      for (const std::string &id : ids) {
        out.push_back(json::parse(ProjectJson(*GetProject(id).Snapshot())));
      }
      SendJson(res, out.dump());
    }));

    server.Get(R"(/projects/([^/]+))", Wrap([this](const auto &req, auto &res) {
      SendJson(res, ProjectJson(*GetProject(req.matches[1]).Snapshot()));
    }));

    server.Post(R"(/projects/([^/]+)/corpus)", Wrap([this](const auto &req, auto &res) {
      Project &project = GetProject(req.matches[1]);
      bool conllu = req.get_header_value("Content-Type").find("conllu") != std::string::npos ||
                    req.get_param_value("format") == "conllu";
      if (req.has_param("format") && req.get_param_value("format") != "conllu" &&
          req.get_param_value("format") != "text") {
        throw Error(ErrorCode::kInvalidArgument, "format must be text or conllu", "format");
      }
      Job job = project.CreateJob("ingest");
      auto text = std::make_shared<std::string>(req.body);
      CorpusFormat format = conllu ? CorpusFormat::kConllu : CorpusFormat::kText;
      jobs.Submit([&project, job, text, format] {
        project.RunIngest(job.id, *text, format);
      });
      SendJson(res, JobJson(job), 202);
    }));

    server.Post(R"(/projects/([^/]+)/train)", Wrap([this](const auto &req, auto &res) {
      Project &project = GetProject(req.matches[1]);
      PipelineConfig pipeline = config.pipeline;
      ApplyPipelineJson(req.body.empty() ? "{}" : req.body, pipeline);
      if (jobs.Busy()) {
        // An earlier job may still change the corpus; check the rest later.
        pipeline.Validate();
      } else {
        project.CheckTrainable(pipeline);
      }
      Job job = project.CreateJob("train");
      jobs.Submit([&project, job, pipeline] { project.RunTrain(job.id, pipeline); });
      SendJson(res, JobJson(job), 202);
    }));

    server.Get(R"(/projects/([^/]+)/jobs)", Wrap([this](const auto &req, auto &res) {
      json out = json::array();
      for (const Job &job : GetProject(req.matches[1]).Jobs()) {
        out.push_back(json::parse(JobJson(job)));
      }
      SendJson(res, out.dump());
    }));

    server.Get(R"(/projects/([^/]+)/jobs/([^/]+))", Wrap([this](const auto &req, auto &res) {
      auto job = GetProject(req.matches[1]).GetJob(req.matches[2].str());
      if (!job) throw Error(ErrorCode::kNotFound, "unknown job '" + req.matches[2].str() + "'");
      SendJson(res, JobJson(*job));
    }));

    server.Get(R"(/projects/([^/]+)/groups)", Wrap([this](const auto &req, auto &res) {
      auto state = GetProject(req.matches[1]).Snapshot();
      SendJson(res, GroupsJson(*state, req.get_param_value("filter"),
                               SizeParam(req, "offset", 0), SizeParam(req, "limit", 50)));
    }));

    server.Get(R"(/projects/([^/]+)/groups/([^/]+)/snippets)",
               Wrap([this](const auto &req, auto &res) {
      auto state = GetProject(req.matches[1]).Snapshot();
      GroupId gid = GroupIdParam(req.matches[2]);
      size_t max_n = SizeParam(req, "max_n", 10);
      if (max_n == 0) throw Error(ErrorCode::kInvalidArgument, "must be >= 1", "max_n");
      SendJson(res, SnippetsJson(*state, gid, max_n));
    }));

    server.Post(R"(/projects/([^/]+)/expand)", Wrap([this](const auto &req, auto &res) {
      Project &project = GetProject(req.matches[1]);
      json body = ParseBody(req);
      auto category = body.find("category");
      if (category == body.end() || !category->is_string()) {
        throw Error(ErrorCode::kInvalidArgument, "expected a string", "category");
      }
      std::vector<GroupId> ids = IdList(body, "seed_ids");
      size_t k = SizeField(body, "k", kDefaultK);
      size_t pool = SizeField(body, "pool_size", kDefaultPoolSize);
      auto session = project.Expand(category->get<std::string>(), ids, k, pool);
      SendJson(res, SessionJson(*project.Snapshot(), *session));
    }));

    server.Get(R"(/projects/([^/]+)/sessions/([^/]+))", Wrap([this](const auto &req, auto &res) {
      auto state = GetProject(req.matches[1]).Snapshot();
      auto it = state->sessions.find(req.matches[2].str());
      if (it == state->sessions.end()) {
        throw Error(ErrorCode::kNotFound, "unknown session '" + req.matches[2].str() + "'");
      }
      SendJson(res, SessionJson(*state, *it->second));
    }));

    server.Post(R"(/projects/([^/]+)/sessions/([^/]+)/validate)",
                Wrap([this](const auto &req, auto &res) {
      Project &project = GetProject(req.matches[1]);
      json body = ParseBody(req);
      auto gid = body.find("group_id");
      if (gid == body.end() || !gid->is_number_integer()) {
        throw Error(ErrorCode::kInvalidArgument, "expected an integer", "group_id");
      }
      auto completed = body.find("completed");
      if (completed == body.end() || !completed->is_boolean()) {
        throw Error(ErrorCode::kInvalidArgument, "expected a boolean", "completed");
      }
      auto session = project.Validate(req.matches[2].str(), gid->get<GroupId>(),
                                      completed->get<bool>());
      SendJson(res, SessionJson(*project.Snapshot(), *session));
    }));

    server.Post(R"(/projects/([^/]+)/sessions/([^/]+)/reexpand)",
                Wrap([this](const auto &req, auto &res) {
      Project &project = GetProject(req.matches[1]);
      json body = ParseBody(req);
      auto session = project.Reexpand(req.matches[2].str(), IdList(body, "accepted_ids"));
      SendJson(res, SessionJson(*project.Snapshot(), *session));
    }));

    server.Post(R"(/projects/([^/]+)/sessions/([^/]+)/save)",
                Wrap([this](const auto &req, auto &res) {
      Project &project = GetProject(req.matches[1]);
      std::string sid = req.matches[2].str();
      std::string path = project.SaveValidated(sid);
      auto state = project.Snapshot();
      const Session &session = *state->sessions.at(sid);
      json out = {{"session_id", sid},
                  {"category", session.result.seed.category},
                  {"path", path},
                  {"count", session.result.validated.size()}};
      SendJson(res, out.dump());
    }));

    server.Get(R"(/projects/([^/]+)/sessions/([^/]+)/export)",
               Wrap([this](const auto &req, auto &res) {
      auto state = GetProject(req.matches[1]).Snapshot();
      auto it = state->sessions.find(req.matches[2].str());
      if (it == state->sessions.end()) {
        throw Error(ErrorCode::kNotFound, "unknown session '" + req.matches[2].str() + "'");
      }
      res.set_content(ExportValidatedCsv(it->second->result, *state->index), "text/csv");
    }));

    if (config.web_root && fs::is_directory(*config.web_root)) {
      server.set_mount_point("/", config.web_root->string());
    }
  }

  ServiceConfig config;
  httplib::Server server;
  std::mutex projects_mu;
  std::mutex create_mu;
  std::map<std::string, std::unique_ptr<Project>> projects;
  // Declared after `projects` so queued jobs finish before projects go away.
  JobQueue jobs;
  std::thread listener;
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
  std::error_code ec;
  fs::create_directories(impl_->config.data_root, ec);
  if (!fs::is_directory(impl_->config.data_root)) {
    throw Error(ErrorCode::kIo,
                "cannot create data root " + impl_->config.data_root.string());
  }
  impl_->Routes();
}

Service::~Service() { Stop(); }

int Service::Start() {
  int port = impl_->config.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->config.host);
    if (port < 0) throw Error(ErrorCode::kIo, "cannot bind " + impl_->config.host);
  } else if (!impl_->server.bind_to_port(impl_->config.host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + impl_->config.host + ":" +
                                    std::to_string(port));
  }
  impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::Run() {
  if (!impl_->server.listen(impl_->config.host, impl_->config.port)) {
    throw Error(ErrorCode::kIo, "cannot listen on " + impl_->config.host + ":" +
                                    std::to_string(impl_->config.port));
  }
}

void Service::Stop() {
  impl_->server.stop();
  if (impl_->listener.joinable()) impl_->listener.join();
}

void Service::WaitIdle() { impl_->jobs.WaitIdle(); }

}  // namespace termset
