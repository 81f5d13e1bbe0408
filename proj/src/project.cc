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

#include "termset/project.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "termset/error.h"
#include "termset/text.h"

namespace termset {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMetaFile[] = "project.json";
constexpr char kCorpusFile[] = "corpus/sentences.jsonl";
constexpr char kGroupsFile[] = "groups.jsonl";
constexpr char kMlpFile[] = "mlp.json";

Error IoError(const fs::path &path, std::string_view what) {
  return Error(ErrorCode::kIo, std::string(what) + " " + path.string() + ": " +
                                   std::strerror(errno));
}

void SyncPath(const fs::path &path, int flags) {
  int fd = ::open(path.c_str(), flags);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::string ModelFile(ContextType ctype) {
  return "models/" + std::string(ContextTypeName(ctype)) + ".vec";
}

std::string SessionFile(std::string_view sid) {
  return "sessions/" + std::string(sid) + ".json";
}

// Category names become file names: [A-Za-z0-9_-] kept, other bytes %XX.
std::string CategoryFile(std::string_view category) {
  std::string out;
  for (unsigned char c : category) {
    if (std::isalnum(c) || c == '_' || c == '-') {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      out += buf;
    }
  }
  if (out.empty()) out = "%";
  return "validated/" + out + ".csv";
}

json JobToJsonValue(const Job &job) {
  return {{"id", job.id},
          {"kind", job.kind},
          {"state", std::string(JobStateName(job.state))},
          {"progress", job.progress},
          {"stage", job.stage},
          {"message", job.message}};
}

Job JobFromJsonValue(const json &j) {
  Job job;
  job.id = j.at("id").get<std::string>();
  job.kind = j.at("kind").get<std::string>();
  std::string state = j.at("state").get<std::string>();
  if (state == "queued") {
    job.state = JobState::kQueued;
  } else if (state == "running") {
    job.state = JobState::kRunning;
  } else if (state == "done") {
    job.state = JobState::kDone;
  } else if (state == "failed") {
    job.state = JobState::kFailed;
  } else {
    throw Error(ErrorCode::kFormat, "unknown job state '" + state + "'");
  }
  job.progress = j.at("progress").get<double>();
  job.stage = j.at("stage").get<std::string>();
  job.message = j.at("message").get<std::string>();
  return job;
}

ContextType ContextTypeField(const std::string &name) {
  auto ctype = ParseContextType(name);
  if (!ctype) throw Error(ErrorCode::kFormat, "unknown context type '" + name + "'");
  return *ctype;
}

json MetaToJsonValue(const ProjectMeta &meta, const std::vector<Job> &jobs) {
  json contexts = json::array();
  for (ContextType c : meta.model_contexts) contexts.push_back(ContextTypeName(c));
  json skipped = json::object();
  for (const auto &[c, reason] : meta.skipped_contexts) {
    skipped[std::string(ContextTypeName(c))] = reason;
  }
  json job_list = json::array();
  for (const Job &job : jobs) job_list.push_back(JobToJsonValue(job));
  json doc = {
      {"id", meta.id},
      {"name", meta.name},
      {"corpus_format", meta.corpus_format
                            ? json(std::string(CorpusFormatName(*meta.corpus_format)))
                            : json(nullptr)},
      {"documents", meta.documents},
      {"sentences", meta.sentences},
      {"trained", meta.trained},
      {"model_contexts", contexts},
      {"skipped_contexts", skipped},
      {"pipeline_config", meta.pipeline_config.empty()
                              ? json(nullptr)
                              : json::parse(meta.pipeline_config)},
      {"sessions", meta.sessions},
      {"saved", meta.saved},
      {"next_session", meta.next_session},
      {"next_job", meta.next_job},
      {"jobs", job_list}};
  return doc;
}

void MetaFromJsonValue(const json &doc, ProjectMeta &meta, std::vector<Job> &jobs) {
  meta.id = doc.at("id").get<std::string>();
  meta.name = doc.at("name").get<std::string>();
  const json &format = doc.at("corpus_format");
  if (format.is_null()) {
    meta.corpus_format.reset();
  } else if (format.get<std::string>() == "text") {
    meta.corpus_format = CorpusFormat::kText;
  } else if (format.get<std::string>() == "conllu") {
    meta.corpus_format = CorpusFormat::kConllu;
  } else {
    throw Error(ErrorCode::kFormat, "unknown corpus_format");
  }
  meta.documents = doc.at("documents").get<size_t>();
  meta.sentences = doc.at("sentences").get<size_t>();
  meta.trained = doc.at("trained").get<bool>();
  for (const auto &c : doc.at("model_contexts")) {
    meta.model_contexts.push_back(ContextTypeField(c.get<std::string>()));
  }
  for (const auto &[name, reason] : doc.at("skipped_contexts").items()) {
    meta.skipped_contexts[ContextTypeField(name)] = reason.get<std::string>();
  }
  const json &pipeline = doc.at("pipeline_config");
  meta.pipeline_config = pipeline.is_null() ? "" : pipeline.dump();
  meta.sessions = doc.at("sessions").get<std::vector<std::string>>();
  meta.saved = doc.at("saved").get<std::map<std::string, std::string>>();
  meta.next_session = doc.at("next_session").get<uint64_t>();
  meta.next_job = doc.at("next_job").get<uint64_t>();
  for (const auto &j : doc.at("jobs")) jobs.push_back(JobFromJsonValue(j));
}

size_t CountDocuments(const Corpus &corpus) {
  std::set<std::string> ids;
  for (const Sentence &s : corpus) ids.insert(s.doc_id);
  return ids.size();
}

Error MissingArtifact(const std::string &relative) {
  return Error(ErrorCode::kFormat, "project artifact missing: " + relative);
}

template <typename F>
auto WithArtifact(const std::string &relative, F &&f) {
  try {
    return f();
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kFormat || e.code() == ErrorCode::kIo) {
      throw Error(e.code(), relative + ": " + e.what(), e.field());
    }
    throw;
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kFormat, relative + ": " + e.what());
  }
}

}  // namespace

std::string_view CorpusFormatName(CorpusFormat format) {
  return format == CorpusFormat::kConllu ? "conllu" : "text";
}

std::string_view JobStateName(JobState state) {
  switch (state) {
    case JobState::kQueued: return "queued";
    case JobState::kRunning: return "running";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
  }
  return "failed";
}

void WriteFileAtomic(const fs::path &path, std::string_view content) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError(tmp, "cannot create");
  size_t written = 0;
  while (written < content.size()) {
    ssize_t n = ::write(fd, content.data() + written, content.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      throw IoError(tmp, "cannot write");
    }
    written += static_cast<size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) throw IoError(tmp, "cannot sync");
  if (::rename(tmp.c_str(), path.c_str()) != 0) throw IoError(path, "cannot rename onto");
  SyncPath(path.parent_path(), O_RDONLY | O_DIRECTORY);
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot read");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool IsValidProjectId(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

std::unique_ptr<Project> Project::Create(const fs::path &dir, std::string_view id,
                                         std::string_view name) {
  if (!IsValidProjectId(id)) {
    throw Error(ErrorCode::kInvalidArgument,
                "project id must match [A-Za-z0-9_-]{1,64}", "id");
  }
  if (fs::exists(dir / kMetaFile)) {
    throw Error(ErrorCode::kConflict, "project '" + std::string(id) + "' already exists");
  }
  std::unique_ptr<Project> project(new Project(dir));
  auto state = std::make_shared<ProjectState>();
  state->meta.id = std::string(id);
  state->meta.name = std::string(name);
  state->corpus = std::make_shared<const Corpus>();
  project->PersistMeta(state->meta);
  project->state_ = std::move(state);
  return project;
}

std::unique_ptr<Project> Project::Open(const fs::path &dir) {
  if (!fs::exists(dir / kMetaFile)) {
    throw Error(ErrorCode::kNotFound, "no project at " + dir.string());
  }
  std::unique_ptr<Project> project(new Project(dir));
  auto state = std::make_shared<ProjectState>();
  ProjectMeta &meta = state->meta;
  WithArtifact(kMetaFile, [&] {
    MetaFromJsonValue(json::parse(ReadFile(dir / kMetaFile)), meta, project->jobs_);
    return 0;
  });

  auto require = [&](const std::string &relative) {
    if (!fs::exists(dir / relative)) throw MissingArtifact(relative);
  };
  if (meta.corpus_format) {
    require(kCorpusFile);
    state->corpus = WithArtifact(kCorpusFile, [&] {
      return std::make_shared<const Corpus>(ReadCorpusCache(ReadFile(dir / kCorpusFile)));
    });
  } else {
    state->corpus = std::make_shared<const Corpus>();
  }
  if (meta.trained) {
    require(kGroupsFile);
    auto groups = WithArtifact(kGroupsFile, [&] {
      return std::make_shared<const std::vector<TermGroup>>(
          ReadGroups(ReadFile(dir / kGroupsFile)));
    });
    state->groups = groups;
    state->index = std::make_shared<const GroupIndex>(*groups);
    for (ContextType ctype : meta.model_contexts) {
      std::string file = ModelFile(ctype);
      require(file);
      require(file + ".ctx");
      state->models[ctype] = WithArtifact(file, [&] {
        return std::make_shared<const EmbeddingModel>(LoadModel((dir / file).string(), ctype));
      });
    }
  }
  if (fs::exists(dir / kMlpFile)) {
    state->mlp = WithArtifact(kMlpFile, [&] {
      return std::make_shared<const MlpModel>(MlpFromJson(ReadFile(dir / kMlpFile)));
    });
  }
  for (const std::string &sid : meta.sessions) {
    std::string file = SessionFile(sid);
    require(file);
    auto session = std::make_shared<Session>();
    session->id = sid;
    session->result =
        WithArtifact(file, [&] { return ExpansionFromJson(ReadFile(dir / file)); });
    state->sessions[sid] = std::move(session);
  }
  for (const auto &[category, file] : meta.saved) require(file);

  bool interrupted = false;
  for (Job &job : project->jobs_) {
    if (job.state == JobState::kQueued || job.state == JobState::kRunning) {
      job.state = JobState::kFailed;
      job.message = "interrupted: the server stopped before the job finished";
      interrupted = true;
    }
  }
  if (interrupted) project->PersistMeta(meta);
  project->state_ = std::move(state);
  return project;
}

std::shared_ptr<const ProjectState> Project::Snapshot() const {
  std::lock_guard<std::mutex> lock(state_mu_);
  return state_;
}

void Project::Publish(std::shared_ptr<const ProjectState> state) {
  std::lock_guard<std::mutex> lock(state_mu_);
  state_ = std::move(state);
}

void Project::PersistMeta(const ProjectMeta &meta) const {
  std::vector<Job> jobs;
  {
    std::lock_guard<std::mutex> lock(state_mu_);
    jobs = jobs_;
  }
  WriteFileAtomic(dir_ / kMetaFile, MetaToJsonValue(meta, jobs).dump(2) + "\n");
}

Job Project::CreateJob(std::string_view kind) {
  std::lock_guard<std::mutex> writer(write_mu_);
  auto state = std::make_shared<ProjectState>(*Snapshot());
  Job job;
  job.id = "j" + std::to_string(state->meta.next_job++);
  job.kind = std::string(kind);
  {
    std::lock_guard<std::mutex> lock(state_mu_);
    jobs_.push_back(job);
  }
  PersistMeta(state->meta);
  Publish(std::move(state));
  return job;
}

std::optional<Job> Project::GetJob(std::string_view job_id) const {
  std::lock_guard<std::mutex> lock(state_mu_);
  for (const Job &job : jobs_) {
    if (job.id == job_id) return job;
  }
  return std::nullopt;
}

std::vector<Job> Project::Jobs() const {
  std::lock_guard<std::mutex> lock(state_mu_);
  return jobs_;
}

void Project::UpdateJob(std::string_view job_id,
                        const std::function<void(Job &)> &update, bool persist) {
  {
    std::lock_guard<std::mutex> lock(state_mu_);
    auto it = std::find_if(jobs_.begin(), jobs_.end(),
                           [&](const Job &j) { return j.id == job_id; });
    if (it == jobs_.end()) {
      throw Error(ErrorCode::kNotFound, "unknown job '" + std::string(job_id) + "'");
    }
    update(*it);
  }
  if (persist) PersistMeta(Snapshot()->meta);
}

void Project::FailJob(std::string_view job_id, std::string_view message) {
  std::lock_guard<std::mutex> writer(write_mu_);
  UpdateJob(job_id, [&](Job &job) {
    job.state = JobState::kFailed;
    job.message = std::string(message);
  }, true);
}

void Project::RunIngest(std::string_view job_id, std::string_view text,
                        CorpusFormat format) {
  {
    std::lock_guard<std::mutex> writer(write_mu_);
    UpdateJob(job_id, [](Job &job) { job.state = JobState::kRunning; }, true);
  }
  try {
    Corpus corpus = format == CorpusFormat::kConllu ? IngestConllu(text)
                                                    : IngestPlaintext(text);
    std::lock_guard<std::mutex> writer(write_mu_);
    auto state = std::make_shared<ProjectState>(*Snapshot());
    WriteFileAtomic(dir_ / kCorpusFile, WriteCorpusCache(corpus));
    std::error_code ec;
    fs::remove(dir_ / kGroupsFile, ec);
    fs::remove_all(dir_ / "models", ec);
    fs::remove_all(dir_ / "sessions", ec);
    ProjectMeta &meta = state->meta;
    meta.corpus_format = format;
    meta.documents = CountDocuments(corpus);
    meta.sentences = corpus.size();
    meta.trained = false;
    meta.model_contexts.clear();
    meta.skipped_contexts.clear();
    meta.sessions.clear();
    state->corpus = std::make_shared<const Corpus>(std::move(corpus));
    state->groups.reset();
    state->index.reset();
    state->models.clear();
    state->sessions.clear();
    std::string message = std::to_string(meta.sentences) + " sentences in " +
                          std::to_string(meta.documents) + " documents";
    UpdateJob(job_id, [&](Job &job) {
      job.state = JobState::kDone;
      job.progress = 1.0;
      job.message = message;
    }, false);
    PersistMeta(meta);
    Publish(std::move(state));
  } catch (const std::exception &e) {
    std::string message = e.what();
    std::lock_guard<std::mutex> writer(write_mu_);
    UpdateJob(job_id, [&](Job &job) {
      job.state = JobState::kFailed;
      job.message = message;
    }, true);
    throw;
  }
}

void Project::CheckTrainable(const PipelineConfig &config) const {
  config.Validate();
  auto state = Snapshot();
  if (!state->meta.corpus_format || state->corpus->empty()) {
    throw Error(ErrorCode::kConflict, "ingest a corpus before training");
  }
  bool dependency = std::find(config.contexts.begin(), config.contexts.end(),
                              ContextType::kDependency) != config.contexts.end();
  if (dependency) {
    for (const Sentence &s : *state->corpus) {
      if (!s.Parsed()) {
        throw Error(ErrorCode::kMode,
                    "dependency contexts need a parsed (CoNLL-U) corpus", "contexts");
      }
    }
  }
}

void Project::RunTrain(std::string_view job_id, const PipelineConfig &config) {
  {
    std::lock_guard<std::mutex> writer(write_mu_);
    UpdateJob(job_id, [](Job &job) { job.state = JobState::kRunning; }, true);
  }
  try {
    CheckTrainable(config);
    // The pipeline reads an immutable corpus snapshot, so it runs without
    // the writer lock; jobs themselves are serialized by the caller.
    auto corpus = Snapshot()->corpus;
    PipelineOutput out = RunPipeline(*corpus, config, [&](const PipelineStage &s) {
      UpdateJob(job_id, [&](Job &job) {
        job.progress = s.fraction;
        job.stage = s.name;
      }, false);
    });

    std::lock_guard<std::mutex> writer(write_mu_);
    auto state = std::make_shared<ProjectState>(*Snapshot());
    std::error_code ec;
    fs::path staging = dir_ / "models.tmp";
    fs::remove_all(staging, ec);
    fs::create_directories(staging);
    for (const auto &[ctype, model] : out.models) {
      SaveModel(*model, (staging / (std::string(ContextTypeName(ctype)) + ".vec")).string());
    }
    WriteFileAtomic(dir_ / kGroupsFile, WriteGroups(out.groups));
    fs::remove_all(dir_ / "models", ec);
    fs::rename(staging, dir_ / "models");
    SyncPath(dir_, O_RDONLY | O_DIRECTORY);
    fs::remove_all(dir_ / "sessions", ec);

    ProjectMeta &meta = state->meta;
    meta.trained = true;
    meta.model_contexts.clear();
    for (const auto &[ctype, model] : out.models) meta.model_contexts.push_back(ctype);
    meta.skipped_contexts = out.skipped;
    meta.pipeline_config = PipelineConfigToJson(config);
    meta.sessions.clear();
    auto groups = std::make_shared<const std::vector<TermGroup>>(std::move(out.groups));
    state->index = std::make_shared<const GroupIndex>(*groups);
    state->groups = std::move(groups);
    state->models = std::move(out.models);
    state->sessions.clear();

    std::string message = std::to_string(state->groups->size()) + " groups, " +
                          std::to_string(state->models.size()) + " models";
    for (const auto &[ctype, reason] : meta.skipped_contexts) {
      message += "; " + std::string(ContextTypeName(ctype)) + " skipped: " + reason;
    }
    UpdateJob(job_id, [&](Job &job) {
      job.state = JobState::kDone;
      job.progress = 1.0;
      job.stage = "done";
      job.message = message;
    }, false);
    PersistMeta(meta);
    Publish(std::move(state));
  } catch (const std::exception &e) {
    std::string message = e.what();
    std::lock_guard<std::mutex> writer(write_mu_);
    UpdateJob(job_id, [&](Job &job) {
      job.state = JobState::kFailed;
      job.message = message;
    }, true);
    throw;
  }
}

void RequireTrained(const ProjectState &state) {
  if (!state.meta.trained || state.models.empty()) {
    throw Error(ErrorCode::kConflict,
                state.meta.trained ? "training produced no context models"
                                   : "the project has no trained models; run train first");
  }
}

std::shared_ptr<const Session> Project::StoreSession(ProjectState &state,
                                                     ExpansionResult result) {
  auto session = std::make_shared<Session>();
  session->id = "s" + std::to_string(state.meta.next_session++);
  session->result = std::move(result);
  WriteFileAtomic(dir_ / SessionFile(session->id), SessionJson(state, *session));
  state.meta.sessions.push_back(session->id);
  state.sessions[session->id] = session;
  PersistMeta(state.meta);
  return session;
}

std::shared_ptr<const Session> Project::Expand(std::string_view category,
                                               const std::vector<GroupId> &seed_ids,
                                               size_t k, size_t pool_size) {
  std::lock_guard<std::mutex> writer(write_mu_);
  auto state = std::make_shared<ProjectState>(*Snapshot());
  RequireTrained(*state);
  if (seed_ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "seed set is empty", "seed_ids");
  }
  SeedSet seed;
  seed.category = std::string(category);
  for (size_t i = 0; i < seed_ids.size(); ++i) {
    if (!state->index->Contains(seed_ids[i])) {
      throw Error(ErrorCode::kNotFound,
                  "unknown group id " + std::to_string(seed_ids[i]),
                  "seed_ids[" + std::to_string(i) + "]");
    }
    seed.ids.insert(seed_ids[i]);
  }
  ExpansionResult result =
      termset::Expand(state->models, state->mlp.get(), seed, k, pool_size);
  auto session = StoreSession(*state, std::move(result));
  Publish(std::move(state));
  return session;
}

namespace {

std::shared_ptr<const Session> FindSession(const ProjectState &state,
                                           std::string_view session_id) {
  auto it = state.sessions.find(std::string(session_id));
  if (it == state.sessions.end()) {
    throw Error(ErrorCode::kNotFound,
                "unknown session '" + std::string(session_id) + "'");
  }
  return it->second;
}

}  // namespace

std::shared_ptr<const Session> Project::Validate(std::string_view session_id,
                                                 GroupId group, bool completed) {
  std::lock_guard<std::mutex> writer(write_mu_);
  auto state = std::make_shared<ProjectState>(*Snapshot());
  auto session = std::make_shared<Session>(*FindSession(*state, session_id));
  bool present = std::any_of(session->result.items.begin(), session->result.items.end(),
                             [&](const Candidate &c) { return c.group == group; });
  if (!present) {
    throw Error(ErrorCode::kInvalidArgument,
                "group " + std::to_string(group) + " is not part of session " +
                    session->id,
                "group_id");
  }
  if (completed) {
    session->result.validated.insert(group);
  } else {
    session->result.validated.erase(group);
  }
  WriteFileAtomic(dir_ / SessionFile(session->id), SessionJson(*state, *session));
  state->sessions[session->id] = session;
  Publish(std::move(state));
  return session;
}

std::shared_ptr<const Session> Project::Reexpand(std::string_view session_id,
                                                 const std::vector<GroupId> &accepted) {
  std::lock_guard<std::mutex> writer(write_mu_);
  auto state = std::make_shared<ProjectState>(*Snapshot());
  RequireTrained(*state);
  auto previous = FindSession(*state, session_id);
  std::set<GroupId> accepted_set(accepted.begin(), accepted.end());
  ExpansionResult result = termset::Reexpand(previous->result, accepted_set,
                                             state->models, state->mlp.get());
  auto session = StoreSession(*state, std::move(result));
  Publish(std::move(state));
  return session;
}

std::string Project::SaveValidated(std::string_view session_id) {
  std::lock_guard<std::mutex> writer(write_mu_);
  auto state = std::make_shared<ProjectState>(*Snapshot());
  auto session = FindSession(*state, session_id);
  std::string file = CategoryFile(session->result.seed.category);
  WriteFileAtomic(dir_ / file, ExportValidatedCsv(session->result, *state->index));
  state->meta.saved[session->result.seed.category] = file;
  PersistMeta(state->meta);
  Publish(std::move(state));
  return file;
}

void Project::SetMlp(const MlpModel &model) {
  std::lock_guard<std::mutex> writer(write_mu_);
  auto state = std::make_shared<ProjectState>(*Snapshot());
  WriteFileAtomic(dir_ / kMlpFile, MlpToJson(model));
  state->mlp = std::make_shared<const MlpModel>(model);
  Publish(std::move(state));
}

std::string GroupsJson(const ProjectState &state, std::string_view filter,
                       size_t offset, size_t limit) {
  std::string needle = AsciiLower(filter);
  std::vector<const TermGroup *> matches;
  if (state.groups) {
    for (const TermGroup &g : *state.groups) {
      bool hit = needle.empty() || AsciiLower(g.canonical).find(needle) != std::string::npos;
      for (size_t i = 0; !hit && i < g.members.size(); ++i) {
        hit = AsciiLower(g.members[i].surface).find(needle) != std::string::npos;
      }
      if (hit) matches.push_back(&g);
    }
  }
  json items = json::array();
  for (size_t i = offset; i < matches.size() && i - offset < limit; ++i) {
    const TermGroup &g = *matches[i];
    json members = json::array();
    for (const Term &t : g.members) {
      members.push_back({{"surface", t.surface}, {"frequency", t.frequency}});
    }
    items.push_back({{"id", g.id},
                     {"canonical", g.canonical},
                     {"frequency", g.frequency},
                     {"members", members}});
  }
  json doc = {{"total", matches.size()},
              {"offset", offset},
              {"limit", limit},
              {"items", items}};
  return doc.dump();
}

std::string SnippetsJson(const ProjectState &state, GroupId group, size_t max_n) {
  const TermGroup *found = nullptr;
  if (state.groups) {
    for (const TermGroup &g : *state.groups) {
      if (g.id == group) {
        found = &g;
        break;
      }
    }
  }
  if (found == nullptr) {
    throw Error(ErrorCode::kNotFound, "unknown group id " + std::to_string(group));
  }
  std::vector<std::string> members;
  for (const Term &t : found->members) members.push_back(t.surface);
  json snippets = json::array();
  for (const Snippet &s : FindSnippets(*state.corpus, members, max_n)) {
    json highlights = json::array();
    for (const auto &[begin, end] : s.highlights) highlights.push_back({begin, end});
    snippets.push_back({{"doc_id", s.doc_id},
                        {"sent_index", s.sent_index},
                        {"text", s.text},
                        {"highlights", highlights}});
  }
  json doc = {{"group_id", group}, {"canonical", found->canonical}, {"snippets", snippets}};
  return doc.dump();
}

std::string SessionJson(const ProjectState &state, const Session &session) {
  return ExpansionToJson(session.result, *state.index, session.id);
}

std::string JobJson(const Job &job) { return JobToJsonValue(job).dump(); }

std::string ProjectJson(const ProjectState &state) {
  const ProjectMeta &meta = state.meta;
  json contexts = json::array();
  for (ContextType c : meta.model_contexts) contexts.push_back(ContextTypeName(c));
  json skipped = json::object();
  for (const auto &[c, reason] : meta.skipped_contexts) {
    skipped[std::string(ContextTypeName(c))] = reason;
  }
  json doc = {
      {"id", meta.id},
      {"name", meta.name},
      {"corpus_format", meta.corpus_format
                            ? json(std::string(CorpusFormatName(*meta.corpus_format)))
                            : json(nullptr)},
      {"documents", meta.documents},
      {"sentences", meta.sentences},
      {"trained", meta.trained},
      {"groups", state.groups ? state.groups->size() : 0},
      {"contexts", contexts},
      {"skipped_contexts", skipped},
      {"mlp", state.mlp != nullptr},
      {"sessions", meta.sessions},
      {"saved", meta.saved}};
  return doc.dump();
}

std::optional<GroupId> ResolveTerm(const ProjectState &state, std::string_view term) {
  if (!state.groups) return std::nullopt;
  std::string needle = Normalize(term);
  if (needle.empty()) return std::nullopt;
  for (const TermGroup &g : *state.groups) {
    if (Normalize(g.canonical) == needle) return g.id;
  }
  for (const TermGroup &g : *state.groups) {
    for (const Term &t : g.members) {
      if (Normalize(t.surface) == needle) return g.id;
    }
  }
  return std::nullopt;
}

}  // namespace termset
