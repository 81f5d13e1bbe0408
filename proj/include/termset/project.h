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

// A project is a directory holding a corpus, its term groups, trained
// context models, an optional classifier and expansion sessions:
//
//   project.json            metadata, job records, session list
//   corpus/sentences.jsonl  sentence cache
//   groups.jsonl            term groups
//   models/<ctype>.vec      target vectors (+ .vec.ctx context vectors)
//   mlp.json                optional classifier
//   sessions/<sid>.json     expansion sessions
//   validated/<category>.csv saved validated sets
//
// Every mutation is written to disk before the call returns. Readers take an
// immutable snapshot and never observe a half-applied mutation; mutations are
// serialized by a per-project writer lock.

#ifndef TERMSET_PROJECT_H_
#define TERMSET_PROJECT_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "termset/contexts.h"
#include "termset/corpus.h"
#include "termset/expansion.h"
#include "termset/mlp.h"
#include "termset/pipeline.h"
#include "termset/termgroup.h"

namespace termset {

enum class CorpusFormat { kText, kConllu };
std::string_view CorpusFormatName(CorpusFormat format);

enum class JobState { kQueued, kRunning, kDone, kFailed };
std::string_view JobStateName(JobState state);

struct Job {
  std::string id;
  std::string kind;  // "ingest" or "train"
  JobState state = JobState::kQueued;
  double progress = 0;
  std::string stage;  // pipeline stage while training
  std::string message;
};

struct Session {
  std::string id;
  ExpansionResult result;
};

struct ProjectMeta {
  std::string id;
  std::string name;
  std::optional<CorpusFormat> corpus_format;
  size_t documents = 0;
  size_t sentences = 0;
  bool trained = false;
  std::vector<ContextType> model_contexts;  // models present on disk
  std::map<ContextType, std::string> skipped_contexts;
  std::string pipeline_config;  // JSON of the last training request
  std::vector<std::string> sessions;  // in creation order
  std::map<std::string, std::string> saved;  // category -> validated file
  uint64_t next_session = 1;
  uint64_t next_job = 1;
};

// Everything a read needs, immutable once published.
struct ProjectState {
  ProjectMeta meta;
  std::shared_ptr<const Corpus> corpus;
  std::shared_ptr<const std::vector<TermGroup>> groups;
  std::shared_ptr<const GroupIndex> index;
  ModelSet models;
  std::shared_ptr<const MlpModel> mlp;
  std::map<std::string, std::shared_ptr<const Session>> sessions;
};

// Writes `content` to a sibling temporary file, syncs it and renames it over
// `path`.
void WriteFileAtomic(const std::filesystem::path &path, std::string_view content);
std::string ReadFile(const std::filesystem::path &path);

// Project ids double as directory names: [A-Za-z0-9_-]+, at most 64 chars.
bool IsValidProjectId(std::string_view id);

class Project {
 public:
  // Creates `dir` (which must not hold a project yet) and persists an empty
  // project. Throws kConflict if a project exists there.
  static std::unique_ptr<Project> Create(const std::filesystem::path &dir,
                                         std::string_view id,
                                         std::string_view name);
  // Restores a persisted project. Throws kNotFound when there is no
  // project.json and kFormat naming the missing or corrupt artifact. Jobs
  // left queued or running by a previous process are marked failed.
  static std::unique_ptr<Project> Open(const std::filesystem::path &dir);

  const std::filesystem::path &dir() const { return dir_; }
  std::shared_ptr<const ProjectState> Snapshot() const;

  // Jobs. CreateJob records a queued job; Run* execute it synchronously and
  // leave it done or failed (the error is also rethrown).
  Job CreateJob(std::string_view kind);
  std::optional<Job> GetJob(std::string_view job_id) const;
  std::vector<Job> Jobs() const;
  // Marks a queued job failed without running it.
  void FailJob(std::string_view job_id, std::string_view message);

  // Replaces the corpus. Groups, models and sessions built on the previous
  // corpus are discarded; saved validated sets are kept.
  void RunIngest(std::string_view job_id, std::string_view text,
                 CorpusFormat format);
  // Groups terms and trains one model per requested context. Replaces
  // groups and models and discards sessions.
  void RunTrain(std::string_view job_id, const PipelineConfig &config);

  // Fails fast with the error RunTrain would raise before doing any work
  // (no corpus, dependency contexts on an unparsed corpus, bad config).
  void CheckTrainable(const PipelineConfig &config) const;

  // Expansion sessions. Expand throws kConflict before training, kNotFound
  // for unknown seed ids.
  std::shared_ptr<const Session> Expand(std::string_view category,
                                        const std::vector<GroupId> &seed_ids,
                                        size_t k, size_t pool_size);
  std::shared_ptr<const Session> Validate(std::string_view session_id,
                                          GroupId group, bool completed);
  std::shared_ptr<const Session> Reexpand(std::string_view session_id,
                                          const std::vector<GroupId> &accepted);
  // Persists the session's validated set as validated/<category>.csv and
  // returns the path relative to the project directory.
  std::string SaveValidated(std::string_view session_id);

  void SetMlp(const MlpModel &model);

 private:
  explicit Project(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void Publish(std::shared_ptr<const ProjectState> state);
  void PersistMeta(const ProjectMeta &meta) const;
  void UpdateJob(std::string_view job_id, const std::function<void(Job &)> &update,
                 bool persist);
  std::shared_ptr<const Session> StoreSession(ProjectState &state,
                                              ExpansionResult result);

  std::filesystem::path dir_;
  std::mutex write_mu_;  // serializes mutations
  mutable std::mutex state_mu_;  // guards state_ pointer and jobs_
  std::shared_ptr<const ProjectState> state_;
  std::vector<Job> jobs_;
};

// Read views shared by the service and the command line so both print the
// same bytes for the same state.

// {total, offset, limit, items:[{id, canonical, frequency,
// members:[{surface, frequency}]}]}; `filter` is a case-insensitive substring
// of the canonical form or of any member.
std::string GroupsJson(const ProjectState &state, std::string_view filter,
                       size_t offset, size_t limit);
// {group_id, canonical, snippets:[{doc_id, sent_index, text,
// highlights:[[begin, end], ...]}]}; throws kNotFound for an unknown group.
std::string SnippetsJson(const ProjectState &state, GroupId group, size_t max_n);
std::string SessionJson(const ProjectState &state, const Session &session);
std::string JobJson(const Job &job);
std::string ProjectJson(const ProjectState &state);

// Group whose canonical form or member matches `term` after normalization.
std::optional<GroupId> ResolveTerm(const ProjectState &state, std::string_view term);

// Throws kConflict when the project has no trained models.
void RequireTrained(const ProjectState &state);

}  // namespace termset

#endif  // TERMSET_PROJECT_H_
