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

// JSON-over-HTTP front end for projects under a data root.
//
//   POST /projects                                 {name, id?} -> {id, name}
//   GET  /projects                                 project summaries
//   GET  /projects/{id}                            project summary
//   POST /projects/{id}/corpus                     raw text or CoNLL-U -> Job
//   POST /projects/{id}/train                      pipeline config -> Job
//   GET  /projects/{id}/jobs                       all jobs
//   GET  /projects/{id}/jobs/{jid}                 Job
//   GET  /projects/{id}/groups?filter&offset&limit paged groups
//   GET  /projects/{id}/groups/{gid}/snippets?max_n
//   POST /projects/{id}/expand                     {category, seed_ids, k?, pool_size?}
//   GET  /projects/{id}/sessions/{sid}             expansion result
//   POST /projects/{id}/sessions/{sid}/validate    {group_id, completed}
//   POST /projects/{id}/sessions/{sid}/reexpand    {accepted_ids}
//   POST /projects/{id}/sessions/{sid}/save        -> {session_id, category, path, count}
//   GET  /projects/{id}/sessions/{sid}/export      validated set as CSV
//
// The corpus format is CoNLL-U when the Content-Type mentions "conllu" or the
// query has format=conllu, plain text otherwise. Errors are
// {code, message, field?} with status 400 (bad request), 404 (unknown id),
// 409 (wrong state) or 500. Jobs run one at a time on a background worker in
// submission order; reads see the last completed state.

#ifndef TERMSET_SERVICE_H_
#define TERMSET_SERVICE_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "termset/error.h"
#include "termset/pipeline.h"

namespace termset {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_root = "termset-data";
  // Static files served under "/" when the directory exists.
  std::optional<std::filesystem::path> web_root;
  // Defaults for train requests; request fields override them.
  PipelineConfig pipeline;

  // {host, port, data_root, web_root, pipeline:{...}}; missing keys keep
  // current values. Throws kInvalidArgument naming the field.
  void ApplyJson(std::string_view json_text);
  static ServiceConfig LoadFile(const std::filesystem::path &path);
};

// HTTP status for an error code.
int HttpStatus(ErrorCode code);

class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service &) = delete;
  Service &operator=(const Service &) = delete;

  // Binds (port 0 picks a free port), serves on a background thread and
  // returns the bound port. Throws kIo when binding fails.
  int Start();
  // Binds and serves on the calling thread until Stop().
  void Run();
  void Stop();
  // Blocks until no job is queued or running.
  void WaitIdle();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace termset

#endif  // TERMSET_SERVICE_H_
