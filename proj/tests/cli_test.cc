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


#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "termset/project.h"
#include "termset/service.h"
#include "test_util.h"

namespace termset {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::TempDir;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Quote(const std::string &arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Runs the command-line tool with `args`, capturing both streams.
CliResult RunCli(const TempDir &tmp, const std::vector<std::string> &args) {
  std::string command = Quote(TERMSET_CLI_PATH);
  for (const std::string &a : args) command += " " + Quote(a);
  fs::path out = tmp.path() / "stdout.txt";
  fs::path err = tmp.path() / "stderr.txt";
  command += " >" + Quote(out.string()) + " 2>" + Quote(err.string());
  int status = std::system(command.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadFile(out);
  r.err = ReadFile(err);
  return r;
}

struct ToyProject {
  TempDir tmp;
  std::string root = (tmp.path() / "data").string();

  std::vector<std::string> Args(std::vector<std::string> rest) const {
    std::vector<std::string> args = {"--data-root", root, "--project", "toy"};
    args.insert(args.end(), rest.begin(), rest.end());
    return args;
  }
  CliResult Run(std::vector<std::string> rest) const { return RunCli(tmp, Args(rest)); }

  ToyProject() {
    CliResult ingest =
        Run({"ingest", testing::SourcePath("data/toy/toy.conllu"), "--conllu"});
    REQUIRE(ingest.exit_code == 0);
    CHECK(ingest.out.find("500 sentences in 50 documents") != std::string::npos);
    CliResult train = Run({"train", "--dim", "20", "--epochs", "5", "--min-count", "1",
                           "--subsample", "0"});
    REQUIRE(train.exit_code == 0);
    CHECK(train.out.find("trained 3 context models") != std::string::npos);
  }
};

TEST_CASE("command line: ingest, train, groups and expand") {
  ToyProject toy;
  CliResult groups = toy.Run({"groups", "--filter", "york"});
  CHECK(groups.exit_code == 0);
  CHECK(groups.out.find("New York City") != std::string::npos);
  CHECK(groups.out.find("1 groups match") != std::string::npos);

  CliResult expand = toy.Run({"expand", "--category", "langs", "--seed", "java,python",
                              "--k", "5"});
  CHECK(expand.exit_code == 0);
  CHECK(expand.out.find("session s1") != std::string::npos);
  CHECK(expand.out.find("seed") != std::string::npos);
  CHECK(expand.out.find("1.0000") != std::string::npos);

  CliResult json_out = toy.Run({"--output", "json", "expand", "--category", "langs",
                                "--seed", "Java, Python", "--k", "5"});
  REQUIRE(json_out.exit_code == 0);
  json session = json::parse(json_out.out);
  CHECK(session["session_id"] == "s2");
  CHECK(session["items"].size() == 7);

  GroupId pick = session["items"][2]["group_id"];
  CHECK(toy.Run({"validate", "--session", "s2", "--group", std::to_string(pick)})
            .exit_code == 0);
  CliResult save = toy.Run({"--output", "json", "save", "--session", "s2"});
  REQUIRE(save.exit_code == 0);
  CHECK(json::parse(save.out)["count"] == 1);
  CliResult exported = toy.Run({"export", "--category", "langs", "--out", "-"});
  CHECK(exported.exit_code == 0);
  CHECK(exported.out.find("," + std::to_string(pick) + ",") != std::string::npos);
  CliResult reexpand = toy.Run({"reexpand", "--session", "s2", "--accept",
                                std::to_string(pick)});
  CHECK(reexpand.exit_code == 0);
  CHECK(reexpand.out.find("session s3") != std::string::npos);
  CHECK(toy.Run({"info"}).exit_code == 0);
}

TEST_CASE("command line: exit codes") {
  TempDir tmp;
  std::string root = (tmp.path() / "data").string();
  // Usage errors.
  CHECK(RunCli(tmp, {}).exit_code == 1);
  CHECK(RunCli(tmp, {"frobnicate"}).exit_code == 1);
  CHECK(RunCli(tmp, {"--output", "xml", "info"}).exit_code == 1);
  CHECK(RunCli(tmp, {"--data-root", root, "expand", "--seed", "x"}).exit_code == 1);
  CHECK(RunCli(tmp, {"--data-root", root, "--project", "a b", "info"}).exit_code == 1);
  // Data and state errors.
  CliResult missing = RunCli(tmp, {"--data-root", root, "info"});
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("not_found") != std::string::npos);
  CHECK(RunCli(tmp, {"--data-root", root, "ingest", "/no/such/file.txt"}).exit_code == 2);
  fs::path text = tmp.path() / "tiny.txt";
  WriteFileAtomic(text, "Alpha beta gamma. Alpha beta gamma.");
  CHECK(RunCli(tmp, {"--data-root", root, "ingest", text.string()}).exit_code == 0);
  CliResult untrained = RunCli(tmp, {"--data-root", root, "expand", "--category", "c",
                                     "--seed", "alpha"});
  CHECK(untrained.exit_code == 2);
  CHECK(untrained.err.find("conflict") != std::string::npos);
  CliResult dependency = RunCli(tmp, {"--data-root", root, "train", "--contexts",
                                      "dependency"});
  CHECK(dependency.exit_code == 2);
  CHECK(dependency.err.find("mode") != std::string::npos);
  CHECK(RunCli(tmp, {"--data-root", root, "train", "--contexts", "linear,bogus"})
            .exit_code == 1);
  CHECK(RunCli(tmp, {"--data-root", root, "train", "--dim", "1"}).exit_code == 1);
}

TEST_CASE("command line: unresolvable seeds are named") {
  ToyProject toy;
  CliResult r = toy.Run({"expand", "--category", "c", "--seed", "java,cobolx,zzz"});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("cobolx") != std::string::npos);
  CHECK(r.err.find("zzz") != std::string::npos);
  CHECK(r.err.find("java") == std::string::npos);
}

TEST_CASE("command line JSON output matches the service byte for byte") {
  ToyProject toy;
  // A copy of the project for the service, so both start from the same state.
  fs::path served = toy.tmp.path() / "served";
  fs::create_directories(served);
  fs::copy(fs::path(toy.root) / "toy", served / "toy", fs::copy_options::recursive);

  CliResult groups = toy.Run({"--output", "json", "groups", "--filter", "an"});
  CliResult snippets = toy.Run({"--output", "json", "snippets", "--group", "3"});
  CliResult expand = toy.Run({"--output", "json", "expand", "--category", "langs",
                              "--seed", "java,python", "--k", "8"});
  CliResult info = toy.Run({"--output", "json", "info"});
  REQUIRE(expand.exit_code == 0);
  json session = json::parse(expand.out);

  ServiceConfig config;
  config.port = 0;
  config.data_root = served;
  Service service(config);
  httplib::Client client("127.0.0.1", service.Start());
  CHECK(client.Get("/projects/toy/groups?filter=an")->body + "\n" == groups.out);
  CHECK(client.Get("/projects/toy/groups/3/snippets")->body + "\n" == snippets.out);
  json seeds = json::array();
  for (const auto &item : session["items"]) {
    if (item["seed"] == true) seeds.push_back(item["group_id"]);
  }
  auto res = client.Post(
      "/projects/toy/expand",
      json({{"category", "langs"}, {"seed_ids", seeds}, {"k", 8}}).dump(),
      "application/json");
  REQUIRE(res);
  CHECK(res->body + "\n" == expand.out);
  // Both projects now hold the same single session.
  CHECK(client.Get("/projects/toy")->body + "\n" == info.out);
}

}  // namespace
}  // namespace termset
