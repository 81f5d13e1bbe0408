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


#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "termset/project.h"
#include "termset/service.h"
#include "test_util.h"

namespace termset {
namespace {

using nlohmann::json;
using testing::TempDir;

// A running service over a fresh data root.
struct Fixture {
  TempDir root;
  std::unique_ptr<Service> service;
  std::unique_ptr<httplib::Client> client;

  explicit Fixture(std::optional<std::filesystem::path> web_root = std::nullopt) {
    ServiceConfig config;
    config.port = 0;
    config.data_root = root.path() / "data";
    config.web_root = std::move(web_root);
    config.pipeline.train.dim = 20;
    config.pipeline.train.min_count = 1;
    config.pipeline.train.subsample = 0;
    config.pipeline.train.table_size = 100000;
    service = std::make_unique<Service>(config);
    int port = service->Start();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }

  httplib::Result Post(const std::string &path, const std::string &body,
                       const std::string &type = "application/json") {
    return client->Post(path, body, type);
  }
  json PostJson(const std::string &path, const json &body, int want_status) {
    auto res = Post(path, body.dump());
    REQUIRE(res);
    CHECK(res->status == want_status);
    return json::parse(res->body);
  }
  json GetJson(const std::string &path, int want_status = 200) {
    auto res = client->Get(path);
    REQUIRE(res);
    CHECK(res->status == want_status);
    return json::parse(res->body);
  }
};

std::string ToyConllu() { return ReadFile(testing::SourcePath("data/toy/toy.conllu")); }

TEST_CASE("error codes map onto HTTP statuses") {
  CHECK(HttpStatus(ErrorCode::kInvalidArgument) == 400);
  CHECK(HttpStatus(ErrorCode::kNotFound) == 404);
  CHECK(HttpStatus(ErrorCode::kConflict) == 409);
  CHECK(HttpStatus(ErrorCode::kMode) == 409);
  CHECK(HttpStatus(ErrorCode::kInternal) == 500);
}

TEST_CASE("service config from JSON") {
  ServiceConfig config;
  config.ApplyJson(R"({"port": 9000, "pipeline": {"train_config": {"dim": 30}}})");
  CHECK(config.port == 9000);
  CHECK(config.host == "127.0.0.1");
  CHECK(config.pipeline.train.dim == 30);
  try {
    config.ApplyJson(R"({"pipeline": {"train_config": {"dimx": 30}}})");
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
    CHECK(e.field() == "pipeline.train_config.dimx");
  }
  CHECK(testing::ThrownCode([&] { config.ApplyJson(R"({"port": "x"})"); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("request errors carry a code, message and field") {
  Fixture f;
  json err = f.PostJson("/projects", json::object(), 400);
  CHECK(err["code"] == "invalid_argument");
  CHECK(err["field"] == "name");
  CHECK_FALSE(err["message"].get<std::string>().empty());
  CHECK(f.PostJson("/projects", {{"name", "x"}, {"id", "bad id"}}, 400)["field"] == "id");
  auto bad = f.Post("/projects", "{not json");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  CHECK(f.GetJson("/projects/nope", 404)["code"] == "not_found");
  CHECK(f.GetJson("/projects/nope/groups", 404)["code"] == "not_found");

  json created = f.PostJson("/projects", {{"name", "Empty"}, {"id", "empty"}}, 201);
  CHECK(created["id"] == "empty");
  CHECK(f.PostJson("/projects", {{"name", "Again"}, {"id", "empty"}}, 409)["code"] ==
        "conflict");
  // Not trained yet.
  CHECK(f.PostJson("/projects/empty/expand", {{"category", "c"}, {"seed_ids", {0}}},
                   409)["code"] == "conflict");
  // No corpus yet.
  CHECK(f.PostJson("/projects/empty/train", json::object(), 409)["code"] == "conflict");
  CHECK(f.PostJson("/projects/empty/train", {{"window", "wide"}}, 400)["field"] == "window");
  CHECK(f.GetJson("/projects/empty/jobs/j42", 404)["code"] == "not_found");
  CHECK(f.GetJson("/projects/empty/sessions/s1", 404)["code"] == "not_found");
  CHECK(f.GetJson("/projects/empty/groups/abc/snippets", 404)["code"] == "not_found");
  CHECK(f.GetJson("/projects/empty/groups?limit=-1", 400)["field"] == "limit");
  json list = f.GetJson("/projects");
  REQUIRE(list.size() == 1);
  CHECK(list[0]["id"] == "empty");
}

TEST_CASE("ingest, train, expand, validate, save and export over HTTP") {
  Fixture f;
  f.PostJson("/projects", {{"name", "Toy"}, {"id", "toy"}}, 201);
  auto ingest = f.Post("/projects/toy/corpus", ToyConllu(), "text/x-conllu");
  REQUIRE(ingest);
  CHECK(ingest->status == 202);
  json job = json::parse(ingest->body);
  CHECK(job["kind"] == "ingest");
  // Training may be queued behind the ingest job.
  json train = f.PostJson("/projects/toy/train",
                          {{"contexts", {"linear", "list", "unary"}},
                           {"train_config", {{"epochs", 5}}}},
                          202);
  f.service->WaitIdle();
  CHECK(f.GetJson("/projects/toy/jobs/" + job["id"].get<std::string>())["state"] == "done");
  json trained = f.GetJson("/projects/toy/jobs/" + train["id"].get<std::string>());
  CHECK(trained["state"] == "done");
  CHECK(trained["progress"] == 1.0);
  CHECK(f.GetJson("/projects/toy/jobs").size() == 2);
  // Dependency contexts need a parse the toy corpus lacks.
  CHECK(f.PostJson("/projects/toy/train", {{"contexts", {"dependency"}}}, 409)["code"] ==
        "mode");

  json york = f.GetJson("/projects/toy/groups?filter=york");
  REQUIRE(york["total"] == 1);
  CHECK(york["items"][0]["members"].size() == 5);
  json all = f.GetJson("/projects/toy/groups?limit=1000");
  std::map<std::string, GroupId> ids;
  for (const auto &item : all["items"]) {
    ids[item["canonical"].get<std::string>()] = item["id"].get<GroupId>();
  }
  REQUIRE(ids.count("Java"));
  REQUIRE(ids.count("Python"));
  json snippets = f.GetJson("/projects/toy/groups/" + std::to_string(ids["Java"]) +
                            "/snippets?max_n=2");
  CHECK(snippets["snippets"].size() == 2);
  CHECK(f.GetJson("/projects/toy/groups/999999/snippets", 404)["code"] == "not_found");

  CHECK(f.PostJson("/projects/toy/expand", {{"category", "langs"}, {"seed_ids", {999999}}},
                   404)["field"] == "seed_ids[0]");
  CHECK(f.PostJson("/projects/toy/expand", {{"seed_ids", {ids["Java"]}}}, 400)["field"] ==
        "category");
  json session = f.PostJson(
      "/projects/toy/expand",
      {{"category", "langs"}, {"seed_ids", {ids["Java"], ids["Python"]}}, {"k", 10}}, 200);
  std::string sid = session["session_id"];
  REQUIRE(session["items"].size() == 12);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(session["items"][i]["seed"] == true);
    CHECK(session["items"][i]["certainty"] == 1.0);
  }
  for (size_t i = 3; i < 12; ++i) {
    CHECK(session["items"][i]["certainty"] <= session["items"][i - 1]["certainty"]);
  }
  CHECK(f.GetJson("/projects/toy/sessions/" + sid).dump() == session.dump());

  GroupId pick = session["items"][2]["group_id"];
  json validated = f.PostJson("/projects/toy/sessions/" + sid + "/validate",
                              {{"group_id", pick}, {"completed", true}}, 200);
  CHECK(validated["items"][2]["completed"] == true);
  CHECK(f.PostJson("/projects/toy/sessions/" + sid + "/validate",
                   {{"group_id", pick}}, 400)["field"] == "completed");
  json saved = f.PostJson("/projects/toy/sessions/" + sid + "/save", json::object(), 200);
  CHECK(saved["count"] == 1);
  CHECK(saved["category"] == "langs");
  auto exported = f.client->Get("/projects/toy/sessions/" + sid + "/export");
  REQUIRE(exported);
  CHECK(exported->status == 200);
  CHECK(exported->body.find("," + std::to_string(pick) + ",") != std::string::npos);

  json again = f.PostJson("/projects/toy/sessions/" + sid + "/reexpand",
                          {{"accepted_ids", {pick}}}, 200);
  CHECK(again["session_id"] != sid);
  CHECK(again["items"][2]["seed"] == true);
  CHECK(f.PostJson("/projects/toy/sessions/" + sid + "/reexpand",
                   {{"accepted_ids", {999999}}}, 400)["field"] == "accepted_ids");

  json project = f.GetJson("/projects/toy");
  CHECK(project["trained"] == true);
}

TEST_CASE("a restarted service serves identical reads") {
  TempDir root;
  std::string before_project, before_groups, before_session;
  std::string sid;
  ServiceConfig config;
  config.port = 0;
  config.data_root = root.path();
  config.pipeline.train.dim = 10;
  config.pipeline.train.epochs = 2;
  config.pipeline.train.min_count = 1;
  config.pipeline.train.subsample = 0;
  config.pipeline.train.table_size = 10000;
  {
    Service service(config);
    httplib::Client client("127.0.0.1", service.Start());
    client.Post("/projects", R"({"name": "Toy", "id": "toy"})", "application/json");
    client.Post("/projects/toy/corpus?format=conllu", ToyConllu(), "text/plain");
    client.Post("/projects/toy/train", "", "application/json");
    service.WaitIdle();
    auto res = client.Post("/projects/toy/expand", R"({"category": "c", "seed_ids": [0, 1]})",
                           "application/json");
    REQUIRE(res);
    REQUIRE(res->status == 200);
    sid = json::parse(res->body)["session_id"];
    before_project = client.Get("/projects/toy")->body;
    before_groups = client.Get("/projects/toy/groups?limit=1000")->body;
    before_session = client.Get("/projects/toy/sessions/" + sid)->body;
  }
  Service service(config);
  httplib::Client client("127.0.0.1", service.Start());
  CHECK(client.Get("/projects/toy")->body == before_project);
  CHECK(client.Get("/projects/toy/groups?limit=1000")->body == before_groups);
  CHECK(client.Get("/projects/toy/sessions/" + sid)->body == before_session);
}

TEST_CASE("static web root") {
  TempDir web;
  {
    std::ofstream(web.path() / "index.html") << "<html>termset</html>";
  }
  Fixture f(web.path());
  auto res = f.client->Get("/index.html");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body == "<html>termset</html>");
  CHECK(f.GetJson("/projects").is_array());
}

}  // namespace
}  // namespace termset
