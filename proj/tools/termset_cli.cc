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

// Command-line driver: every workflow step against a project directory.
// Exit status: 0 success, 1 usage error, 2 data or state error.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "termset/error.h"
#include "termset/eval.h"
#include "termset/expansion.h"
#include "termset/mlp.h"
#include "termset/pipeline.h"
#include "termset/project.h"
#include "termset/service.h"
#include "termset/text.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace termset;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// A bad flag value detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string data_root;
  std::string project = "default";
  std::string output = "table";

  bool Json() const { return output == "json"; }
  fs::path ProjectDir() const { return fs::path(data_root) / project; }
};

std::unique_ptr<Project> OpenProject(const Globals &g) {
  if (!IsValidProjectId(g.project)) {
    throw UsageError("--project must match [A-Za-z0-9_-]{1,64}");
  }
  return Project::Open(g.ProjectDir());
}

std::unique_ptr<Project> OpenOrCreate(const Globals &g) {
  if (!IsValidProjectId(g.project)) {
    throw UsageError("--project must match [A-Za-z0-9_-]{1,64}");
  }
  if (fs::exists(g.ProjectDir() / "project.json")) return Project::Open(g.ProjectDir());
  return Project::Create(g.ProjectDir(), g.project, g.project);
}

std::vector<std::string> SplitList(const std::string &text) {
  std::vector<std::string> out;
  for (const std::string &part : Split(text, ',')) {
    std::string_view trimmed = Trim(part);
    if (!trimmed.empty()) out.emplace_back(trimmed);
  }
  return out;
}

std::string ReadInput(const fs::path &path) {
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::string text;
    for (const fs::path &file : files) {
      if (!text.empty()) text += "\n\n";
      text += ReadFile(file);
    }
    return text;
  }
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kNotFound, "no such file: " + path.string());
  }
  return ReadFile(path);
}

void PrintTable(const std::vector<std::string> &header,
                const std::vector<std::vector<std::string>> &rows) {
  std::vector<size_t> width(header.size());
  for (size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto &row : rows) {
    for (size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto print = [&](const std::vector<std::string> &row) {
    std::string line;
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) line += "  ";
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size(), ' ');
    }
    std::cout << line << "\n";
  };
  print(header);
  for (const auto &row : rows) print(row);
}

std::string Fixed(double value, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

void PrintSession(const Globals &g, const ProjectState &state, const Session &session) {
  if (g.Json()) {
    std::cout << SessionJson(state, session) << "\n";
    return;
  }
  const ExpansionResult &r = session.result;
  std::cout << "session " << session.id << "  category '" << r.seed.category
            << "'  scorer " << ScorerName(r.scorer) << "\n";
  std::vector<std::vector<std::string>> rows;
  size_t rank = 0;
  for (const Candidate &c : r.items) {
    rows.push_back({c.seed ? "seed" : std::to_string(++rank), std::to_string(c.group),
                    Fixed(c.certainty), r.validated.count(c.group) ? "yes" : "",
                    state.index->Canonical(c.group)});
  }
  PrintTable({"rank", "group", "certainty", "completed", "expression"}, rows);
}

std::vector<GroupId> ResolveTerms(const ProjectState &state,
                                  const std::vector<std::string> &terms) {
  std::vector<GroupId> ids;
  std::vector<std::string> missing;
  for (const std::string &term : terms) {
    if (auto id = ResolveTerm(state, term)) {
      ids.push_back(*id);
    } else {
      missing.push_back(term);
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kNotFound,
                "no term group matches: " + Join(missing, ", "), "seed");
  }
  return ids;
}

int RunCli(int argc, char **argv) {
  CLI::App app{"Term set expansion: ingest a corpus, train context models, "
               "expand seed terms into ranked sets."};
  app.require_subcommand(1);
  Globals g;
  if (const char *env = std::getenv("TERMSET_DATA_ROOT")) g.data_root = env;
  if (g.data_root.empty()) g.data_root = "termset-data";
  app.add_option("--data-root", g.data_root,
                 "Directory holding projects (env TERMSET_DATA_ROOT)");
  app.add_option("--project", g.project, "Project id")->capture_default_str();
  app.add_option("--output", g.output, "Output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  // ingest
  std::string ingest_path;
  bool ingest_conllu = false;
  auto *ingest = app.add_subcommand("ingest", "Load a corpus file or directory");
  ingest->add_option("path", ingest_path, "Text or CoNLL-U file, or a directory")
      ->required();
  ingest->add_flag("--conllu", ingest_conllu, "Input is CoNLL-U");

  // train
  PipelineConfig pipeline;
  std::string contexts_flag = "linear,list,unary";
  std::string train_config_file;
  auto *train = app.add_subcommand("train", "Group terms and train context models");
  train->add_option("--contexts", contexts_flag, "Comma-separated context types")
      ->capture_default_str();
  train->add_option("--dim", pipeline.train.dim)->capture_default_str();
  train->add_option("--epochs", pipeline.train.epochs)->capture_default_str();
  train->add_option("--negatives", pipeline.train.negatives)->capture_default_str();
  train->add_option("--alpha", pipeline.train.alpha)->capture_default_str();
  train->add_option("--min-count", pipeline.train.min_count)->capture_default_str();
  train->add_option("--subsample", pipeline.train.subsample)->capture_default_str();
  train->add_option("--seed", pipeline.train.seed)->capture_default_str();
  train->add_option("--workers", pipeline.train.workers)->capture_default_str();
  train->add_option("--min-term-freq", pipeline.min_term_freq)->capture_default_str();
  train->add_option("--max-edit-ratio", pipeline.group.max_edit_ratio)
      ->capture_default_str();
  train->add_flag("--group-embedding", pipeline.group_embedding,
                  "Merge variants by surface-embedding similarity");
  train->add_option("--config", train_config_file,
                    "JSON pipeline config applied before the flags above");

  // groups
  std::string filter;
  size_t offset = 0;
  size_t limit = 50;
  auto *groups = app.add_subcommand("groups", "List term groups");
  groups->add_option("--filter", filter, "Case-insensitive substring");
  groups->add_option("--offset", offset)->capture_default_str();
  groups->add_option("--limit", limit)->capture_default_str();

  // snippets
  GroupId snippet_group = 0;
  size_t max_n = 10;
  auto *snippets = app.add_subcommand("snippets", "Show corpus sentences for a group");
  snippets->add_option("--group", snippet_group)->required();
  snippets->add_option("--max-n", max_n)->capture_default_str()->check(CLI::PositiveNumber);

  // expand
  std::string category;
  std::string seed_terms;
  size_t k = kDefaultK;
  size_t pool_size = kDefaultPoolSize;
  auto *expand = app.add_subcommand("expand", "Expand seed terms into a ranked set");
  expand->add_option("--category", category)->required();
  expand->add_option("--seed", seed_terms, "Comma-separated seed terms")->required();
  expand->add_option("--k", k)->capture_default_str();
  expand->add_option("--pool-size", pool_size)->capture_default_str();

  // validate / reexpand / save
  std::string session_id;
  GroupId validate_group = 0;
  bool completed = true;
  auto *validate = app.add_subcommand("validate", "Mark a session item completed");
  validate->add_option("--session", session_id)->required();
  validate->add_option("--group", validate_group)->required();
  validate->add_option("--completed", completed)->capture_default_str();

  std::string accepted;
  auto *reexpand = app.add_subcommand("reexpand", "Re-expand with accepted groups");
  reexpand->add_option("--session", session_id)->required();
  reexpand->add_option("--accept", accepted, "Comma-separated group ids");

  auto *save = app.add_subcommand("save", "Persist a session's validated set");
  save->add_option("--session", session_id)->required();

  // export
  std::string export_out;
  auto *exporter = app.add_subcommand("export", "Write a saved validated set as CSV");
  exporter->add_option("--category", category)->required();
  exporter->add_option("--out", export_out, "Output file (- for stdout)")->required();

  // eval
  std::string dataset;
  std::string n_list = "10,20,50";
  auto *eval = app.add_subcommand("eval", "MAP@n against a gold dataset");
  eval->add_option("--dataset", dataset, "JSON lines {name, gold, seeds}")->required();
  eval->add_option("--n", n_list)->capture_default_str();
  eval->add_option("--pool-size", pool_size)->capture_default_str();

  // mlp-data / mlp-train
  std::string data_out;
  int dev_every = 4;
  auto *mlp_data = app.add_subcommand(
      "mlp-data", "Label candidate features against a gold dataset");
  mlp_data->add_option("--dataset", dataset)->required();
  mlp_data->add_option("--out", data_out)->required();
  mlp_data->add_option("--dev-every", dev_every,
                       "Every n-th category goes to the dev split (0 = none)")
      ->capture_default_str();
  mlp_data->add_option("--pool-size", pool_size)->capture_default_str();

  std::string mlp_csv;
  MlpTrainConfig mlp_config;
  auto *mlp_train = app.add_subcommand("mlp-train", "Train the certainty classifier");
  mlp_train->add_option("--data", mlp_csv, "CSV f1..f5,label,split")->required();
  mlp_train->add_option("--hidden", mlp_config.hidden)->capture_default_str();
  mlp_train->add_option("--lr", mlp_config.lr)->capture_default_str();
  mlp_train->add_option("--epochs", mlp_config.epochs)->capture_default_str();
  mlp_train->add_option("--seed", mlp_config.seed)->capture_default_str();
  mlp_train->add_option("--patience", mlp_config.patience)->capture_default_str();

  // serve
  std::string serve_config;
  std::optional<int> port;
  std::optional<std::string> host;
  std::optional<std::string> web_root;
  auto *serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", serve_config, "JSON service config file");
  serve->add_option("--port", port);
  serve->add_option("--host", host);
  serve->add_option("--web-root", web_root, "Static files served under /");

  auto *info = app.add_subcommand("info", "Show project status");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (ingest->parsed()) {
      std::string text = ReadInput(ingest_path);
      auto project = OpenOrCreate(g);
      Job job = project->CreateJob("ingest");
      project->RunIngest(job.id, text,
                         ingest_conllu ? CorpusFormat::kConllu : CorpusFormat::kText);
      auto state = project->Snapshot();
      if (g.Json()) {
        std::cout << ProjectJson(*state) << "\n";
      } else {
        std::cout << "ingested " << state->meta.sentences << " sentences in "
                  << state->meta.documents << " documents into project '"
                  << state->meta.id << "'\n";
      }
    } else if (train->parsed()) {
      PipelineConfig config;
      if (!train_config_file.empty()) {
        ApplyPipelineJson(ReadFile(train_config_file), config);
      }
      // Explicit flags win over the config file.
      auto set = [&](const char *flag, auto &dst, const auto &src) {
        if (train->count(flag) > 0) dst = src;
      };
      set("--dim", config.train.dim, pipeline.train.dim);
      set("--epochs", config.train.epochs, pipeline.train.epochs);
      set("--negatives", config.train.negatives, pipeline.train.negatives);
      set("--alpha", config.train.alpha, pipeline.train.alpha);
      set("--min-count", config.train.min_count, pipeline.train.min_count);
      set("--subsample", config.train.subsample, pipeline.train.subsample);
      set("--seed", config.train.seed, pipeline.train.seed);
      set("--workers", config.train.workers, pipeline.train.workers);
      set("--min-term-freq", config.min_term_freq, pipeline.min_term_freq);
      set("--max-edit-ratio", config.group.max_edit_ratio, pipeline.group.max_edit_ratio);
      set("--group-embedding", config.group_embedding, pipeline.group_embedding);
      if (train->count("--contexts") > 0 || train_config_file.empty()) {
        config.contexts.clear();
        for (const std::string &name : SplitList(contexts_flag)) {
          auto ctype = ParseContextType(name);
          if (!ctype) throw UsageError("unknown context type '" + name + "'");
          config.contexts.push_back(*ctype);
        }
      }
      try {
        config.Validate();
      } catch (const Error &e) {
        throw UsageError(std::string(e.what()) + " (" + e.field() + ")");
      }
      auto project = OpenProject(g);
      project->CheckTrainable(config);
      Job job = project->CreateJob("train");
      project->RunTrain(job.id, config);
      auto state = project->Snapshot();
      if (g.Json()) {
        std::cout << ProjectJson(*state) << "\n";
      } else {
        std::cout << "trained " << state->models.size() << " context models over "
                  << state->groups->size() << " term groups\n";
        for (const auto &[ctype, reason] : state->meta.skipped_contexts) {
          std::cout << "skipped " << ContextTypeName(ctype) << ": " << reason << "\n";
        }
      }
    } else if (groups->parsed()) {
      auto project = OpenProject(g);
      auto state = project->Snapshot();
      std::string out = GroupsJson(*state, filter, offset, limit);
      if (g.Json()) {
        std::cout << out << "\n";
      } else {
        json doc = json::parse(out);
        std::vector<std::vector<std::string>> rows;
        for (const auto &item : doc["items"]) {
          std::vector<std::string> members;
          for (const auto &m : item["members"]) members.push_back(m["surface"]);
          rows.push_back({std::to_string(item["id"].get<GroupId>()),
                          item["canonical"].get<std::string>(),
                          std::to_string(item["frequency"].get<uint64_t>()),
                          Join(members, " | ")});
        }
        PrintTable({"id", "expression", "frequency", "members"}, rows);
        std::cout << doc["total"].get<size_t>() << " groups match\n";
      }
    } else if (snippets->parsed()) {
      auto project = OpenProject(g);
      auto state = project->Snapshot();
      std::string out = SnippetsJson(*state, snippet_group, max_n);
      if (g.Json()) {
        std::cout << out << "\n";
      } else {
        for (const auto &s : json::parse(out)["snippets"]) {
          std::string text = s["text"];
          std::string marked;
          size_t pos = 0;
          for (const auto &h : s["highlights"]) {
            size_t b = h[0], e = h[1];
            marked += text.substr(pos, b - pos) + "[" + text.substr(b, e - b) + "]";
            pos = e;
          }
          marked += text.substr(pos);
          std::cout << s["doc_id"].get<std::string>() << "#"
                    << s["sent_index"].get<size_t>() << "  " << marked << "\n";
        }
      }
    } else if (expand->parsed()) {
      auto project = OpenProject(g);
      auto state = project->Snapshot();
      RequireTrained(*state);
      std::vector<std::string> terms = SplitList(seed_terms);
      if (terms.empty()) throw UsageError("--seed needs at least one term");
      std::vector<GroupId> ids = ResolveTerms(*state, terms);
      auto session = project->Expand(category, ids, k, pool_size);
      PrintSession(g, *project->Snapshot(), *session);
    } else if (validate->parsed()) {
      auto project = OpenProject(g);
      auto session = project->Validate(session_id, validate_group, completed);
      PrintSession(g, *project->Snapshot(), *session);
    } else if (reexpand->parsed()) {
      auto project = OpenProject(g);
      std::vector<GroupId> ids;
      for (const std::string &part : SplitList(accepted)) {
        try {
          size_t used = 0;
          ids.push_back(std::stoll(part, &used));
          if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception &) {
          throw UsageError("--accept expects group ids, got '" + part + "'");
        }
      }
      auto session = project->Reexpand(session_id, ids);
      PrintSession(g, *project->Snapshot(), *session);
    } else if (save->parsed()) {
      auto project = OpenProject(g);
      std::string path = project->SaveValidated(session_id);
      auto state = project->Snapshot();
      const Session &session = *state->sessions.at(session_id);
      if (g.Json()) {
        json out = {{"session_id", session_id},
                    {"category", session.result.seed.category},
                    {"path", path},
                    {"count", session.result.validated.size()}};
        std::cout << out.dump() << "\n";
      } else {
        std::cout << "saved " << session.result.validated.size() << " validated groups to "
                  << (project->dir() / path).string() << "\n";
      }
    } else if (exporter->parsed()) {
      auto project = OpenProject(g);
      auto state = project->Snapshot();
      auto it = state->meta.saved.find(category);
      if (it == state->meta.saved.end()) {
        throw Error(ErrorCode::kNotFound, "no saved validated set for category '" +
                                              category + "'; run save first");
      }
      std::string csv = ReadFile(project->dir() / it->second);
      if (export_out == "-") {
        std::cout << csv;
      } else {
        WriteFileAtomic(export_out, csv);
        if (!g.Json()) std::cout << "wrote " << export_out << "\n";
      }
    } else if (eval->parsed()) {
      std::vector<size_t> ns;
      for (const std::string &part : SplitList(n_list)) {
        size_t used = 0;
        unsigned long long n = 0;
        try {
          n = std::stoull(part, &used);
        } catch (const std::exception &) {
          used = 0;
        }
        if (used != part.size() || n == 0) {
          throw UsageError("--n expects positive integers, got '" + part + "'");
        }
        ns.push_back(n);
      }
      if (ns.empty()) throw UsageError("--n needs at least one cutoff");
      auto project = OpenProject(g);
      auto state = project->Snapshot();
      RequireTrained(*state);
      auto categories = ParseGoldDataset(ReadFile(dataset));
      BenchmarkReport report = RunBenchmark(
          categories,
          [&](const std::string &term) { return ResolveTerm(*state, term); },
          [&](const std::set<GroupId> &seeds, size_t depth) {
            SeedSet seed{"", seeds};
            ExpansionResult r = Expand(state->models, state->mlp.get(), seed, depth,
                                       std::max(pool_size, depth));
            std::vector<GroupId> ranked;
            for (const Candidate &c : r.items) {
              if (!c.seed) ranked.push_back(c.group);
            }
            return ranked;
          },
          ns);
      std::cout << (g.Json() ? ReportToJson(report) + "\n" : ReportToTable(report));
    } else if (mlp_data->parsed()) {
      if (dev_every < 0) throw UsageError("--dev-every must be >= 0");
      auto project = OpenProject(g);
      auto state = project->Snapshot();
      RequireTrained(*state);
      auto categories = ParseGoldDataset(ReadFile(dataset));
      TrainSet data;
      for (size_t i = 0; i < categories.size(); ++i) {
        const GoldCategory &category = categories[i];
        SeedSet seed{category.name, {}};
        for (const std::string &s : category.seeds) {
          if (auto id = ResolveTerm(*state, s)) seed.ids.insert(*id);
        }
        if (seed.ids.empty()) {
          std::cerr << "skipping '" << category.name << "': no seed resolves\n";
          continue;
        }
        std::set<GroupId> gold;
        for (const std::string &t : category.gold) {
          if (auto id = ResolveTerm(*state, t)) gold.insert(*id);
        }
        bool dev = dev_every > 0 && (i + 1) % static_cast<size_t>(dev_every) == 0;
        for (const Candidate &c : ScoreCandidates(state->models, seed, pool_size)) {
          data.rows.push_back({c.features, gold.count(c.group) ? 1 : 0, dev});
        }
      }
      WriteFileAtomic(data_out, data.ToCsv());
      if (g.Json()) {
        std::cout << json({{"rows", data.rows.size()}, {"path", data_out}}).dump() << "\n";
      } else {
        std::cout << "wrote " << data.rows.size() << " rows to " << data_out << "\n";
      }
    } else if (mlp_train->parsed()) {
      auto project = OpenProject(g);
      TrainSet data = TrainSet::ParseCsv(ReadFile(mlp_csv));
      MlpTrainResult result = TrainMlp(data, mlp_config);
      project->SetMlp(result.model);
      double train_loss = result.train_loss.empty() ? 0 : result.train_loss.back();
      double dev_loss = result.dev_loss.empty() ? 0 : result.dev_loss.back();
      if (g.Json()) {
        std::cout << json({{"epochs", result.epochs_run},
                           {"train_loss", train_loss},
                           {"dev_loss", dev_loss}})
                         .dump()
                  << "\n";
      } else {
        std::cout << "trained classifier for " << result.epochs_run
                  << " epochs; train loss " << Fixed(train_loss, 6) << ", dev loss "
                  << Fixed(dev_loss, 6) << "\n";
      }
    } else if (serve->parsed()) {
      ServiceConfig config;
      if (!serve_config.empty()) config = ServiceConfig::LoadFile(serve_config);
      if (app.count("--data-root") > 0 || std::getenv("TERMSET_DATA_ROOT") ||
          serve_config.empty()) {
        config.data_root = g.data_root;
      }
      if (port) config.port = *port;
      if (host) config.host = *host;
      if (web_root) config.web_root = fs::path(*web_root);
      Service service(config);
      std::cerr << "serving " << config.data_root.string() << " on http://" << config.host
                << ":" << config.port << "\n";
      service.Run();
    } else if (info->parsed()) {
      auto project = OpenProject(g);
      std::string out = ProjectJson(*project->Snapshot());
      if (g.Json()) {
        std::cout << out << "\n";
      } else {
        std::cout << json::parse(out).dump(2) << "\n";
      }
    }
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error &e) {
    std::cerr << "error (" << ErrorCodeName(e.code()) << "): " << e.what();
    if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
    std::cerr << "\n";
    return kExitData;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) { return RunCli(argc, argv); }
