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

#include "termset/pipeline.h"

#include <algorithm>
#include <memory>
#include <set>

#include "json.hpp"
#include "termset/error.h"

namespace termset {

using nlohmann::json;

void PipelineConfig::Validate() const {
  if (contexts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one context type is required",
                "contexts");
  }
  std::set<ContextType> seen;
  for (size_t i = 0; i < contexts.size(); ++i) {
    if (!seen.insert(contexts[i]).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate context type " + std::string(ContextTypeName(contexts[i])),
                  "contexts[" + std::to_string(i) + "]");
    }
  }
  if (min_term_freq < 1) {
    throw Error(ErrorCode::kInvalidArgument, "must be >= 1", "min_term_freq");
  }
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "must be >= 1", "window");
  if (min_list_items < 2) {
    throw Error(ErrorCode::kInvalidArgument, "must be >= 2", "min_list_items");
  }
  if (!(group.max_edit_ratio >= 0 && group.max_edit_ratio < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "must be in [0, 1)",
                "group_config.max_edit_ratio");
  }
  if (!(group.sim_threshold >= -1 && group.sim_threshold <= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "must be in [-1, 1]",
                "group_config.sim_threshold");
  }
  train.Validate();  // fields are already "train_config.<name>"
}

namespace {

json ParseObject(std::string_view text, std::string_view field) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "expected a JSON object",
                std::string(field));
  }
  return doc;
}

template <typename T>
void Read(const json &doc, const std::string &key, T &out, std::string_view prefix) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  std::string field = std::string(prefix) + "." + key;
  if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) {
      throw Error(ErrorCode::kInvalidArgument, "expected a number", field);
    }
  } else {
    if (!it->is_number_integer()) {
      throw Error(ErrorCode::kInvalidArgument, "expected an integer", field);
    }
    if constexpr (std::is_unsigned_v<T>) {
      if (it->get<int64_t>() < 0 && !it->is_number_unsigned()) {
        throw Error(ErrorCode::kInvalidArgument, "must be >= 0", field);
      }
    }
  }
  out = it->get<T>();
}

void RejectUnknown(const json &doc, const std::set<std::string> &known,
                   std::string_view prefix) {
  for (const auto &[key, value] : doc.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown field",
                  std::string(prefix) + "." + key);
    }
  }
}

}  // namespace

void ApplyTrainConfigJson(std::string_view json_text, TrainConfig &config,
                          std::string_view prefix) {
  json doc = ParseObject(json_text, prefix);
  RejectUnknown(doc,
                {"dim", "epochs", "negatives", "alpha", "min_count", "subsample",
                 "seed", "workers"},
                prefix);
  Read(doc, "dim", config.dim, prefix);
  Read(doc, "epochs", config.epochs, prefix);
  Read(doc, "negatives", config.negatives, prefix);
  Read(doc, "alpha", config.alpha, prefix);
  Read(doc, "min_count", config.min_count, prefix);
  Read(doc, "subsample", config.subsample, prefix);
  Read(doc, "seed", config.seed, prefix);
  Read(doc, "workers", config.workers, prefix);
}

void ApplyGroupConfigJson(std::string_view json_text, GroupConfig &config,
                          std::string_view prefix) {
  json doc = ParseObject(json_text, prefix);
  RejectUnknown(doc, {"max_edit_ratio", "sim_threshold"}, prefix);
  Read(doc, "max_edit_ratio", config.max_edit_ratio, prefix);
  Read(doc, "sim_threshold", config.sim_threshold, prefix);
}

std::string TrainConfigToJson(const TrainConfig &config) {
  json doc = {{"dim", config.dim},         {"epochs", config.epochs},
              {"negatives", config.negatives}, {"alpha", config.alpha},
              {"min_count", config.min_count}, {"subsample", config.subsample},
              {"seed", config.seed},       {"workers", config.workers}};
  return doc.dump();
}

namespace {

std::string Field(std::string_view prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : std::string(prefix) + "." + std::string(key);
}

}  // namespace

void ApplyPipelineJson(std::string_view json_text, PipelineConfig &config,
                       std::string_view prefix) {
  json doc = ParseObject(json_text, prefix);
  for (const auto &[key, value] : doc.items()) {
    static const std::set<std::string> kKnown = {
        "contexts", "min_term_freq", "group_embedding", "window",
        "min_list_items", "train_config", "group_config"};
    if (!kKnown.count(key)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown field", Field(prefix, key));
    }
  }
  if (auto it = doc.find("contexts"); it != doc.end()) {
    if (!it->is_array()) {
      throw Error(ErrorCode::kInvalidArgument, "expected an array of context names",
                  Field(prefix, "contexts"));
    }
    std::vector<ContextType> contexts;
    for (size_t i = 0; i < it->size(); ++i) {
      std::string field = Field(prefix, "contexts") + "[" + std::to_string(i) + "]";
      const json &name = (*it)[i];
      std::optional<ContextType> ctype;
      if (name.is_string()) ctype = ParseContextType(name.get<std::string>());
      if (!ctype) {
        throw Error(ErrorCode::kInvalidArgument,
                    "expected one of linear, list, dependency, symmetric, unary", field);
      }
      contexts.push_back(*ctype);
    }
    config.contexts = std::move(contexts);
  }
  auto read_scalar = [&](const char *key, auto &out) {
    auto it = doc.find(key);
    if (it == doc.end()) return;
    if (!it->is_number_integer() || it->get<int64_t>() < 0) {
      throw Error(ErrorCode::kInvalidArgument, "expected a nonnegative integer",
                  Field(prefix, key));
    }
    out = it->get<std::remove_reference_t<decltype(out)>>();
  };
  read_scalar("min_term_freq", config.min_term_freq);
  read_scalar("window", config.window);
  read_scalar("min_list_items", config.min_list_items);
  if (auto it = doc.find("group_embedding"); it != doc.end()) {
    if (!it->is_boolean()) {
      throw Error(ErrorCode::kInvalidArgument, "expected a boolean",
                  Field(prefix, "group_embedding"));
    }
    config.group_embedding = it->get<bool>();
  }
  if (auto it = doc.find("train_config"); it != doc.end()) {
    ApplyTrainConfigJson(it->dump(), config.train, Field(prefix, "train_config"));
  }
  if (auto it = doc.find("group_config"); it != doc.end()) {
    ApplyGroupConfigJson(it->dump(), config.group, Field(prefix, "group_config"));
  }
}

std::string PipelineConfigToJson(const PipelineConfig &config) {
  json contexts = json::array();
  for (ContextType c : config.contexts) contexts.push_back(ContextTypeName(c));
  json doc = {{"contexts", contexts},
              {"min_term_freq", config.min_term_freq},
              {"group_embedding", config.group_embedding},
              {"window", config.window},
              {"min_list_items", config.min_list_items},
              {"train_config", json::parse(TrainConfigToJson(config.train))},
              {"group_config", json::parse(GroupConfigToJson(config.group))}};
  return doc.dump();
}

std::string GroupConfigToJson(const GroupConfig &config) {
  json doc = {{"max_edit_ratio", config.max_edit_ratio},
              {"sim_threshold", config.sim_threshold}};
  return doc.dump();
}

ChunkMode ChooseChunkMode(const Corpus &corpus) {
  if (corpus.empty()) return ChunkMode::kNgram;
  for (const Sentence &s : corpus) {
    if (!s.Tagged()) return ChunkMode::kNgram;
  }
  return ChunkMode::kPosChunk;
}

std::vector<Term> CountTerms(const Corpus &corpus, uint64_t min_freq) {
  CandidateConfig config;
  config.mode = ChooseChunkMode(corpus);
  std::map<std::string, uint64_t> counts;
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (const CandidateSpan &span : ExtractCandidates(corpus[i], i, config)) {
      ++counts[span.surface];
    }
  }
  std::vector<Term> terms;
  for (const auto &[surface, count] : counts) {
    if (count >= min_freq) terms.push_back({surface, count});
  }
  return terms;
}

namespace {

bool IsEmptyVocabulary(const Error &e) {
  return e.code() == ErrorCode::kTraining &&
         std::string_view(e.what()).starts_with("empty vocabulary");
}

// A linear-context model whose targets are term surfaces rather than group
// ids, used to merge distributionally similar variants.
std::unique_ptr<EmbeddingModel> TrainSurfaceModel(const Corpus &corpus,
                                                  const std::vector<Term> &terms,
                                                  const PipelineConfig &config) {
  GroupIndex singletons;
  for (size_t i = 0; i < terms.size(); ++i) {
    singletons.Add(static_cast<GroupId>(i), terms[i].surface, {terms[i].surface});
  }
  ContextConfig context_config;
  context_config.window = config.window;
  context_config.min_list_items = config.min_list_items;
  PairSet pairs = BuildPairs(corpus, singletons, ContextType::kLinear, context_config);
  if (pairs.pairs.empty()) return nullptr;
  EmbeddingModel model;
  try {
    model = TrainSgns(ToUnitPairs(pairs.pairs), ContextType::kLinear, config.train);
  } catch (const Error &e) {
    if (!IsEmptyVocabulary(e)) throw;
    return nullptr;
  }
  std::vector<std::string> units;
  std::vector<uint64_t> counts;
  for (size_t i = 0; i < model.targets().size(); ++i) {
    units.push_back(terms[std::stoull(model.targets().unit(i))].surface);
    counts.push_back(model.targets().count(i));
  }
  auto renamed = std::make_unique<EmbeddingModel>(
      ContextType::kLinear, Vocabulary(std::move(units), std::move(counts)),
      model.contexts(), model.target_matrix(), model.context_matrix());
  renamed->RefreshNorms();
  return renamed;
}

}  // namespace

PipelineOutput RunPipeline(const Corpus &corpus, const PipelineConfig &config,
                           const StageCallback &stage) {
  config.Validate();
  if (corpus.empty()) {
    throw Error(ErrorCode::kConflict, "the project has no corpus to train on");
  }
  auto report = [&](PipelineStage s) {
    if (stage) stage(s);
  };
  bool needs_parse = std::find(config.contexts.begin(), config.contexts.end(),
                               ContextType::kDependency) != config.contexts.end();
  if (needs_parse) {
    for (const Sentence &s : corpus) {
      if (!s.Parsed()) {
        throw Error(ErrorCode::kMode,
                    "dependency contexts need a parsed (CoNLL-U) corpus", "contexts");
      }
    }
  }

  const double group_share = 0.1;
  report({"group", 0.0, "extracting candidate terms"});
  std::vector<Term> terms = CountTerms(corpus, config.min_term_freq);
  if (terms.empty()) {
    throw Error(ErrorCode::kConflict,
                "no candidate term occurs at least " +
                    std::to_string(config.min_term_freq) + " times");
  }
  std::unique_ptr<EmbeddingModel> surface_model;
  if (config.group_embedding) {
    report({"group", 0.02, "training surface embedding"});
    surface_model = TrainSurfaceModel(corpus, terms, config);
  }
  report({"group", 0.05, "grouping " + std::to_string(terms.size()) + " terms"});
  PipelineOutput out;
  out.groups = GroupTerms(terms, surface_model.get(), AbbreviationLexicon::BuiltIn(),
                          config.group);
  GroupIndex index(out.groups);

  ContextConfig context_config;
  context_config.window = config.window;
  context_config.min_list_items = config.min_list_items;
  const double share = (1.0 - group_share) / static_cast<double>(config.contexts.size());
  for (size_t i = 0; i < config.contexts.size(); ++i) {
    ContextType ctype = config.contexts[i];
    std::string name = "train:" + std::string(ContextTypeName(ctype));
    double base = group_share + share * static_cast<double>(i);
    report({name, base, "extracting contexts"});
    PairSet pairs = BuildPairs(corpus, index, ctype, context_config);
    if (pairs.pairs.empty()) {
      out.skipped[ctype] = "no context pairs";
      continue;
    }
    std::vector<UnitPair> units = ToUnitPairs(pairs.pairs);
    double visits = static_cast<double>(units.size()) * config.train.epochs;
    try {
      EmbeddingModel model = TrainSgns(
          units, ctype, config.train, [&](const TrainProgress &p) {
            double within = std::min(1.0, static_cast<double>(p.pairs) / visits);
            report({name, base + share * within, FormatProgress(p)});
          });
      out.models[ctype] = std::make_shared<const EmbeddingModel>(std::move(model));
    } catch (const Error &e) {
      // Everything below min_count leaves nothing to train; other failures
      // are real errors.
      if (!IsEmptyVocabulary(e)) throw;
      out.skipped[ctype] = e.what();
    }
  }
  report({"done", 1.0, ""});
  return out;
}

}  // namespace termset
