// Copyright 2026 The teigo Authors.
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

// Command-line front end: split, mix, train, grid, tag, eval, bench,
// weaklabel, stats and synth.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "teigo/corpus.h"
#include "teigo/error.h"
#include "teigo/evaluator.h"
#include "teigo/synthetic.h"
#include "teigo/tagger.h"
#include "teigo/teacher.h"
#include "teigo/text.h"
#include "teigo/trainer.h"
#include "teigo/unicode.h"

namespace teigo::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

enum ExitCode { kOk = 0, kUsageExit = 1, kDataExit = 2, kInternalExit = 3 };

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return kUsageExit;
    case ErrorKind::kInternal:
      return kInternalExit;
    default:
      return kDataExit;
  }
}

[[noreturn]] void Usage(const std::string& message) { throw Error(ErrorKind::kUsage, message); }

size_t ThreadCap() {
  size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TEIGO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) Usage("TEIGO_THREADS must be a positive integer");
    n = std::min(n, static_cast<size_t>(v));
  }
  return n;
}

// Writes through a temporary file and a rename, or to stdout for "-".
void WriteOutput(const std::string& path, const std::string& bytes) {
  if (path == "-") {
    std::cout << bytes << std::flush;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, fmt::format("cannot write '{}'", path));
    out << bytes;
    if (!out) throw Error(ErrorKind::kIo, fmt::format("write failed for '{}'", path));
  }
  fs::rename(tmp, path);
}

std::string ReadInput(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot open '{}'", path));
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// "name=path" or "path". A directory is read as TimeML files (*.tml,
// *.xml), anything else as JSONL.
Corpus LoadAnyCorpus(const std::string& arg, const std::string& language) {
  std::string name, path = arg;
  if (const auto eq = arg.find('='); eq != std::string::npos) {
    name = arg.substr(0, eq);
    path = arg.substr(eq + 1);
  }
  if (!fs::exists(path)) throw Error(ErrorKind::kIo, fmt::format("no such corpus '{}'", path));
  if (!fs::is_directory(path)) return LoadCorpus(path, name);
  Corpus corpus;
  corpus.name = name.empty() ? fs::path(path).filename().string() : name;
  corpus.language = language;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".tml" || ext == ".xml")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      corpus.documents.push_back(ReadTimeMl(ReadInput(f.string()), "", language));
    } catch (const Error& e) {
      throw Error(e.kind(), fmt::format("{}: {}", f.string(), e.what()));
    }
  }
  ValidateCorpus(corpus);
  return corpus;
}

std::vector<Corpus> LoadCorpora(const std::vector<std::string>& args,
                                const std::string& language) {
  std::vector<Corpus> out;
  for (const auto& a : args) {
    out.push_back(LoadAnyCorpus(a, language));
    for (size_t i = 0; i + 1 < out.size(); ++i) {
      if (out[i].name == out.back().name) {
        Usage(fmt::format("corpus name '{}' given twice; use name=path", out.back().name));
      }
    }
  }
  return out;
}

std::optional<Partition> ParsePartition(const std::string& s) {
  if (s == "train") return Partition::kTrain;
  if (s == "validation" || s == "val") return Partition::kValidation;
  if (s == "test") return Partition::kTest;
  return std::nullopt;
}

// Documents of `corpus` in `partition` ("all" keeps every document).
Corpus Restrict(const Corpus& corpus, const std::string& partition, uint64_t seed) {
  if (partition == "all") return corpus;
  const auto p = ParsePartition(partition);
  if (!p) Usage(fmt::format("unknown partition '{}'", partition));
  Corpus out = corpus;
  out.documents = SelectPartition(corpus, SplitCorpus(corpus, seed), *p);
  return out;
}

// A trained model file or "rules:<language|path>" for the rule teacher.
struct Predictor {
  std::string name;
  std::string language;
  std::optional<TaggerModel> model;
  std::optional<RuleSet> rules;

  SpanPredictor Function() const {
    if (model) return ModelPredictor(*model);
    const RuleSet* r = &*rules;
    return [r](const Document& d) { return AnnotateDocument(d, *r); };
  }
  std::vector<TimexSpan> Run(const std::string& text) const {
    if (model) return Tag(*model, text);
    return Annotate(text, std::nullopt, *rules);
  }
};

RuleSet LoadRules(const std::string& spec) {
  const auto langs = RuleSet::BuiltinLanguages();
  if (std::find(langs.begin(), langs.end(), spec) != langs.end()) return RuleSet::Builtin(spec);
  return RuleSet::Load(spec);
}

Predictor LoadPredictor(const std::string& spec) {
  Predictor p;
  p.name = spec;
  if (spec.rfind("rules:", 0) == 0) {
    p.rules = LoadRules(spec.substr(6));
    p.language = p.rules->language();
  } else {
    p.model = LoadModelFile(spec);
    p.language = p.model->language;
  }
  return p;
}

void CheckLanguage(const Predictor& p, const Corpus& c) {
  if (p.language != c.language) {
    throw Error(ErrorKind::kLanguage,
                fmt::format("model language '{}' does not match corpus '{}' ({})", p.language,
                            c.name, c.language));
  }
}

std::chrono::nanoseconds ParseBudget(const std::string& text) {
  size_t pos = 0;
  while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                               text[pos] == '.')) {
    ++pos;
  }
  const std::string number = text.substr(0, pos), unit = text.substr(pos);
  char* end = nullptr;
  const double v = number.empty() ? -1 : std::strtod(number.c_str(), &end);
  double scale = 0;
  if (unit == "ms") scale = 1e6;
  if (unit == "s" || unit.empty()) scale = 1e9;
  if (unit == "m") scale = 60e9;
  if (unit == "h") scale = 3600e9;
  if (number.empty() || end != number.c_str() + number.size() || scale == 0 || !(v > 0)) {
    Usage(fmt::format("invalid budget '{}' (examples: 500ms, 30s, 2m, 1h)", text));
  }
  return std::chrono::nanoseconds(static_cast<int64_t>(v * scale));
}

// JSON string body with only the mandatory escapes, so that raw non-UTF-8
// bytes pass through untouched.
std::string EscapeBytes(std::string_view s) {
  std::string out;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (u < 0x20) {
      out += fmt::format("\\u{:04x}", u);
    } else {
      out += c;
    }
  }
  return out;
}

std::string RawDocumentLine(const RawDocument& raw) {
  json j = {{"id", raw.id}, {"fetched_at", raw.fetched_at}};
  j["dct"] = raw.dct ? json(*raw.dct) : json(nullptr);
  if (unicode::IsValidUtf8(raw.text) &&
      (!raw.dct || unicode::IsValidUtf8(*raw.dct))) {
    j["text"] = raw.text;
    return j.dump();
  }
  std::string line = "{";
  line += fmt::format("\"dct\":{},", raw.dct ? "\"" + EscapeBytes(*raw.dct) + "\"" : "null");
  line += fmt::format("\"fetched_at\":\"{}\",", EscapeBytes(raw.fetched_at));
  line += fmt::format("\"id\":\"{}\",", EscapeBytes(raw.id));
  line += fmt::format("\"text\":\"{}\"}}", EscapeBytes(raw.text));
  return line;
}

// Raw JSONL stream. Lines that are not valid UTF-8 cannot be decoded as
// JSON; they become documents whose text is the raw line, which the
// filter then rejects as non-UTF-8.
RawStream RawJsonlStream(const std::string& path) {
  auto in = std::make_shared<std::ifstream>(path, std::ios::binary);
  if (!*in) throw Error(ErrorKind::kIo, fmt::format("cannot open '{}'", path));
  const std::string stem = fs::path(path).stem().string();
  auto line_no = std::make_shared<size_t>(0);
  return [in, stem, line_no, path]() -> std::optional<RawDocument> {
    std::string line;
    while (std::getline(*in, line)) {
      ++*line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      RawDocument raw;
      raw.id = fmt::format("{}-{}", stem, *line_no);
      if (!unicode::IsValidUtf8(line)) {
        raw.text = line;
        return raw;
      }
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw Error(ErrorKind::kParse, fmt::format("{}:{}: {}", path, *line_no, e.what()));
      }
      if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
        throw Error(ErrorKind::kFormat,
                    fmt::format("{}:{}: raw document needs a \"text\" string", path, *line_no));
      }
      raw.text = j["text"].get<std::string>();
      if (j.contains("id") && j["id"].is_string()) raw.id = j["id"].get<std::string>();
      if (j.contains("dct") && j["dct"].is_string()) raw.dct = j["dct"].get<std::string>();
      if (j.contains("fetched_at") && j["fetched_at"].is_string()) {
        raw.fetched_at = j["fetched_at"].get<std::string>();
      }
      return raw;
    }
    return std::nullopt;
  };
}

std::string StatsTable(const std::vector<std::pair<std::string, CorpusStats>>& rows) {
  std::string out = fmt::format("{:<24} {:>8} {:>8} {:>10} {:>8}\n", "corpus", "Docs", "Sents",
                                "Tokens", "Timexs");
  for (const auto& [name, s] : rows) {
    out += fmt::format("{:<24} {:>8} {:>8} {:>10} {:>8}\n", name, s.n_docs, s.n_sentences,
                       s.n_tokens, s.n_timexs);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

struct SplitArgs {
  std::vector<std::string> in;
  uint64_t seed = 1;
  std::string lang = "en";
  std::string out = "-";
  std::string emit;
};

int CmdSplit(const SplitArgs& a) {
  const auto corpora = LoadCorpora(a.in, a.lang);
  json j = {{"schema_version", 1}, {"seed", a.seed}, {"corpora", json::array()}};
  for (const auto& c : corpora) {
    const SplitAssignment split = SplitCorpus(c, a.seed);
    json assignment = json::object();
    for (const auto& [id, p] : split.assignment) assignment[id] = PartitionName(p);
    j["corpora"].push_back({{"name", c.name},
                            {"train", split.Count(Partition::kTrain)},
                            {"validation", split.Count(Partition::kValidation)},
                            {"test", split.Count(Partition::kTest)},
                            {"assignment", assignment}});
    if (!a.emit.empty()) {
      fs::create_directories(a.emit);
      for (Partition p : {Partition::kTrain, Partition::kValidation, Partition::kTest}) {
        Corpus part = c;
        part.documents = SelectPartition(c, split, p);
        SaveCorpus(part, (fs::path(a.emit) / fmt::format("{}.{}.jsonl", c.name,
                                                         PartitionName(p)))
                             .string());
      }
    }
    std::cerr << fmt::format("{}: train {} validation {} test {}\n", c.name,
                             split.Count(Partition::kTrain),
                             split.Count(Partition::kValidation), split.Count(Partition::kTest));
  }
  WriteOutput(a.out, j.dump(2) + "\n");
  return kOk;
}

struct MixArgs {
  std::string mode = "base";
  std::string ref;
  std::vector<std::string> aux;
  std::vector<std::string> weak;
  std::string lang = "en";
  uint64_t seed = 1;
  std::string partition = "train";
};

struct MixedData {
  MixSpec spec;
  std::map<std::string, Corpus> corpora;
  std::map<std::string, SplitAssignment> splits;
};

MixedData PrepareMix(const MixArgs& a) {
  const auto mode = ParseMixMode(a.mode);
  if (!mode) Usage(fmt::format("unknown mix '{}' (base, compilation, all)", a.mode));
  if (a.ref.empty()) Usage("--ref is required");
  MixedData m;
  m.spec.mode = *mode;
  std::vector<std::string> all = {a.ref};
  all.insert(all.end(), a.aux.begin(), a.aux.end());
  all.insert(all.end(), a.weak.begin(), a.weak.end());
  const auto loaded = LoadCorpora(all, a.lang);
  m.spec.reference = loaded[0].name;
  for (size_t i = 0; i < a.aux.size(); ++i) m.spec.auxiliary.push_back(loaded[1 + i].name);
  for (size_t i = 0; i < a.weak.size(); ++i) {
    m.spec.weak.push_back(loaded[1 + a.aux.size() + i].name);
  }
  for (const auto& c : loaded) {
    m.splits[c.name] = SplitCorpus(c, a.seed);
    m.corpora[c.name] = c;
  }
  if (*mode == MixMode::kCompilation && a.aux.empty()) {
    spdlog::warn("compilation mix without --aux corpora: training on the reference only");
  }
  if (*mode == MixMode::kAll && a.aux.empty() && a.weak.empty()) {
    spdlog::warn("all mix without --aux or --weak corpora: training on the reference only");
  }
  if (*mode == MixMode::kBase && (!a.aux.empty() || !a.weak.empty())) {
    spdlog::warn("base mix ignores --aux and --weak corpora");
  }
  return m;
}

int CmdMix(const MixArgs& a, const std::string& out) {
  if (!ParsePartition(a.partition)) Usage(fmt::format("unknown partition '{}'", a.partition));
  const MixedData m = PrepareMix(a);
  Corpus mixed = Mix(m.spec, m.corpora, m.splits, *ParsePartition(a.partition));
  std::string bytes;
  for (const auto& d : mixed.documents) bytes += WriteJsonl(d) + "\n";
  WriteOutput(out, bytes);
  std::cerr << fmt::format("{} documents ({} mix, {} partition)\n", mixed.documents.size(),
                           MixModeName(m.spec.mode), a.partition);
  return kOk;
}

struct TrainArgs {
  MixArgs mix;
  std::string config = "1";
  std::string grid_file;
  std::string out;
  std::string report;
  std::string leaderboard;
  int max_epochs = 30;
  size_t threads = 0;
};

int CmdTrain(const TrainArgs& a) {
  if (a.out.empty()) Usage("--out is required");
  if (a.max_epochs < 1) Usage("--max-epochs must be positive");
  const bool grid = a.config == "grid";
  std::optional<int> id;
  if (!grid) {
    try {
      size_t used = 0;
      id = std::stoi(a.config, &used);
      if (used != a.config.size()) throw std::invalid_argument(a.config);
    } catch (const std::exception&) {
      Usage(fmt::format("--config must be a grid id or 'grid', got '{}'", a.config));
    }
  }
  const std::vector<HyperConfig> configs =
      a.grid_file.empty() ? DefaultGrid() : LoadGrid(a.grid_file);
  std::vector<HyperConfig> selected;
  for (const auto& c : configs) {
    if (grid || c.id == *id) selected.push_back(c);
  }
  if (selected.empty()) Usage(fmt::format("no config with id {} in the grid", a.config));
  if (!ParseMixMode(a.mix.mode)) {
    Usage(fmt::format("unknown mix '{}' (base, compilation, all)", a.mix.mode));
  }

  const MixedData m = PrepareMix(a.mix);
  const Corpus train = Mix(m.spec, m.corpora, m.splits, Partition::kTrain);
  const Corpus val = Mix(m.spec, m.corpora, m.splits, Partition::kValidation);
  spdlog::info("{} mix: {} training and {} validation documents", MixModeName(m.spec.mode),
               train.documents.size(), val.documents.size());

  TrainOptions options;
  options.max_epochs = a.max_epochs;
  options.metadata.mix_mode = MixModeName(m.spec.mode);
  options.on_epoch = [](const HyperConfig& c, const EpochRecord& e) {
    spdlog::info("config {} epoch {}: loss {:.4f} val F1 {:.4f}", c.id, e.epoch, e.train_loss,
                 e.val_f1);
  };
  const std::string report_path = a.report.empty() ? a.out + ".json" : a.report;

  if (!grid) {
    const TrainResult r = Train(selected[0], train.documents, val.documents, options);
    SaveModelFile(r.model, a.out);
    WriteOutput(report_path, TrainReportJson(r.report) + "\n");
    std::cout << fmt::format("config {}: best epoch {} of {}, validation F1 {:.4f} ({})\n",
                             r.report.config_id, r.report.best_epoch, r.report.epochs.size(),
                             r.report.best_val_f1, StopReasonName(r.report.stop_reason));
    return kOk;
  }
  const size_t threads = a.threads ? std::min(a.threads, ThreadCap()) : ThreadCap();
  const GridResult g = GridSearch(selected, train.documents, val.documents, options, threads);
  SaveModelFile(g.best_model, a.out);
  for (const auto& run : g.runs) {
    if (run.config.id == g.best_id) WriteOutput(report_path, TrainReportJson(*run.report) + "\n");
  }
  WriteOutput(a.leaderboard.empty() ? a.out + ".leaderboard.json" : a.leaderboard,
              LeaderboardJson(g) + "\n");
  std::cout << LeaderboardTable(g);
  return kOk;
}

struct TagArgs {
  std::string model;
  std::string in = "-";
  std::string out = "-";
  std::string format = "text";
};

int CmdTag(const TagArgs& a) {
  if (a.format != "text" && a.format != "jsonl") {
    Usage(fmt::format("unknown format '{}' (text, jsonl)", a.format));
  }
  const Predictor p = LoadPredictor(a.model);
  std::ifstream file;
  if (a.in != "-") {
    file.open(a.in, std::ios::binary);
    if (!file) throw Error(ErrorKind::kIo, fmt::format("cannot open '{}'", a.in));
  }
  std::istream& in = a.in == "-" ? std::cin : file;
  // Streaming output goes straight to its destination; a file output is
  // still written through a temporary name.
  std::ofstream out_file;
  const std::string tmp = a.out + ".tmp";
  if (a.out != "-") {
    out_file.open(tmp, std::ios::binary | std::ios::trunc);
    if (!out_file) throw Error(ErrorKind::kIo, fmt::format("cannot write '{}'", a.out));
  }
  std::ostream& out = a.out == "-" ? std::cout : out_file;
  std::string line;
  size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      Document doc;
      if (a.format == "text") {
        if (!unicode::IsValidUtf8(line)) {
          throw Error(ErrorKind::kValidation, fmt::format("line {}: invalid UTF-8", line_no));
        }
        doc.id = fmt::format("line-{}", line_no);
        doc.text = line;
        doc.language = p.language;
      } else {
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        doc = ReadJsonl(line);
        if (doc.id.empty()) doc.id = fmt::format("line-{}", line_no);
        if (doc.language != p.language) {
          throw Error(ErrorKind::kLanguage,
                      fmt::format("line {}: document language '{}' but model language '{}'",
                                  line_no, doc.language, p.language));
        }
      }
      doc.spans = p.Run(doc.text);
      doc.provenance = Provenance::kWeak;
      out << WriteJsonl(doc) << '\n' << std::flush;
    }
  } catch (...) {
    if (a.out != "-") {
      out_file.close();
      fs::remove(tmp);
    }
    throw;
  }
  if (a.out != "-") {
    out_file.close();
    if (!out_file) throw Error(ErrorKind::kIo, fmt::format("write failed for '{}'", a.out));
    fs::rename(tmp, a.out);
  }
  return kOk;
}

struct EvalArgs {
  std::string model;
  std::vector<std::string> in;
  std::string lang = "en";
  std::string partition = "all";
  uint64_t seed = 1;
  size_t reps = 0;
  size_t threads = 0;
  std::string out;
};

int CmdEval(const EvalArgs& a, bool bench) {
  if (a.partition != "all" && !ParsePartition(a.partition)) {
    Usage(fmt::format("unknown partition '{}'", a.partition));
  }
  if (bench && a.reps == 0) Usage("--reps must be positive");
  const Predictor p = LoadPredictor(a.model);
  const auto corpora = LoadCorpora(a.in, a.lang);
  EvalOptions options;
  options.benchmark_repetitions = a.reps;
  options.threads = a.threads ? std::min(a.threads, ThreadCap()) : ThreadCap();
  json reports = json::array();
  std::string table = bench ? fmt::format("{:<24} {:>10} {:>10} {:>6}\n", "corpus", "ms/sent",
                                          "stddev", "reps")
                            : EvalTableHeader() + "\n";
  for (const auto& full : corpora) {
    CheckLanguage(p, full);
    const Corpus c = Restrict(full, a.partition, a.seed);
    if (bench) {
      const LatencyStats s = Benchmark(p.Function(), c, a.reps);
      json samples = s.samples;
      reports.push_back({{"corpus", c.name},
                         {"mean_ms_per_sentence", s.mean_ms_per_sentence},
                         {"stddev_ms_per_sentence", s.stddev_ms_per_sentence},
                         {"repetitions", s.repetitions},
                         {"samples_ms_per_sentence", samples}});
      table += fmt::format("{:<24} {:>10.3f} {:>10.3f} {:>6}\n", c.name, s.mean_ms_per_sentence,
                           s.stddev_ms_per_sentence, s.repetitions);
    } else {
      const EvalReport r = EvaluatePredictor(p.Function(), c, options);
      reports.push_back(json::parse(EvalReportJson(r, c.name, p.name)));
      table += EvalTableRow(r, c.name) + "\n";
    }
  }
  std::cout << table;
  if (!a.out.empty()) {
    const json j = {{"schema_version", 1},
                    {"model", p.name},
                    {"partition", a.partition},
                    {"seed", a.seed},
                    {"reports", reports}};
    WriteOutput(a.out, j.dump(2) + "\n");
  }
  return kOk;
}

struct WeakArgs {
  std::string in;
  size_t synthetic = 0;
  uint64_t seed = 1;
  std::string rules = "en";
  std::string budget = "1h";
  std::string name = "weak";
  std::string out;
  std::string report;
};

int CmdWeaklabel(const WeakArgs& a) {
  if (a.out.empty()) Usage("--out is required");
  if (a.in.empty() == (a.synthetic == 0)) Usage("give exactly one of --in and --synthetic");
  const auto budget = ParseBudget(a.budget);
  const RuleSet rules = LoadRules(a.rules);
  RawStream stream;
  if (a.synthetic) {
    NewsStreamOptions o;
    o.seed = a.seed;
    o.n_docs = a.synthetic;
    stream = NewsStream(o);
  } else {
    stream = RawJsonlStream(a.in);
  }
  WeakCorpusOptions options;
  options.name = a.name;
  options.language = rules.language();
  options.budget = budget;
  const WeakCorpusResult r = BuildWeakCorpus(stream, RuleAnnotator(rules), options);
  SaveCorpus(r.corpus, a.out);
  json j = json::parse(FilterReportJson(r.report));
  j["budget_exhausted"] = r.budget_exhausted;
  WriteOutput(a.report.empty() ? a.out + ".filter.json" : a.report, j.dump(2) + "\n");
  std::cout << fmt::format(
      "kept {} of {} (non_utf8 {}, bad_dct {}, html {}, zero_timex {}){}\n", r.report.kept,
      r.report.total(), r.report.rejected_non_utf8, r.report.rejected_bad_dct,
      r.report.rejected_html, r.report.rejected_zero_timex,
      r.budget_exhausted ? ", budget exhausted" : "");
  return kOk;
}

struct StatsArgs {
  std::vector<std::string> in;
  std::string lang = "en";
  std::string out;
};

int CmdStats(const StatsArgs& a) {
  const auto corpora = LoadCorpora(a.in, a.lang);
  std::vector<std::pair<std::string, CorpusStats>> rows;
  json list = json::array();
  for (const auto& c : corpora) {
    const CorpusStats s = ComputeStats(c, Tokenizer(TokenizerConfig{TokenizerConfig::kCurrentVersion, c.language}));
    rows.emplace_back(c.name, s);
    list.push_back({{"name", c.name},
                    {"language", c.language},
                    {"docs", s.n_docs},
                    {"sentences", s.n_sentences},
                    {"tokens", s.n_tokens},
                    {"timexs", s.n_timexs}});
  }
  std::cout << StatsTable(rows);
  if (!a.out.empty()) {
    WriteOutput(a.out, json{{"schema_version", 1}, {"corpora", list}}.dump(2) + "\n");
  }
  return kOk;
}

struct SynthArgs {
  std::string kind;
  size_t docs = 200;
  uint64_t seed = 1;
  double html_rate = 0, bad_dct_rate = 0, non_utf8_rate = 0;
  std::string out = "-";
};

int CmdSynth(const SynthArgs& a) {
  std::string bytes;
  if (a.kind == "template") {
    for (const auto& d : TemplateCorpus(a.docs, a.seed).documents) bytes += WriteJsonl(d) + "\n";
  } else if (a.kind == "news") {
    NewsStreamOptions o;
    o.seed = a.seed;
    o.n_docs = a.docs;
    o.html_rate = a.html_rate;
    o.bad_dct_rate = a.bad_dct_rate;
    o.non_utf8_rate = a.non_utf8_rate;
    NewsGenerator gen(o);
    while (auto raw = gen.Next()) bytes += RawDocumentLine(*raw) + "\n";
  } else {
    Usage(fmt::format("unknown synthetic kind '{}' (template, news)", a.kind));
  }
  WriteOutput(a.out, bytes);
  return kOk;
}

int Run(int argc, char** argv) {
  CLI::App app{"teigo: temporal expression tagging toolkit"};
  app.require_subcommand(1);
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Warnings and errors only");

  std::function<int()> action;

  SplitArgs split;
  auto* s = app.add_subcommand("split", "80/20 document-level train/validation/test split");
  s->add_option("--in", split.in, "Corpora (path or name=path)")->required();
  s->add_option("--seed", split.seed, "Split seed");
  s->add_option("--lang", split.lang, "Language of TimeML directories");
  s->add_option("--out", split.out, "Split assignment JSON (- for stdout)");
  s->add_option("--emit", split.emit, "Also write <name>.<partition>.jsonl files here");
  s->callback([&] { action = [&] { return CmdSplit(split); }; });

  MixArgs mix;
  std::string mix_out = "-";
  auto* m = app.add_subcommand("mix", "Assemble a Base/Compilation/All mixture");
  m->add_option("--mode,--mix", mix.mode, "base, compilation or all");
  m->add_option("--ref", mix.ref, "Reference corpus")->required();
  m->add_option("--aux", mix.aux, "Auxiliary gold corpora");
  m->add_option("--weak", mix.weak, "Weakly labelled corpora");
  m->add_option("--seed", mix.seed, "Split seed");
  m->add_option("--partition", mix.partition, "train, validation or test");
  m->add_option("--lang", mix.lang, "Language of TimeML directories");
  m->add_option("--out", mix_out, "Output JSONL (- for stdout)");
  m->callback([&] { action = [&] { return CmdMix(mix, mix_out); }; });

  TrainArgs train;
  auto add_train = [&](CLI::App* t, bool grid) {
    t->add_option("--mix", train.mix.mode, "base, compilation or all");
    t->add_option("--ref", train.mix.ref, "Reference corpus")->required();
    t->add_option("--aux", train.mix.aux, "Auxiliary gold corpora");
    t->add_option("--weak", train.mix.weak, "Weakly labelled corpora");
    t->add_option("--seed", train.mix.seed, "Split seed");
    t->add_option("--lang", train.mix.lang, "Language of TimeML directories");
    if (!grid) t->add_option("--config", train.config, "Grid config id, or 'grid'");
    t->add_option("--grid-file", train.grid_file, "Grid file (default: the built-in 26)");
    t->add_option("--out", train.out, "Model file")->required();
    t->add_option("--report", train.report, "Training report JSON (default <out>.json)");
    t->add_option("--leaderboard", train.leaderboard,
                  "Leaderboard JSON for grid runs (default <out>.leaderboard.json)");
    t->add_option("--max-epochs", train.max_epochs, "Epoch limit");
    t->add_option("--threads", train.threads, "Parallel configs (capped by TEIGO_THREADS)");
  };
  auto* t = app.add_subcommand("train", "Train a tagger on a corpus mixture");
  add_train(t, false);
  t->callback([&] { action = [&] { return CmdTrain(train); }; });
  auto* g = app.add_subcommand("grid", "Grid search; same as train --config grid");
  add_train(g, true);
  g->callback([&] {
    train.config = "grid";
    action = [&] { return CmdTrain(train); };
  });

  TagArgs tag;
  auto* tg = app.add_subcommand("tag", "Tag text or JSONL documents, one line at a time");
  tg->add_option("--model", tag.model, "Model file or rules:<lang|path>")->required();
  tg->add_option("--in", tag.in, "Input file (- for stdin)");
  tg->add_option("--out", tag.out, "Output JSONL (- for stdout)");
  tg->add_option("--format", tag.format, "Input format: text or jsonl; output is JSONL");
  tg->callback([&] { action = [&] { return CmdTag(tag); }; });

  EvalArgs eval;
  auto add_eval = [&](CLI::App* e) {
    e->add_option("--model", eval.model, "Model file or rules:<lang|path>")->required();
    e->add_option("--in", eval.in, "Gold corpora (path or name=path)")->required();
    e->add_option("--partition", eval.partition, "all, train, validation or test");
    e->add_option("--seed", eval.seed, "Split seed for --partition");
    e->add_option("--lang", eval.lang, "Language of TimeML directories");
    e->add_option("--out", eval.out, "Report JSON");
  };
  auto* ev = app.add_subcommand("eval", "Strict and relaxed F1");
  add_eval(ev);
  ev->add_option("--reps", eval.reps, "Latency repetitions (0 skips timing)");
  ev->add_option("--threads", eval.threads, "Tagging threads (capped by TEIGO_THREADS)");
  ev->callback([&] { action = [&] { return CmdEval(eval, false); }; });
  auto* bn = app.add_subcommand("bench", "Tagging time per sentence");
  add_eval(bn);
  bn->add_option("--reps", eval.reps, "Timed repetitions");
  bn->callback([&] {
    if (bn->count("--reps") == 0) eval.reps = 5;
    action = [&] { return CmdEval(eval, true); };
  });

  WeakArgs weak;
  auto* w = app.add_subcommand("weaklabel", "Filter and annotate raw news with the rule teacher");
  w->add_option("--in", weak.in, "Raw JSONL (id, text, dct, fetched_at)");
  w->add_option("--synthetic", weak.synthetic, "Generate this many news documents instead");
  w->add_option("--seed", weak.seed, "Seed for --synthetic");
  w->add_option("--rules", weak.rules, "Built-in language or rules file");
  w->add_option("--budget", weak.budget, "Wall-clock budget, e.g. 30s, 2m, 1h");
  w->add_option("--name", weak.name, "Corpus name");
  w->add_option("--out", weak.out, "Weak corpus JSONL")->required();
  w->add_option("--report", weak.report, "Filter report JSON (default <out>.filter.json)");
  w->callback([&] { action = [&] { return CmdWeaklabel(weak); }; });

  StatsArgs stats;
  auto* st = app.add_subcommand("stats", "Documents, sentences, tokens and timexes");
  st->add_option("--in", stats.in, "Corpora (path or name=path)")->required();
  st->add_option("--lang", stats.lang, "Language of TimeML directories");
  st->add_option("--out", stats.out, "Statistics JSON");
  st->callback([&] { action = [&] { return CmdStats(stats); }; });

  SynthArgs synth;
  auto* sy = app.add_subcommand("synth", "Generate a synthetic corpus or raw news stream");
  sy->add_option("kind", synth.kind, "template or news")->required();
  sy->add_option("--docs", synth.docs, "Number of documents");
  sy->add_option("--seed", synth.seed, "Generator seed");
  sy->add_option("--html-rate", synth.html_rate, "news: share of HTML documents");
  sy->add_option("--bad-dct-rate", synth.bad_dct_rate, "news: share with a bad DCT");
  sy->add_option("--non-utf8-rate", synth.non_utf8_rate, "news: share with invalid UTF-8");
  sy->add_option("--out", synth.out, "Output JSONL (- for stdout)");
  sy->callback([&] { action = [&] { return CmdSynth(synth); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageExit;
  }
  auto logger = spdlog::stderr_color_mt("teigo");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$: %v");
  spdlog::set_level(verbose ? spdlog::level::debug
                            : quiet ? spdlog::level::warn : spdlog::level::info);
  try {
    ThreadCap();
    return action();
  } catch (const Error& e) {
    spdlog::error("{}: {}", ErrorKindName(e.kind()), e.what());
    return ExitCodeFor(e.kind());
  } catch (const fs::filesystem_error& e) {
    spdlog::error("io: {}", e.what());
    return kDataExit;
  } catch (const std::exception& e) {
    spdlog::error("internal: {}", e.what());
    return kInternalExit;
  }
}

}  // namespace
}  // namespace teigo::cli

int main(int argc, char** argv) { return teigo::cli::Run(argc, argv); }
