// Copyright 2026 The StreamForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "streamforge/cli/dispatch.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "streamforge/amrules/learners.hpp"
#include "streamforge/common/error.hpp"
#include "streamforge/eval/prequential.hpp"
#include "streamforge/generators/generators.hpp"
#include "streamforge/instance/arff.hpp"
#include "streamforge/vht/learners.hpp"

namespace streamforge::cli {

namespace {

// Reads the flags of one component, rejecting unknown and nested ones.
class FlagReader {
 public:
  FlagReader(const ComponentSpec& spec, std::vector<std::string> allowed) : spec_(spec), allowed_(std::move(allowed)) {
    for (const auto& f : spec.flags) {
      if (std::find(allowed_.begin(), allowed_.end(), f.name) == allowed_.end()) {
        std::string valid;
        for (const auto& a : allowed_) valid += (valid.empty() ? "-" : ", -") + a;
        throw ConfigError(spec.name + " has no flag -" + f.name + (valid.empty() ? "" : "; valid flags: " + valid));
      }
      if (f.isComponent()) throw ConfigError(spec.name + " flag -" + f.name + " takes a plain value");
    }
  }

  std::optional<std::string> text(const std::string& name) const {
    const Flag* f = spec_.find(name);
    if (!f) return std::nullopt;
    return f->value;
  }

  double real(const std::string& name, double fallback) const {
    auto t = text(name);
    if (!t) return fallback;
    double v = 0.0;
    auto [end, ec] = std::from_chars(t->data(), t->data() + t->size(), v);
    if (ec != std::errc() || end != t->data() + t->size()) throw bad(name, "a number", *t);
    return v;
  }

  std::uint64_t integer(const std::string& name, std::uint64_t fallback) const {
    auto t = text(name);
    if (!t) return fallback;
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(t->data(), t->data() + t->size(), v);
    if (ec != std::errc() || end != t->data() + t->size()) throw bad(name, "a non-negative integer", *t);
    return v;
  }

  bool boolean(const std::string& name, bool fallback) const {
    auto t = text(name);
    if (!t) return fallback;
    if (*t == "true") return true;
    if (*t == "false") return false;
    throw bad(name, "true or false", *t);
  }

  ConfigError bad(const std::string& name, const std::string& expected, const std::string& got) const {
    return ConfigError(spec_.name + " flag -" + name + " expects " + expected + ", got '" + got + "'");
  }

 private:
  const ComponentSpec& spec_;
  std::vector<std::string> allowed_;
};

void readTree(const FlagReader& r, vht::VhtConfig& c) {
  c.delta = r.real("d", c.delta);
  c.tieThreshold = r.real("t", c.tieThreshold);
  c.gracePeriod = r.real("g", c.gracePeriod);
}

// wok | wk | wkZ | "wk Z"
void readBuffering(const FlagReader& r, vht::VhtConfig& c) {
  auto t = r.text("b");
  if (!t) return;
  if (*t == "wok") {
    c.buffering = vht::Buffering::Wok;
    return;
  }
  if (t->starts_with("wk")) {
    std::string z = t->substr(2);
    z.erase(0, z.find_first_not_of(' '));
    c.buffering = vht::Buffering::Wk;
    if (z.empty()) {
      c.bufferSize = vht::VhtConfig::kUnbounded;
      return;
    }
    std::size_t v = 0;
    auto [end, ec] = std::from_chars(z.data(), z.data() + z.size(), v);
    if (ec == std::errc() && end == z.data() + z.size()) {
      c.bufferSize = v;
      return;
    }
  }
  throw r.bad("b", "wok, wk or wk followed by a buffer size", *t);
}

void readRules(const FlagReader& r, amrules::AmrConfig& c) {
  c.expansionPeriod = r.real("Nm", c.expansionPeriod);
  c.delta = r.real("delta", c.delta);
  c.tieThreshold = r.real("tau", c.tieThreshold);
  c.ordered = r.boolean("ordered", c.ordered);
}

struct LearnerEntry {
  std::vector<std::string> flags;
  std::string help;
  std::function<BuiltLearner(const FlagReader&)> make;
};

const std::map<std::string, LearnerEntry>& learners() {
  static const std::map<std::string, LearnerEntry> table{
      {"VerticalHoeffdingTree",
       {{"p", "d", "t", "g", "b", "timeout"},
        "-p P -d DELTA -t TAU -g NMIN -b {wok|wk|wkZ} -timeout EVENTS",
        [](const FlagReader& r) {
          vht::VhtConfig c;
          readTree(r, c);
          readBuffering(r, c);
          c.parallelism = r.integer("p", c.parallelism);
          c.splitTimeout = r.integer("timeout", c.splitTimeout);
          return BuiltLearner{std::make_shared<vht::VerticalHoeffdingTreeLearner>(c), false};
        }}},
      {"HoeffdingTreeLocal",
       {{"d", "t", "g"},
        "-d DELTA -t TAU -g NMIN",
        [](const FlagReader& r) {
          vht::VhtConfig c;
          readTree(r, c);
          return BuiltLearner{std::make_shared<vht::LocalHoeffdingTreeLearner>(c), false};
        }}},
      {"Sharding",
       {{"p", "d", "t", "g"},
        "-p SHARDS -d DELTA -t TAU -g NMIN",
        [](const FlagReader& r) {
          vht::VhtConfig c;
          readTree(r, c);
          return BuiltLearner{std::make_shared<vht::ShardingLearner>(c, r.integer("p", 1)), false};
        }}},
      {"AMRulesLocal",
       {{"Nm", "delta", "tau", "ordered"},
        "-Nm NM -delta DELTA -tau TAU -ordered {true|false}",
        [](const FlagReader& r) {
          amrules::AmrConfig c;
          readRules(r, c);
          return BuiltLearner{std::make_shared<amrules::AmrulesLocalLearner>(c), true};
        }}},
      {"VAMR",
       {{"p", "Nm", "delta", "tau", "ordered"},
        "-p LEARNERS -Nm NM -delta DELTA -tau TAU -ordered {true|false}",
        [](const FlagReader& r) {
          amrules::AmrConfig c;
          readRules(r, c);
          c.learners = r.integer("p", c.learners);
          return BuiltLearner{std::make_shared<amrules::VamrLearner>(c), true};
        }}},
      {"HAMR",
       {{"r", "p", "Nm", "delta", "tau", "ordered"},
        "-r AGGREGATORS -p LEARNERS -Nm NM -delta DELTA -tau TAU -ordered {true|false}",
        [](const FlagReader& r) {
          amrules::AmrConfig c;
          readRules(r, c);
          c.aggregators = r.integer("r", c.aggregators);
          c.learners = r.integer("p", c.learners);
          return BuiltLearner{std::make_shared<amrules::HamrLearner>(c), true};
        }}},
  };
  return table;
}

struct StreamEntry {
  std::vector<std::string> flags;
  std::string help;
  std::function<SourceFactory(const FlagReader&, std::uint64_t)> make;
};

template <class Source, class Config>
SourceFactory factoryOf(Config c) {
  // Constructing once here surfaces configuration errors before the run.
  Source probe(c);
  return [c] { return std::unique_ptr<StreamSource>(new Source(c)); };
}

const std::map<std::string, StreamEntry>& streams() {
  static const std::map<std::string, StreamEntry> table{
      {"ArffFileStream",
       {{"f", "c"},
        "-f PATH[.gz] -c TARGET_ATTRIBUTE",
        [](const FlagReader& r, std::uint64_t) {
          auto path = r.text("f");
          if (!path) throw ConfigError("ArffFileStream needs -f PATH");
          ArffOptions o;
          if (auto c = r.text("c")) o.targetAttribute = *c;
          ArffFileStream probe(*path, o);
          return SourceFactory([p = *path, o] { return std::unique_ptr<StreamSource>(new ArffFileStream(p, o)); });
        }}},
      {"RandomTreeGenerator",
       {{"c", "n", "v", "d", "k", "r"},
        "-c CATEGORICAL -n NUMERIC -v VALUES -d DEPTH -k CLASSES -r SEED",
        [](const FlagReader& r, std::uint64_t seed) {
          RandomTreeConfig c;
          c.categoricalCount = r.integer("c", c.categoricalCount);
          c.numericCount = r.integer("n", c.numericCount);
          c.valuesPerCategorical = r.integer("v", c.valuesPerCategorical);
          c.maxDepth = r.integer("d", c.maxDepth);
          c.classCount = r.integer("k", c.classCount);
          c.seed = r.integer("r", seed);
          return factoryOf<RandomTreeGenerator>(c);
        }}},
      {"RandomTweetGenerator",
       {{"d", "m", "sd", "z", "r"},
        "-d VOCABULARY -m MEAN_WORDS -sd SD_WORDS -z ZIPF_SKEW -r SEED",
        [](const FlagReader& r, std::uint64_t seed) {
          TweetConfig c;
          c.vocabularySize = r.integer("d", c.vocabularySize);
          c.meanWords = r.real("m", c.meanWords);
          c.sdWords = r.real("sd", c.sdWords);
          c.zipfSkew = r.real("z", c.zipfSkew);
          c.seed = r.integer("r", seed);
          return factoryOf<RandomTweetGenerator>(c);
        }}},
      {"WaveformGenerator",
       {{"n", "r"},
        "-n NOISE_ATTRIBUTES -r SEED",
        [](const FlagReader& r, std::uint64_t seed) {
          WaveformConfig c;
          c.noiseAttributes = r.integer("n", c.noiseAttributes);
          c.seed = r.integer("r", seed);
          return factoryOf<WaveformGenerator>(c);
        }}},
  };
  return table;
}

template <class Table>
std::string namesOf(const Table& t) {
  std::string out;
  for (const auto& [name, entry] : t) out += (out.empty() ? "" : ", ") + name;
  return out;
}

// A component given as a bare word (-l VAMR) has no flags.
ComponentSpec componentOf(const Flag& f) { return f.isComponent() ? f.component.front() : ComponentSpec{f.value, {}}; }

std::string fileSafe(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

std::string csvName(const ComponentSpec& learner, const ComponentSpec& stream, std::uint64_t seed) {
  return fileSafe(learner.name) + "_" + fileSafe(stream.name) + "_seed" + std::to_string(seed) + ".csv";
}

void writeAtomically(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.parent_path() / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw Error("cannot write " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string usage() {
  return "usage: streamforge run [-mode det|par] [-workers N] [-seed S] [-o DIR] \"<task string>\"\n"
         "       streamforge list\n";
}

}  // namespace

BuiltLearner makeLearner(const ComponentSpec& spec) {
  auto it = learners().find(spec.name);
  if (it == learners().end()) {
    throw ConfigError("unknown learner '" + spec.name + "'; valid learners: " + namesOf(learners()));
  }
  return it->second.make(FlagReader(spec, it->second.flags));
}

SourceFactory makeSource(const ComponentSpec& spec, std::uint64_t defaultSeed) {
  auto it = streams().find(spec.name);
  if (it == streams().end()) {
    throw ConfigError("unknown stream '" + spec.name + "'; valid streams: " + namesOf(streams()));
  }
  return it->second.make(FlagReader(spec, it->second.flags), defaultSeed);
}

std::string listComponents() {
  std::ostringstream out;
  out << "tasks:\n  PrequentialEvaluation -l (LEARNER) -s (STREAM) -f REPORT_EVERY -i MAX_INSTANCES\n";
  out << "learners:\n";
  for (const auto& [name, e] : learners()) out << "  " << name << " " << e.help << "\n";
  out << "streams:\n";
  for (const auto& [name, e] : streams()) out << "  " << name << " " << e.help << "\n";
  return out.str();
}

std::string dispatch(const TaskSpec& task, const RunOptions& options, std::ostream& out) {
  if (task.name != "PrequentialEvaluation") {
    throw ConfigError("unknown task '" + task.name + "'; valid tasks: PrequentialEvaluation");
  }
  for (const auto& f : task.flags) {
    if (f.name != "l" && f.name != "s" && f.name != "f" && f.name != "i") {
      throw ConfigError("PrequentialEvaluation has no flag -" + f.name + "; valid flags: -l, -s, -f, -i");
    }
  }
  const Flag* l = task.find("l");
  const Flag* s = task.find("s");
  if (!l) throw ConfigError("PrequentialEvaluation needs a learner: -l (LEARNER ...)");
  if (!s) throw ConfigError("PrequentialEvaluation needs a stream: -s (STREAM ...)");
  ComponentSpec scalars{task.name, {}};
  for (const auto& f : task.flags) {
    if (f.name == "f" || f.name == "i") scalars.flags.push_back(f);
  }
  FlagReader reader(scalars, {"f", "i"});
  const std::uint64_t frequency = reader.integer("f", 100000);
  const std::uint64_t maxInstances = reader.integer("i", std::numeric_limits<std::uint64_t>::max());
  if (frequency < 1) throw ConfigError("PrequentialEvaluation flag -f must be at least 1");

  const ComponentSpec learnerSpec = componentOf(*l);
  const ComponentSpec streamSpec = componentOf(*s);
  BuiltLearner built = makeLearner(learnerSpec);
  const std::uint64_t seed = options.seed.value_or(1);
  SourceFactory source = makeSource(streamSpec, seed);
  if (built.regression && source()->schema().isClassification()) {
    source = [inner = std::move(source)] { return std::unique_ptr<StreamSource>(new RegressionView(inner())); };
  }

  namespace fs = std::filesystem;
  const fs::path dir(options.outputDir);
  if (!fs::is_directory(dir)) throw ConfigError("output directory " + dir.string() + " does not exist");

  PrequentialTask prequential(PrequentialConfig{source, built.learner, frequency, maxInstances});
  EngineConfig engine = options.mode == ExecutionMode::Parallel ? EngineConfig::parallel(options.workers, seed)
                                                                : EngineConfig::deterministic(seed);
  PrequentialResult result = runPrequential(prequential, engine);

  // Wall-clock columns would make deterministic reruns differ byte-wise.
  const bool timing = options.mode == ExecutionMode::Parallel;
  std::string csv = csvHeader(result.classification) + "\n";
  for (const auto& row : result.rows) csv += csvRow(row, timing) + "\n";
  const fs::path path = dir / csvName(learnerSpec, streamSpec, seed);
  writeAtomically(path, csv);

  out << csvHeader(result.classification) << "\n";
  if (!result.rows.empty()) out << csvRow(result.rows.back(), true) << "\n";
  return path.string();
}

int runMain(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << usage();
    return kExitUsage;
  }
  if (args[0] == "list") {
    if (args.size() != 1) {
      err << usage();
      return kExitUsage;
    }
    out << listComponents();
    return kExitOk;
  }
  if (args[0] != "run") {
    err << "unknown command '" << args[0] << "'\n" << usage();
    return kExitUsage;
  }
  RunOptions options;
  std::optional<std::string> taskText;
  try {
    for (std::size_t i = 1; i < args.size(); ++i) {
      const std::string& a = args[i];
      auto value = [&]() -> const std::string& {
        if (i + 1 >= args.size()) throw ConfigError("missing value for " + a);
        return args[++i];
      };
      auto integer = [&](const std::string& v) {
        std::uint64_t n = 0;
        auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
        if (ec != std::errc() || end != v.data() + v.size()) throw ConfigError(a + " expects an integer, got '" + v + "'");
        return n;
      };
      if (a == "-mode") {
        const std::string& v = value();
        if (v == "det") {
          options.mode = ExecutionMode::Deterministic;
        } else if (v == "par") {
          options.mode = ExecutionMode::Parallel;
        } else {
          throw ConfigError("-mode expects det or par, got '" + v + "'");
        }
      } else if (a == "-workers") {
        options.workers = integer(value());
        if (options.workers < 1) throw ConfigError("-workers must be at least 1");
      } else if (a == "-seed") {
        options.seed = integer(value());
      } else if (a == "-o") {
        options.outputDir = value();
      } else if (!taskText && !a.starts_with('-')) {
        taskText = a;
      } else {
        throw ConfigError("unexpected argument '" + a + "'");
      }
    }
    if (!taskText) throw ConfigError("missing task string");
    TaskSpec task = parseTaskString(*taskText);
    dispatch(task, options, out);
    return kExitOk;
  } catch (const ParseError& e) {
    err << "parse error at offset " << e.position() << ": " << e.what() << "\n";
    if (taskText) err << "  " << *taskText << "\n  " << std::string(e.position(), ' ') << "^\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace streamforge::cli
