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

#include "streamforge/instance/arff.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "streamforge/common/error.hpp"

namespace streamforge {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool startsWithNoCase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    return std::string(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

/// Splits on `sep` outside single/double quotes.
std::vector<std::string_view> splitQuoted(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  char quote = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

/// Reads a possibly-quoted leading token; returns it and the remainder.
std::pair<std::string, std::string_view> leadingToken(std::string_view s) {
  s = trim(s);
  if (s.empty()) return {"", s};
  if (s.front() == '\'' || s.front() == '"') {
    char q = s.front();
    std::size_t end = s.find(q, 1);
    if (end == std::string_view::npos) return {"", std::string_view{}};
    return {std::string(s.substr(1, end - 1)), s.substr(end + 1)};
  }
  std::size_t end = 0;
  while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end])) && s[end] != '{') ++end;
  return {std::string(s.substr(0, end)), s.substr(end)};
}

class LineSource {
 public:
  virtual ~LineSource() = default;
  virtual bool next(std::string& line) = 0;
};

class StringLines final : public LineSource {
 public:
  explicit StringLines(std::string_view text) : text_(text) {}
  bool next(std::string& line) override {
    if (pos_ > text_.size() || (pos_ == text_.size() && text_.empty())) return false;
    if (pos_ == text_.size()) return false;
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    line.assign(text_.substr(pos_, end - pos_));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos_ = end + 1;
    return true;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

/// zlib reads uncompressed files transparently, so this serves both cases.
class GzLines final : public LineSource {
 public:
  explicit GzLines(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
    if (!file_) throw ConfigError("cannot open '" + path + "'");
    gzbuffer(file_, 1 << 17);
  }
  ~GzLines() override {
    if (file_) gzclose(file_);
  }
  GzLines(const GzLines&) = delete;
  GzLines& operator=(const GzLines&) = delete;

  bool next(std::string& line) override {
    line.clear();
    char buf[8192];
    bool any = false;
    while (gzgets(file_, buf, sizeof buf) != nullptr) {
      any = true;
      line.append(buf);
      if (!line.empty() && line.back() == '\n') break;
    }
    if (!any) return false;
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    return true;
  }

 private:
  gzFile file_;
};

struct ArffHeader {
  std::string relation;
  std::vector<AttributeSpec> declared;
  std::size_t targetIndex = 0;
};

/// Consumes lines up to and including @data.
ArffHeader readHeader(LineSource& lines, std::size_t& lineNo, const ArffOptions& options) {
  ArffHeader header;
  std::string raw;
  bool sawData = false;
  while (lines.next(raw)) {
    ++lineNo;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '%') continue;
    if (startsWithNoCase(line, "@relation")) {
      header.relation = unquote(line.substr(9));
    } else if (startsWithNoCase(line, "@attribute")) {
      auto [name, rest] = leadingToken(line.substr(10));
      rest = trim(rest);
      if (name.empty() || rest.empty()) {
        throw ParseError("line " + std::to_string(lineNo) + ": malformed @attribute", lineNo);
      }
      if (rest.front() == '{') {
        auto close = rest.rfind('}');
        if (close == std::string_view::npos) {
          throw ParseError("line " + std::to_string(lineNo) + ": unterminated value list",
                           lineNo);
        }
        std::vector<std::string> values;
        for (auto v : splitQuoted(rest.substr(1, close - 1), ',')) {
          values.push_back(unquote(v));
        }
        try {
          header.declared.push_back(AttributeSpec::categorical(name, std::move(values)));
        } catch (const ConfigError& e) {
          throw ParseError("line " + std::to_string(lineNo) + ": " + e.what(), lineNo);
        }
      } else {
        std::string type = lower(trim(rest));
        if (type == "numeric" || type == "real" || type == "integer") {
          header.declared.push_back(AttributeSpec::numeric(name));
        } else {
          throw ParseError("line " + std::to_string(lineNo) + ": unsupported attribute type '" +
                               std::string(trim(rest)) + "'",
                           lineNo);
        }
      }
    } else if (startsWithNoCase(line, "@data")) {
      sawData = true;
      break;
    } else {
      throw ParseError("line " + std::to_string(lineNo) + ": unexpected header line", lineNo);
    }
  }
  if (!sawData) throw ParseError("missing @data section", lineNo);
  if (header.declared.size() < 2) {
    throw ParseError("need at least one attribute plus the target", lineNo);
  }
  header.targetIndex = header.declared.size() - 1;
  if (options.targetAttribute) {
    auto it = std::find_if(header.declared.begin(), header.declared.end(),
                           [&](const AttributeSpec& a) { return a.name() == *options.targetAttribute; });
    if (it == header.declared.end()) {
      throw ConfigError("target attribute '" + *options.targetAttribute + "' not declared");
    }
    header.targetIndex = static_cast<std::size_t>(it - header.declared.begin());
  }
  return header;
}

double parseNumber(std::string_view token, std::size_t lineNo) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("line " + std::to_string(lineNo) + ": bad numeric value '" +
                         std::string(token) + "'",
                     lineNo);
  }
  return value;
}

double parseCell(std::string_view token, const AttributeSpec& spec, std::size_t lineNo) {
  token = trim(token);
  if (token == "?") return kMissing;
  if (spec.isNumeric()) return parseNumber(token, lineNo);
  auto idx = spec.indexOf(unquote(token));
  if (!idx) {
    throw ParseError("line " + std::to_string(lineNo) + ": unknown value '" +
                         std::string(token) + "' for attribute '" + spec.name() + "'",
                     lineNo);
  }
  return static_cast<double>(*idx);
}

/// Row parser shared by the in-memory and file readers.
class RowReader {
 public:
  RowReader(std::unique_ptr<LineSource> lines, ArffHeader header, std::size_t lineNo)
      : lines_(std::move(lines)), header_(std::move(header)), lineNo_(lineNo) {}

  const ArffHeader& header() const { return header_; }

  std::optional<Instance> next() {
    std::string raw;
    while (lines_->next(raw)) {
      ++lineNo_;
      std::string_view line = trim(raw);
      if (line.empty() || line.front() == '%') continue;
      return line.front() == '{' ? parseSparse(line) : parseDense(line);
    }
    return std::nullopt;
  }

 private:
  std::optional<double> label(double raw) const {
    if (isMissing(raw)) return std::nullopt;
    return raw;
  }

  Instance parseDense(std::string_view line) {
    auto cells = splitQuoted(line, ',');
    const auto& declared = header_.declared;
    if (cells.size() != declared.size()) {
      throw ParseError("line " + std::to_string(lineNo_) + ": expected " +
                           std::to_string(declared.size()) + " values, found " +
                           std::to_string(cells.size()),
                       lineNo_);
    }
    std::vector<double> values;
    values.reserve(declared.size() - 1);
    double target = kMissing;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v = parseCell(cells[i], declared[i], lineNo_);
      if (i == header_.targetIndex) {
        target = v;
      } else {
        values.push_back(v);
      }
    }
    return Instance::dense(std::move(values), label(target));
  }

  Instance parseSparse(std::string_view line) {
    auto close = line.rfind('}');
    if (close == std::string_view::npos) {
      throw ParseError("line " + std::to_string(lineNo_) + ": unterminated sparse row", lineNo_);
    }
    const auto& declared = header_.declared;
    std::vector<SparseEntry> entries;
    double target = 0.0;
    long last = -1;
    std::string_view body = trim(line.substr(1, close - 1));
    if (!body.empty()) {
      for (auto cell : splitQuoted(body, ',')) {
        cell = trim(cell);
        auto space = cell.find_first_of(" \t");
        if (space == std::string_view::npos) {
          throw ParseError("line " + std::to_string(lineNo_) + ": malformed sparse entry", lineNo_);
        }
        auto idx = static_cast<long>(parseNumber(cell.substr(0, space), lineNo_));
        if (idx < 0 || static_cast<std::size_t>(idx) >= declared.size() || idx <= last) {
          throw ParseError("line " + std::to_string(lineNo_) + ": bad sparse index", lineNo_);
        }
        last = idx;
        auto uidx = static_cast<std::size_t>(idx);
        double v = parseCell(cell.substr(space + 1), declared[uidx], lineNo_);
        if (uidx == header_.targetIndex) {
          target = v;
        } else {
          auto shifted = uidx > header_.targetIndex ? uidx - 1 : uidx;
          entries.push_back({static_cast<std::uint32_t>(shifted), v});
        }
      }
    }
    return Instance::sparse(declared.size() - 1, std::move(entries), label(target));
  }

  std::unique_ptr<LineSource> lines_;
  ArffHeader header_;
  std::size_t lineNo_;
};

InstanceSchema makeSchema(const ArffHeader& header, std::optional<NumericRange> range) {
  std::vector<AttributeSpec> attributes;
  for (std::size_t i = 0; i < header.declared.size(); ++i) {
    if (i != header.targetIndex) attributes.push_back(header.declared[i]);
  }
  const auto& target = header.declared[header.targetIndex];
  if (target.isCategorical()) {
    return InstanceSchema(std::move(attributes), ClassLabels{target.values()}, header.relation);
  }
  NumericRange r = range.value_or(NumericRange{0.0, 1.0});
  if (!(r.min < r.max)) r.max = r.min + 1.0;
  return InstanceSchema(std::move(attributes), r, header.relation);
}

struct RangeTracker {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(const Instance& inst) {
    if (!inst.hasLabel()) return;
    lo = std::min(lo, *inst.label());
    hi = std::max(hi, *inst.label());
  }
  std::optional<NumericRange> range() const {
    if (lo > hi) return std::nullopt;
    return NumericRange{lo, hi};
  }
};

}  // namespace

ArffData parseArff(std::string_view text, const ArffOptions& options) {
  auto lines = std::make_unique<StringLines>(text);
  std::size_t lineNo = 0;
  ArffHeader header = readHeader(*lines, lineNo, options);
  RowReader rows(std::move(lines), header, lineNo);
  std::vector<Instance> instances;
  RangeTracker tracker;
  while (auto inst = rows.next()) {
    tracker.add(*inst);
    instances.push_back(std::move(*inst));
  }
  return ArffData{makeSchema(header, tracker.range()), std::move(instances)};
}

struct ArffFileStream::State {
  std::string path;
  ArffOptions options;
  std::optional<InstanceSchema> schema;
  std::optional<RowReader> rows;

  void open() {
    auto lines = std::make_unique<GzLines>(path);
    std::size_t lineNo = 0;
    ArffHeader header = readHeader(*lines, lineNo, options);
    rows.emplace(std::move(lines), std::move(header), lineNo);
  }
};

ArffFileStream::ArffFileStream(std::string path, ArffOptions options)
    : state_(std::make_unique<State>()) {
  state_->path = std::move(path);
  state_->options = std::move(options);
  state_->open();
  const auto& header = state_->rows->header();
  std::optional<NumericRange> range;
  if (header.declared[header.targetIndex].isNumeric()) {
    // Regression needs the label range before the first instance is served.
    RangeTracker tracker;
    while (auto inst = state_->rows->next()) tracker.add(*inst);
    range = tracker.range();
    state_->open();
  }
  state_->schema.emplace(makeSchema(state_->rows->header(), range));
}

ArffFileStream::~ArffFileStream() = default;

const InstanceSchema& ArffFileStream::schema() const { return *state_->schema; }

std::optional<Instance> ArffFileStream::next() { return state_->rows->next(); }

}  // namespace streamforge
