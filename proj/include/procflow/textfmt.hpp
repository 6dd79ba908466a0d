#pragma once

#include "procflow/model.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace procflow {

struct SourceSpan {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string code, SourceSpan span, const std::string& message);
  const std::string& code() const { return code_; }
  SourceSpan span() const { return span_; }

 private:
  std::string code_;
  SourceSpan span_;
};

// ---------------------------------------------------------------------------
// Annotations (benefit/cost levels plus decision overrides)
// ---------------------------------------------------------------------------

enum class Level { Low = 1, Medium = 2, High = 3 };

int level_rank(Level level);
const char* level_keyword(Level level);  // lowercase canonical form
std::optional<Level> level_from_keyword(std::string_view word);  // case-insensitive

struct DecisionOverride {
  AutomationLabel label;
  std::string reason;  // non-empty
};

struct Annotation {
  Level benefit;
  Level cost;
  std::optional<DecisionOverride> override;
};

struct AnnotationSet {
  std::map<std::string, Annotation> entries;  // task id -> annotation
};

// ---------------------------------------------------------------------------
// Model text format
//
// Keyword-introduced statements, `#` comments, quoted titles, key=value
// attributes, `flow a -> b [branch]`.  The canonical form is one statement
// per line: a `process ... {` header, then roles, tasks, gateways, flows,
// start, ends (each section sorted by id), then a closing `}`.
// ---------------------------------------------------------------------------

ProcessModel parse_model(const std::string& text);

// Canonical serialization; stable across runs, LF line endings. The start
// node is written as `start <successor>` and parses back with id "start".
// Throws ModelError{invalid-model} unless the model validates clean.
std::string serialize_model(const ProcessModel& model);

AnnotationSet parse_annotations(const std::string& text);

// Use-case package groupings: `package "name" t1 t2 ...` lines.
struct UseCasePackage {
  std::string name;
  std::vector<std::string> tasks;
};

std::vector<UseCasePackage> parse_packages(const std::string& text);

}  // namespace procflow
