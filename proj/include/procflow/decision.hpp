#pragma once

#include "procflow/model.hpp"
#include "procflow/textfmt.hpp"

#include <string>
#include <vector>

namespace procflow {

// ---------------------------------------------------------------------------
// Automation decisions: default benefit/cost scoring rule plus an explicit
// override ledger carrying the judgment calls the rule cannot make.
// ---------------------------------------------------------------------------

enum class Provenance { DefaultRule, Override };

struct LabeledDecision {
  std::string task;
  AutomationLabel label;
  Provenance provenance = Provenance::DefaultRule;
  std::string reason;  // non-empty iff provenance == Override
};

// Exact rational, reduced, denominator > 0.
struct Rational {
  long long num = 0;
  long long den = 1;
};

Rational make_rational(long long num, long long den);
bool operator==(const Rational& a, const Rational& b);
std::string to_string(const Rational& r);

struct Metrics {
  int automatic_count = 0;
  int supported_count = 0;
  int manual_count = 0;
  Rational automation_degree;  // (A + S/2) / total; 0 for an empty set

  int total() const { return automatic_count + supported_count + manual_count; }
  int count(AutomationLabel label) const;
};

// rank(benefit) - rank(cost), in [-2, 2].
int score(Level benefit, Level cost);

// A if score >= 2; S if 0 <= score <= 1; M if score < 0.  The unique monotone
// step rule over the nine-cell grid that the override ledger then corrects.
AutomationLabel default_label(Level benefit, Level cost);

// One decision per task, in canonical (lexicographic) task order: the
// override when present, otherwise the default rule.
// Throws ModelError{missing-annotation} / ModelError{unknown-task}.
std::vector<LabeledDecision> decide_all(const ProcessModel& model,
                                        const AnnotationSet& annotations);

Metrics automation_metrics(const std::vector<LabeledDecision>& decisions);

// One line per decision: `<task> <label> default` or
// `<task> <label> override "<reason>"`.
std::string format_decisions(const std::vector<LabeledDecision>& decisions);

std::string format_metrics_report(const Metrics& metrics);

// Stable key order: A, S, M, automation_degree.
std::string format_metrics_kv(const Metrics& metrics);

}  // namespace procflow
