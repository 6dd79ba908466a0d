#include "procflow/decision.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace procflow {

Rational make_rational(long long num, long long den) {
  if (den == 0) throw ModelError("bad-rational", "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

bool operator==(const Rational& a, const Rational& b) {
  return a.num == b.num && a.den == b.den;
}

std::string to_string(const Rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

int Metrics::count(AutomationLabel label) const {
  switch (label) {
    case AutomationLabel::Automatic: return automatic_count;
    case AutomationLabel::Supported: return supported_count;
    case AutomationLabel::Manual: return manual_count;
  }
  return 0;
}

int score(Level benefit, Level cost) { return level_rank(benefit) - level_rank(cost); }

AutomationLabel default_label(Level benefit, Level cost) {
  int s = score(benefit, cost);
  if (s >= 2) return AutomationLabel::Automatic;
  if (s >= 0) return AutomationLabel::Supported;
  return AutomationLabel::Manual;
}

std::vector<LabeledDecision> decide_all(const ProcessModel& model,
                                        const AnnotationSet& annotations) {
  std::vector<const Task*> tasks = model.tasks();
  std::sort(tasks.begin(), tasks.end(),
            [](const Task* a, const Task* b) { return a->id < b->id; });

  for (const auto& [task_id, annotation] : annotations.entries) {
    if (!model.find_task(task_id))
      throw ModelError("unknown-task", "annotation for unknown task " + task_id);
  }

  std::vector<LabeledDecision> decisions;
  decisions.reserve(tasks.size());
  for (const Task* t : tasks) {
    auto it = annotations.entries.find(t->id);
    if (it == annotations.entries.end())
      throw ModelError("missing-annotation", t->id);
    const Annotation& a = it->second;
    if (a.override) {
      decisions.push_back({t->id, a.override->label, Provenance::Override, a.override->reason});
    } else {
      decisions.push_back({t->id, default_label(a.benefit, a.cost), Provenance::DefaultRule, ""});
    }
  }
  return decisions;
}

Metrics automation_metrics(const std::vector<LabeledDecision>& decisions) {
  Metrics m;
  for (const auto& d : decisions) {
    switch (d.label) {
      case AutomationLabel::Automatic: ++m.automatic_count; break;
      case AutomationLabel::Supported: ++m.supported_count; break;
      case AutomationLabel::Manual: ++m.manual_count; break;
    }
  }
  if (m.total() == 0) {
    m.automation_degree = Rational{0, 1};
  } else {
    // (A + S/2) / total, kept exact.
    m.automation_degree = make_rational(2LL * m.automatic_count + m.supported_count,
                                        2LL * m.total());
  }
  return m;
}

std::string format_decisions(const std::vector<LabeledDecision>& decisions) {
  std::ostringstream out;
  for (const auto& d : decisions) {
    out << d.task << " " << label_letter(d.label);
    if (d.provenance == Provenance::Override)
      out << " override \"" << d.reason << "\"";
    else
      out << " default";
    out << "\n";
  }
  return out.str();
}

std::string format_metrics_report(const Metrics& m) {
  std::ostringstream out;
  out << "automatic (A): " << m.automatic_count << "\n"
      << "supported (S): " << m.supported_count << "\n"
      << "manual    (M): " << m.manual_count << "\n"
      << "total tasks  : " << m.total() << "\n"
      << "automation degree: " << to_string(m.automation_degree) << "\n";
  return out.str();
}

std::string format_metrics_kv(const Metrics& m) {
  std::ostringstream out;
  out << "A=" << m.automatic_count << "\n"
      << "S=" << m.supported_count << "\n"
      << "M=" << m.manual_count << "\n"
      << "automation_degree=" << to_string(m.automation_degree) << "\n";
  return out.str();
}

}  // namespace procflow
