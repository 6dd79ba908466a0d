#include "procflow/render.hpp"

#include <algorithm>
#include <sstream>

namespace procflow {

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

const std::string& fill_for(const RenderStyle& style, const Task& t) {
  if (!t.label) return style.unlabeled_color;
  switch (*t.label) {
    case AutomationLabel::Automatic: return style.automatic_color;
    case AutomationLabel::Supported: return style.supported_color;
    case AutomationLabel::Manual: return style.manual_color;
  }
  return style.unlabeled_color;
}

}  // namespace

std::string process_to_dot(const ProcessModel& model, const RenderStyle& style) {
  if (!validate_model(model).clean())
    throw ModelError("invalid-model", "process_to_dot requires a clean model");

  std::ostringstream out;
  out << "digraph " << dot_quote(model.name) << " {\n";

  const StartNode* start = model.start();
  out << "  " << dot_quote(start->id) << " [shape=circle label=" << dot_quote(start->id)
      << "];\n";

  std::vector<const Task*> tasks = model.tasks();
  std::sort(tasks.begin(), tasks.end(), [](const Task* a, const Task* b) { return a->id < b->id; });
  for (const Task* t : tasks) {
    out << "  " << dot_quote(t->id) << " [shape=box style=filled fillcolor="
        << fill_for(style, *t) << " label=" << dot_quote(t->title) << "];\n";
  }

  std::vector<const DecisionGateway*> gws = model.gateways();
  std::sort(gws.begin(), gws.end(),
            [](const DecisionGateway* a, const DecisionGateway* b) { return a->id < b->id; });
  for (const DecisionGateway* g : gws)
    out << "  " << dot_quote(g->id) << " [shape=diamond label=" << dot_quote(g->title) << "];\n";

  std::vector<const EndNode*> ends = model.ends();
  std::sort(ends.begin(), ends.end(),
            [](const EndNode* a, const EndNode* b) { return a->id < b->id; });
  for (const EndNode* e : ends)
    out << "  " << dot_quote(e->id) << " [shape=doublecircle label=" << dot_quote(e->id)
        << "];\n";

  std::vector<Flow> flows = model.flows;
  std::sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) {
    return std::tie(a.from, a.branch, a.to) < std::tie(b.from, b.branch, b.to);
  });
  for (const auto& f : flows) {
    out << "  " << dot_quote(f.from) << " -> " << dot_quote(f.to);
    if (f.branch) out << " [label=" << dot_quote(*f.branch) << "]";
    out << ";\n";
  }

  out << "}\n";
  return out.str();
}

std::string usecase_to_dot(const UseCaseModel& ucm) {
  std::ostringstream out;
  out << "digraph usecases {\n";
  for (size_t i = 0; i < ucm.packages.size(); ++i) {
    const UseCasePackage& p = ucm.packages[i];
    out << "  subgraph cluster_" << i << " {\n";
    out << "    label=" << dot_quote(p.name) << ";\n";
    for (const auto& t : p.tasks)
      out << "    " << dot_quote(t) << " [shape=ellipse];\n";
    out << "  }\n";
  }
  for (const auto& a : ucm.actors)
    out << "  " << dot_quote(a) << " [shape=box];\n";
  for (const auto& [actor, task] : ucm.associations)
    out << "  " << dot_quote(actor) << " -> " << dot_quote(task) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace procflow
