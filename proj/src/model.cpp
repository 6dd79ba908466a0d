#include "procflow/model.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace procflow {

char label_letter(AutomationLabel label) {
  switch (label) {
    case AutomationLabel::Automatic: return 'A';
    case AutomationLabel::Supported: return 'S';
    case AutomationLabel::Manual: return 'M';
  }
  return '?';
}

std::optional<AutomationLabel> label_from_letter(char letter) {
  switch (letter) {
    case 'A': case 'a': return AutomationLabel::Automatic;
    case 'S': case 's': return AutomationLabel::Supported;
    case 'M': case 'm': return AutomationLabel::Manual;
    default: return std::nullopt;
  }
}

std::string node_id(const Node& node) {
  return std::visit([](const auto& n) { return n.id; }, node);
}

const Node* ProcessModel::find_node(const std::string& id) const {
  for (const auto& n : nodes) {
    if (node_id(n) == id) return &n;
  }
  return nullptr;
}

const Task* ProcessModel::find_task(const std::string& id) const {
  const Node* n = find_node(id);
  return n ? std::get_if<Task>(n) : nullptr;
}

const DecisionGateway* ProcessModel::find_gateway(const std::string& id) const {
  const Node* n = find_node(id);
  return n ? std::get_if<DecisionGateway>(n) : nullptr;
}

std::vector<const Task*> ProcessModel::tasks() const {
  std::vector<const Task*> out;
  for (const auto& n : nodes) {
    if (const Task* t = std::get_if<Task>(&n)) out.push_back(t);
  }
  return out;
}

std::vector<const DecisionGateway*> ProcessModel::gateways() const {
  std::vector<const DecisionGateway*> out;
  for (const auto& n : nodes) {
    if (const DecisionGateway* g = std::get_if<DecisionGateway>(&n)) out.push_back(g);
  }
  return out;
}

const StartNode* ProcessModel::start() const {
  for (const auto& n : nodes) {
    if (const StartNode* s = std::get_if<StartNode>(&n)) return s;
  }
  return nullptr;
}

std::vector<const EndNode*> ProcessModel::ends() const {
  std::vector<const EndNode*> out;
  for (const auto& n : nodes) {
    if (const EndNode* e = std::get_if<EndNode>(&n)) out.push_back(e);
  }
  return out;
}

std::vector<const Flow*> ProcessModel::outgoing(const std::string& id) const {
  std::vector<const Flow*> out;
  for (const auto& f : flows) {
    if (f.from == id) out.push_back(&f);
  }
  return out;
}

bool ValidationReport::has(const std::string& rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

bool ValidationReport::has(const std::string& rule, const std::string& element) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
    return v.rule == rule && v.element == element;
  });
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << v.rule;
    if (!v.element.empty()) out << ' ' << v.element;
    if (!v.detail.empty()) out << ": " << v.detail;
    out << '\n';
  }
  return out.str();
}

ModelError::ModelError(std::string code, const std::string& message)
    : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

namespace {

std::map<std::string, std::vector<std::string>> successors(const ProcessModel& m) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& f : m.flows) adj[f.from].push_back(f.to);
  return adj;
}

std::set<std::string> closure(const std::map<std::string, std::vector<std::string>>& adj,
                              const std::string& from) {
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (const auto& next : it->second) {
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return seen;
}

void check_structure(const ProcessModel& m, std::vector<Violation>& out) {
  std::set<std::string> role_ids;
  for (const auto& r : m.roles) {
    if (!role_ids.insert(r.id).second)
      out.push_back({"duplicate-role-id", r.id, ""});
  }

  std::set<std::string> ids;
  int starts = 0;
  int ends = 0;
  for (const auto& n : m.nodes) {
    if (!ids.insert(node_id(n)).second)
      out.push_back({"duplicate-node-id", node_id(n), ""});
    if (std::holds_alternative<StartNode>(n)) ++starts;
    if (std::holds_alternative<EndNode>(n)) ++ends;
  }
  if (starts == 0) out.push_back({"no-start-node", "", ""});
  if (starts > 1) out.push_back({"multiple-start-node", "", ""});
  if (ends == 0) out.push_back({"no-end-node", "", ""});

  for (const auto& f : m.flows) {
    if (!ids.count(f.from))
      out.push_back({"flow-unknown-endpoint", f.from, "flow " + f.from + " -> " + f.to});
    if (!ids.count(f.to))
      out.push_back({"flow-unknown-endpoint", f.to, "flow " + f.from + " -> " + f.to});
  }

  std::map<std::string, int> outdeg;
  for (const auto& f : m.flows) ++outdeg[f.from];

  for (const auto& n : m.nodes) {
    if (const Task* t = std::get_if<Task>(&n)) {
      if (t->roles.empty()) out.push_back({"task-no-role", t->id, ""});
      std::set<std::string> seen_roles;
      for (const auto& r : t->roles) {
        if (!role_ids.count(r)) out.push_back({"task-unknown-role", t->id, r});
        if (!seen_roles.insert(r).second) out.push_back({"task-duplicate-role", t->id, r});
      }
      if (outdeg[t->id] != 1)
        out.push_back({"task-outflow-count", t->id,
                       "expected 1 outgoing flow, found " + std::to_string(outdeg[t->id])});
      if (m.kind == ModelKind::AsIs && t->label)
        out.push_back({"asis-task-labeled", t->id, ""});
      if (m.kind == ModelKind::ToBe && !t->label)
        out.push_back({"tobe-task-unlabeled", t->id, ""});
    } else if (const DecisionGateway* g = std::get_if<DecisionGateway>(&n)) {
      if (!role_ids.count(g->role)) out.push_back({"gateway-unknown-role", g->id, g->role});
      if (g->branches.size() < 2)
        out.push_back({"gateway-branch-count", g->id,
                       "expected >= 2 branches, found " + std::to_string(g->branches.size())});
      // Outgoing flows must correspond one-to-one with declared branches.
      std::set<std::pair<std::string, std::string>> from_flows;
      bool mismatch = false;
      for (const auto& f : m.flows) {
        if (f.from != g->id) continue;
        if (!f.branch || !from_flows.insert({*f.branch, f.to}).second) {
          mismatch = true;
          continue;
        }
      }
      std::set<std::pair<std::string, std::string>> declared;
      for (const auto& [label, target] : g->branches) declared.insert({label, target});
      if (mismatch || from_flows != declared)
        out.push_back({"gateway-flow-branch-mismatch", g->id, ""});
    } else if (const StartNode* s = std::get_if<StartNode>(&n)) {
      if (outdeg[s->id] != 1)
        out.push_back({"start-outflow-count", s->id,
                       "expected 1 outgoing flow, found " + std::to_string(outdeg[s->id])});
    } else if (const EndNode* e = std::get_if<EndNode>(&n)) {
      if (outdeg[e->id] != 0) out.push_back({"end-node-outflow", e->id, ""});
    }
  }

  for (const auto& f : m.flows) {
    const Node* from = m.find_node(f.from);
    if (from && !std::holds_alternative<DecisionGateway>(*from) && f.branch)
      out.push_back({"branch-on-non-gateway", f.from, "branch label " + *f.branch});
  }

  for (const auto& mark : m.end_marks) {
    const Node* n = m.find_node(mark);
    if (!n)
      out.push_back({"end-mark-unknown", mark, ""});
    else if (!std::holds_alternative<EndNode>(*n))
      out.push_back({"end-marker-not-endnode", mark, ""});
  }
}

void check_reachability(const ProcessModel& m, std::vector<Violation>& out) {
  const StartNode* start = m.start();
  int starts = 0;
  for (const auto& n : m.nodes)
    if (std::holds_alternative<StartNode>(n)) ++starts;

  auto adj = successors(m);
  if (start && starts == 1) {
    auto reach = closure(adj, start->id);
    for (const auto& n : m.nodes) {
      if (!reach.count(node_id(n)))
        out.push_back({"unreachable-node", node_id(n), ""});
    }
  }

  if (!m.ends().empty()) {
    // Reverse closure from all end nodes; anything outside is trapped.
    std::map<std::string, std::vector<std::string>> radj;
    for (const auto& f : m.flows) radj[f.to].push_back(f.from);
    std::set<std::string> can_finish;
    std::deque<std::string> queue;
    for (const EndNode* e : m.ends()) {
      can_finish.insert(e->id);
      queue.push_back(e->id);
    }
    while (!queue.empty()) {
      std::string cur = queue.front();
      queue.pop_front();
      auto it = radj.find(cur);
      if (it == radj.end()) continue;
      for (const auto& prev : it->second) {
        if (can_finish.insert(prev).second) queue.push_back(prev);
      }
    }
    for (const auto& n : m.nodes) {
      if (!can_finish.count(node_id(n)))
        out.push_back({"end-not-reachable", node_id(n), ""});
    }
  }
}

ValidationReport finish(std::vector<Violation> violations) {
  std::sort(violations.begin(), violations.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.rule, a.element, a.detail) < std::tie(b.rule, b.element, b.detail);
  });
  violations.erase(std::unique(violations.begin(), violations.end(),
                               [](const Violation& a, const Violation& b) {
                                 return a.rule == b.rule && a.element == b.element &&
                                        a.detail == b.detail;
                               }),
                   violations.end());
  return ValidationReport{std::move(violations)};
}

}  // namespace

ValidationReport validate_structure(const ProcessModel& model) {
  std::vector<Violation> violations;
  check_structure(model, violations);
  return finish(std::move(violations));
}

ValidationReport validate_model(const ProcessModel& model) {
  std::vector<Violation> violations;
  check_structure(model, violations);
  check_reachability(model, violations);
  return finish(std::move(violations));
}

std::map<std::string, std::vector<std::string>> role_task_index(const ProcessModel& model) {
  if (!validate_model(model).clean())
    throw ModelError("invalid-model", "role_task_index requires a clean model");
  std::vector<const Task*> ts = model.tasks();
  std::sort(ts.begin(), ts.end(),
            [](const Task* a, const Task* b) { return a->id < b->id; });
  std::map<std::string, std::vector<std::string>> index;
  for (const Task* t : ts) {
    for (const auto& r : t->roles) index[r].push_back(t->id);
  }
  return index;
}

std::set<std::string> reachable_from(const ProcessModel& model, const std::string& node) {
  if (!model.find_node(node))
    throw ModelError("unknown-node", node);
  return closure(successors(model), node);
}

namespace {

ProcessModel canonical_copy(const ProcessModel& m) {
  ProcessModel c = m;
  std::sort(c.roles.begin(), c.roles.end(),
            [](const Role& a, const Role& b) { return a.id < b.id; });
  std::sort(c.nodes.begin(), c.nodes.end(),
            [](const Node& a, const Node& b) { return node_id(a) < node_id(b); });
  for (auto& n : c.nodes) {
    if (Task* t = std::get_if<Task>(&n)) std::sort(t->roles.begin(), t->roles.end());
  }
  std::sort(c.flows.begin(), c.flows.end(), [](const Flow& a, const Flow& b) {
    return std::tie(a.from, a.branch, a.to) < std::tie(b.from, b.branch, b.to);
  });
  return c;
}

bool nodes_equal(const Node& a, const Node& b) {
  if (a.index() != b.index()) return false;
  if (const Task* ta = std::get_if<Task>(&a)) {
    const Task* tb = std::get_if<Task>(&b);
    return ta->id == tb->id && ta->title == tb->title && ta->roles == tb->roles &&
           ta->label == tb->label;
  }
  if (const DecisionGateway* ga = std::get_if<DecisionGateway>(&a)) {
    const DecisionGateway* gb = std::get_if<DecisionGateway>(&b);
    return ga->id == gb->id && ga->title == gb->title && ga->role == gb->role &&
           ga->branches == gb->branches;
  }
  return node_id(a) == node_id(b);
}

}  // namespace

bool models_equal(const ProcessModel& a, const ProcessModel& b) {
  ProcessModel ca = canonical_copy(a);
  ProcessModel cb = canonical_copy(b);
  if (ca.name != cb.name || ca.kind != cb.kind) return false;
  if (ca.roles.size() != cb.roles.size() || ca.nodes.size() != cb.nodes.size() ||
      ca.flows.size() != cb.flows.size())
    return false;
  for (size_t i = 0; i < ca.roles.size(); ++i) {
    if (ca.roles[i].id != cb.roles[i].id || ca.roles[i].title != cb.roles[i].title) return false;
  }
  for (size_t i = 0; i < ca.nodes.size(); ++i) {
    if (!nodes_equal(ca.nodes[i], cb.nodes[i])) return false;
  }
  for (size_t i = 0; i < ca.flows.size(); ++i) {
    if (ca.flows[i].from != cb.flows[i].from || ca.flows[i].to != cb.flows[i].to ||
        ca.flows[i].branch != cb.flows[i].branch)
      return false;
  }
  return true;
}

}  // namespace procflow
