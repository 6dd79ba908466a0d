#include "procflow/transform.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace procflow {

std::string perspective_name(PerspectiveLevel level) {
  switch (level) {
    case PerspectiveLevel::Strategic: return "STRATEGIC";
    case PerspectiveLevel::Organizational: return "ORGANIZATIONAL";
    case PerspectiveLevel::BusinessProcess: return "BUSINESSPROCESS";
    case PerspectiveLevel::SystemInformation: return "SYSTEMINFORMATION";
  }
  return "?";
}

ProcessModel derive_tobe(const ProcessModel& asis,
                         const std::vector<LabeledDecision>& decisions) {
  if (asis.kind != ModelKind::AsIs)
    throw ModelError("invalid-model", "derive_tobe takes an as-is model");
  if (!validate_model(asis).clean())
    throw ModelError("invalid-model", "derive_tobe requires a clean model");

  std::map<std::string, AutomationLabel> by_task;
  for (const auto& d : decisions) {
    if (!asis.find_task(d.task))
      throw ModelError("coverage-mismatch", "decision for unknown task " + d.task);
    if (!by_task.emplace(d.task, d.label).second)
      throw ModelError("coverage-mismatch", "duplicate decision for task " + d.task);
  }

  ProcessModel tobe = asis;
  tobe.kind = ModelKind::ToBe;
  for (auto& n : tobe.nodes) {
    if (Task* t = std::get_if<Task>(&n)) {
      auto it = by_task.find(t->id);
      if (it == by_task.end())
        throw ModelError("coverage-mismatch", "no decision for task " + t->id);
      t->label = it->second;
    }
  }
  return tobe;
}

// ---------------------------------------------------------------------------
// Diff / apply
// ---------------------------------------------------------------------------

namespace {

bool same_node_content_ignoring_label(const Node& a, const Node& b) {
  if (a.index() != b.index()) return false;
  if (const Task* ta = std::get_if<Task>(&a)) {
    const Task* tb = std::get_if<Task>(&b);
    std::vector<std::string> ra = ta->roles;
    std::vector<std::string> rb = tb->roles;
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    return ta->title == tb->title && ra == rb;
  }
  if (const DecisionGateway* ga = std::get_if<DecisionGateway>(&a)) {
    const DecisionGateway* gb = std::get_if<DecisionGateway>(&b);
    return ga->title == gb->title && ga->role == gb->role && ga->branches == gb->branches;
  }
  return true;  // start/end carry only their id
}

std::tuple<std::string, std::optional<std::string>, std::string> flow_key(const Flow& f) {
  return {f.from, f.branch, f.to};
}

}  // namespace

ChangeSet diff_models(const ProcessModel& a, const ProcessModel& b) {
  ChangeSet cs;

  std::map<std::string, const Role*> roles_a, roles_b;
  for (const auto& r : a.roles) roles_a[r.id] = &r;
  for (const auto& r : b.roles) roles_b[r.id] = &r;

  std::map<std::string, const Node*> nodes_a, nodes_b;
  for (const auto& n : a.nodes) nodes_a[node_id(n)] = &n;
  for (const auto& n : b.nodes) nodes_b[node_id(n)] = &n;

  std::vector<Change> removals;
  std::vector<Change> additions;
  std::vector<Change> labels;

  for (const auto& [id, role] : roles_a) {
    auto it = roles_b.find(id);
    if (it == roles_b.end() || it->second->title != role->title) removals.push_back(RoleRemoved{id});
  }
  for (const auto& [id, role] : roles_b) {
    auto it = roles_a.find(id);
    if (it == roles_a.end() || it->second->title != role->title) additions.push_back(RoleAdded{*role});
  }

  for (const auto& [id, node] : nodes_a) {
    auto it = nodes_b.find(id);
    if (it == nodes_b.end() || !same_node_content_ignoring_label(*node, *it->second))
      removals.push_back(NodeRemoved{id});
  }
  for (const auto& [id, node] : nodes_b) {
    auto it = nodes_a.find(id);
    if (it == nodes_a.end() || !same_node_content_ignoring_label(*it->second, *node)) {
      additions.push_back(NodeAdded{*node});
    } else if (const Task* tb = std::get_if<Task>(node)) {
      // Same task otherwise; only the label may differ.
      const Task* ta = std::get_if<Task>(it->second);
      if (ta->label != tb->label) labels.push_back(LabelAssigned{id, tb->label});
    }
  }

  // Flows as multisets keyed by (from, branch, to).
  std::map<std::tuple<std::string, std::optional<std::string>, std::string>, int> flow_count;
  for (const auto& f : a.flows) ++flow_count[flow_key(f)];
  for (const auto& f : b.flows) --flow_count[flow_key(f)];
  for (const auto& [key, count] : flow_count) {
    const auto& [from, branch, to] = key;
    for (int i = 0; i < count; ++i) removals.push_back(FlowRemoved{Flow{from, to, branch}});
    for (int i = 0; i < -count; ++i) additions.push_back(FlowAdded{Flow{from, to, branch}});
  }

  auto sort_key = [](const Change& c) -> std::string {
    return std::visit(
        [](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, RoleRemoved>) return "0:" + v.id;
          else if constexpr (std::is_same_v<T, NodeRemoved>) return "1:" + v.id;
          else if constexpr (std::is_same_v<T, FlowRemoved>)
            return "2:" + v.flow.from + ":" + v.flow.branch.value_or("") + ":" + v.flow.to;
          else if constexpr (std::is_same_v<T, RoleAdded>) return "0:" + v.role.id;
          else if constexpr (std::is_same_v<T, NodeAdded>) return "1:" + node_id(v.node);
          else if constexpr (std::is_same_v<T, FlowAdded>)
            return "2:" + v.flow.from + ":" + v.flow.branch.value_or("") + ":" + v.flow.to;
          else if constexpr (std::is_same_v<T, LabelAssigned>) return v.task;
          else return std::string();
        },
        c);
  };
  auto by_key = [&](const Change& x, const Change& y) { return sort_key(x) < sort_key(y); };
  std::stable_sort(removals.begin(), removals.end(), by_key);
  std::stable_sort(additions.begin(), additions.end(), by_key);
  std::stable_sort(labels.begin(), labels.end(), by_key);

  cs.changes.insert(cs.changes.end(), removals.begin(), removals.end());
  cs.changes.insert(cs.changes.end(), additions.begin(), additions.end());
  cs.changes.insert(cs.changes.end(), labels.begin(), labels.end());
  if (a.name != b.name) cs.changes.push_back(ProcessRenamed{a.name, b.name});
  return cs;
}

ProcessModel apply_changes(const ProcessModel& base, const ChangeSet& changes) {
  ProcessModel m = base;
  for (const Change& c : changes.changes) {
    std::visit(
        [&m](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, RoleRemoved>) {
            auto it = std::find_if(m.roles.begin(), m.roles.end(),
                                   [&](const Role& r) { return r.id == v.id; });
            if (it == m.roles.end()) throw ModelError("apply-mismatch", "no role " + v.id);
            m.roles.erase(it);
          } else if constexpr (std::is_same_v<T, RoleAdded>) {
            m.roles.push_back(v.role);
          } else if constexpr (std::is_same_v<T, NodeRemoved>) {
            auto it = std::find_if(m.nodes.begin(), m.nodes.end(),
                                   [&](const Node& n) { return node_id(n) == v.id; });
            if (it == m.nodes.end()) throw ModelError("apply-mismatch", "no node " + v.id);
            m.nodes.erase(it);
          } else if constexpr (std::is_same_v<T, NodeAdded>) {
            m.nodes.push_back(v.node);
          } else if constexpr (std::is_same_v<T, FlowRemoved>) {
            auto it = std::find_if(m.flows.begin(), m.flows.end(), [&](const Flow& f) {
              return flow_key(f) == flow_key(v.flow);
            });
            if (it == m.flows.end())
              throw ModelError("apply-mismatch",
                               "no flow " + v.flow.from + " -> " + v.flow.to);
            m.flows.erase(it);
          } else if constexpr (std::is_same_v<T, FlowAdded>) {
            m.flows.push_back(v.flow);
          } else if constexpr (std::is_same_v<T, LabelAssigned>) {
            bool found = false;
            for (auto& n : m.nodes) {
              if (Task* t = std::get_if<Task>(&n); t && t->id == v.task) {
                t->label = v.label;
                found = true;
              }
            }
            if (!found) throw ModelError("apply-mismatch", "no task " + v.task);
          } else if constexpr (std::is_same_v<T, ProcessRenamed>) {
            if (m.name != v.old_name)
              throw ModelError("apply-mismatch", "rename expects name " + v.old_name);
            m.name = v.new_name;
          }
        },
        c);
  }
  return m;
}

PerspectiveLevel classify_change(const Change& change, const PerspectiveMapping& mapping) {
  return std::visit(
      [&mapping](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ProcessRenamed>)
          return mapping.process_renamed;
        else if constexpr (std::is_same_v<T, RoleAdded> || std::is_same_v<T, RoleRemoved>)
          return mapping.role_changed;
        else if constexpr (std::is_same_v<T, LabelAssigned>)
          return mapping.label_assigned;
        else
          return mapping.topology_changed;
      },
      change);
}

namespace {

std::string change_line(const Change& c) {
  std::ostringstream out;
  out << perspective_name(classify_change(c)) << " ";
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RoleRemoved>) out << "ROLEREMOVED " << v.id;
        else if constexpr (std::is_same_v<T, RoleAdded>) out << "ROLEADDED " << v.role.id;
        else if constexpr (std::is_same_v<T, NodeRemoved>) out << "NODEREMOVED " << v.id;
        else if constexpr (std::is_same_v<T, NodeAdded>) out << "NODEADDED " << node_id(v.node);
        else if constexpr (std::is_same_v<T, FlowRemoved>) {
          out << "FLOWREMOVED " << v.flow.from << " " << v.flow.to;
          if (v.flow.branch) out << " " << *v.flow.branch;
        } else if constexpr (std::is_same_v<T, FlowAdded>) {
          out << "FLOWADDED " << v.flow.from << " " << v.flow.to;
          if (v.flow.branch) out << " " << *v.flow.branch;
        } else if constexpr (std::is_same_v<T, LabelAssigned>) {
          out << "LABELASSIGNED " << v.task << " "
              << (v.label ? std::string(1, label_letter(*v.label)) : "-");
        } else if constexpr (std::is_same_v<T, ProcessRenamed>) {
          out << "PROCESSRENAMED \"" << v.old_name << "\" \"" << v.new_name << "\"";
        }
      },
      c);
  return out.str();
}

}  // namespace

std::string format_change_report(const ChangeSet& changes) {
  std::ostringstream out;
  for (const Change& c : changes.changes) out << change_line(c) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Use-case extraction
// ---------------------------------------------------------------------------

UseCaseModel extract_use_cases(const ProcessModel& model,
                               const std::vector<UseCasePackage>& packages,
                               const std::set<std::string>& actors) {
  std::set<std::string> role_ids;
  for (const auto& r : model.roles) role_ids.insert(r.id);
  for (const auto& a : actors) {
    if (!role_ids.count(a)) throw ModelError("unknown-actor", a);
  }

  std::map<std::string, int> membership;  // task id -> packages containing it
  for (const auto& p : packages) {
    for (const auto& t : p.tasks) {
      if (!model.find_task(t))
        throw ModelError("non-partition", "package task " + t + " is not a model task");
      ++membership[t];
    }
  }
  for (const Task* t : model.tasks()) {
    int n = membership.count(t->id) ? membership[t->id] : 0;
    if (n == 0) throw ModelError("non-partition", "task " + t->id + " is in no package");
    if (n > 1) throw ModelError("non-partition", "task " + t->id + " is in several packages");
  }

  UseCaseModel ucm;
  for (const auto& r : model.roles) {
    if (actors.count(r.id)) ucm.actors.push_back(r.id);
  }
  ucm.packages = packages;

  std::vector<const Task*> tasks = model.tasks();
  std::sort(tasks.begin(), tasks.end(),
            [](const Task* a, const Task* b) { return a->id < b->id; });
  for (const Task* t : tasks) {
    for (const auto& r : t->roles) {
      if (actors.count(r)) ucm.associations.push_back({r, t->id});
    }
  }
  std::sort(ucm.associations.begin(), ucm.associations.end());
  return ucm;
}

std::string format_use_case_model(const UseCaseModel& ucm) {
  std::ostringstream out;
  for (const auto& a : ucm.actors) out << "actor " << a << "\n";
  for (const auto& p : ucm.packages) {
    out << "package \"" << p.name << "\"";
    for (const auto& t : p.tasks) out << " " << t;
    out << "\n";
  }
  for (const auto& [actor, task] : ucm.associations)
    out << "assoc " << actor << " " << task << "\n";
  return out.str();
}

}  // namespace procflow
