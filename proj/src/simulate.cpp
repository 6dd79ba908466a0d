#include "procflow/simulate.hpp"

#include "procflow/textfmt.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace procflow {

namespace {

const Flow* single_outflow(const ProcessModel& m, const std::string& id) {
  const Flow* found = nullptr;
  for (const auto& f : m.flows) {
    if (f.from == id) {
      if (found) return nullptr;
      found = &f;
    }
  }
  return found;
}

void require_runnable(const ProcessModel& m, bool full_validation) {
  if (m.kind != ModelKind::ToBe)
    throw ModelError("invalid-model", "simulation requires a to-be model");
  ValidationReport report = full_validation ? validate_model(m) : validate_structure(m);
  if (!report.clean())
    throw ModelError("invalid-model", report.to_text());
}

void append(EventLog& log, const std::string& node, LogEntryKind kind,
            const std::string& branch = "") {
  log.entries.push_back({static_cast<int>(log.entries.size()) + 1, node, kind, branch});
}

// Moves through start node and consecutive A tasks until the run needs an
// event or reaches an end.
void advance_until_wait(SimState& state) {
  const ProcessModel& m = *state.model;
  for (;;) {
    const Node* node = m.find_node(state.current);
    if (const StartNode* s = std::get_if<StartNode>(node)) {
      state.current = single_outflow(m, s->id)->to;
      continue;
    }
    if (std::holds_alternative<EndNode>(*node)) {
      state.terminal = true;
      state.pending = {PendingKind::None, ""};
      return;
    }
    if (const Task* t = std::get_if<Task>(node)) {
      if (*t->label == AutomationLabel::Automatic) {
        append(state.log, t->id, LogEntryKind::AutoFire);
        state.current = single_outflow(m, t->id)->to;
        continue;
      }
      state.pending = {*t->label == AutomationLabel::Supported ? PendingKind::AwaitAgent
                                                               : PendingKind::AwaitExternal,
                       t->id};
      return;
    }
    state.pending = {PendingKind::AwaitChoice, node_id(*node)};
    return;
  }
}

}  // namespace

bool is_loop_branch(const ProcessModel& model, const std::string& gateway,
                    const std::string& branch) {
  const DecisionGateway* g = model.find_gateway(gateway);
  if (!g) throw ModelError("unknown-node", gateway);
  auto it = g->branches.find(branch);
  if (it == g->branches.end()) throw ModelError("branch-unknown", gateway + " [" + branch + "]");
  return reachable_from(model, it->second).count(gateway) > 0;
}

int SimState::rounds_used(const std::string& gateway, const std::string& branch) const {
  auto it = loop_rounds.find({gateway, branch});
  return it == loop_rounds.end() ? 0 : it->second;
}

SimState start_run(const ProcessModel& tobe, int max_revision_rounds) {
  require_runnable(tobe, true);
  SimState state;
  state.model = &tobe;
  state.max_rounds = max_revision_rounds;
  state.current = tobe.start()->id;
  advance_until_wait(state);
  return state;
}

SimState apply_event(const SimState& state, const Event& event) {
  if (state.terminal)
    throw ModelError("event-mismatch", "run already reached " + state.current);

  PendingKind expected = PendingKind::None;
  switch (event.kind) {
    case EventKind::AgentConfirm: expected = PendingKind::AwaitAgent; break;
    case EventKind::ExternalComplete: expected = PendingKind::AwaitExternal; break;
    case EventKind::Choose: expected = PendingKind::AwaitChoice; break;
  }
  if (state.pending.kind != expected || state.pending.node != event.node)
    throw ModelError("event-mismatch", "event for " + event.node + " does not match wait on " +
                                           state.pending.node);

  const ProcessModel& m = *state.model;
  SimState next = state;

  if (event.kind == EventKind::Choose) {
    const DecisionGateway* g = m.find_gateway(event.node);
    auto branch = g->branches.find(event.branch);
    if (branch == g->branches.end())
      throw ModelError("branch-unknown", event.node + " [" + event.branch + "]");
    if (is_loop_branch(m, g->id, event.branch)) {
      int used = next.rounds_used(g->id, event.branch);
      if (used >= next.max_rounds)
        throw ModelError("revision-budget-exceeded",
                         g->id + " [" + event.branch + "] used " + std::to_string(used) + " of " +
                             std::to_string(next.max_rounds) + " rounds");
      next.loop_rounds[{g->id, event.branch}] = used + 1;
    }
    append(next.log, g->id, LogEntryKind::Choice, event.branch);
    next.current = branch->second;
  } else {
    append(next.log, event.node,
           event.kind == EventKind::AgentConfirm ? LogEntryKind::Agent : LogEntryKind::External);
    next.current = single_outflow(m, event.node)->to;
  }
  advance_until_wait(next);
  return next;
}

// ---------------------------------------------------------------------------
// Exhaustive exploration
// ---------------------------------------------------------------------------

namespace {

struct WalkResult {
  std::map<std::string, long long> outcomes;  // end node -> path count
  int max_steps = 0;
  bool all_paths_terminate = true;
};

// step_cutoff <= 0 disables the cutoff (used when budgets alone bound paths).
WalkResult walk_paths(const ProcessModel& m, int max_rounds, int step_cutoff) {
  WalkResult result;
  std::map<std::pair<std::string, std::string>, int> rounds;

  std::set<std::pair<std::string, std::string>> loop_branches;
  for (const DecisionGateway* g : m.gateways()) {
    for (const auto& [label, target] : g->branches) {
      if (m.find_node(target) && reachable_from(m, target).count(g->id))
        loop_branches.insert({g->id, label});
    }
  }

  std::function<void(const std::string&, int)> go = [&](const std::string& at, int steps) {
    std::string current = at;
    for (;;) {
      if (step_cutoff > 0 && steps >= step_cutoff) {
        result.all_paths_terminate = false;
        result.max_steps = std::max(result.max_steps, steps);
        return;
      }
      ++steps;
      const Node* node = m.find_node(current);
      if (std::holds_alternative<EndNode>(*node)) {
        ++result.outcomes[current];
        result.max_steps = std::max(result.max_steps, steps);
        return;
      }
      if (const StartNode* s = std::get_if<StartNode>(node)) {
        current = single_outflow(m, s->id)->to;
        continue;
      }
      if (const Task* t = std::get_if<Task>(node)) {
        // A fires by itself; S/M wait for their single event. Either way the
        // continuation is unique.
        current = single_outflow(m, t->id)->to;
        continue;
      }
      const DecisionGateway* g = std::get_if<DecisionGateway>(node);
      bool followed_any = false;
      for (const auto& [label, target] : g->branches) {
        bool loop = loop_branches.count({g->id, label}) > 0;
        if (loop) {
          int& used = rounds[{g->id, label}];
          if (used >= max_rounds) continue;
          ++used;
          go(target, steps);
          --used;
        } else {
          go(target, steps);
        }
        followed_any = true;
      }
      if (!followed_any) {
        // Every branch is budget-exhausted; the path cannot finish.
        result.all_paths_terminate = false;
        result.max_steps = std::max(result.max_steps, steps);
      }
      return;
    }
  };

  go(m.start()->id, 0);
  return result;
}

}  // namespace

std::vector<Outcome> enumerate_outcomes(const ProcessModel& tobe, int max_revision_rounds) {
  require_runnable(tobe, true);
  WalkResult result = walk_paths(tobe, max_revision_rounds, 0);
  std::vector<Outcome> outcomes;
  for (const auto& [end, count] : result.outcomes) outcomes.push_back({end, count});
  return outcomes;
}

TerminationReport check_termination(const ProcessModel& tobe, int max_revision_rounds) {
  require_runnable(tobe, false);
  int n = static_cast<int>(tobe.nodes.size());
  int bound = n * (1 + max_revision_rounds) + n;
  WalkResult result = walk_paths(tobe, max_revision_rounds, bound);
  return {result.all_paths_terminate, result.max_steps};
}

// ---------------------------------------------------------------------------
// Scripts and logs
// ---------------------------------------------------------------------------

std::vector<Event> parse_event_script(const std::string& text) {
  std::vector<Event> events;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string kind, id, branch;
    if (!(ls >> kind)) continue;
    ls >> id >> branch;
    auto span = SourceSpan{line_no, 1};
    if (kind == "auto") continue;
    if (id.empty()) throw ParseError("malformed-event", span, "missing node id");
    if (kind == "agent") {
      events.push_back({EventKind::AgentConfirm, id, ""});
    } else if (kind == "external") {
      events.push_back({EventKind::ExternalComplete, id, ""});
    } else if (kind == "choose") {
      if (branch.empty()) throw ParseError("malformed-event", span, "choose needs a branch");
      events.push_back({EventKind::Choose, id, branch});
    } else {
      throw ParseError("unknown-keyword", span, kind);
    }
  }
  return events;
}

std::string format_event_log(const EventLog& log) {
  std::ostringstream out;
  for (const auto& e : log.entries) {
    switch (e.kind) {
      case LogEntryKind::AutoFire: out << "auto " << e.node; break;
      case LogEntryKind::Agent: out << "agent " << e.node; break;
      case LogEntryKind::External: out << "external " << e.node; break;
      case LogEntryKind::Choice: out << "choose " << e.node << " " << e.branch; break;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace procflow
