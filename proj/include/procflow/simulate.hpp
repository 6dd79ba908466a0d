#pragma once

#include "procflow/model.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace procflow {

// ---------------------------------------------------------------------------
// Workflow execution: A tasks fire automatically, S tasks await an agent
// confirmation, M tasks await external completion, gateways await a choice.
// ---------------------------------------------------------------------------

enum class PendingKind { None, AwaitAgent, AwaitExternal, AwaitChoice };

struct Pending {
  PendingKind kind = PendingKind::None;
  std::string node;
};

enum class EventKind { AgentConfirm, ExternalComplete, Choose };

struct Event {
  EventKind kind;
  std::string node;
  std::string branch;  // Choose only
};

enum class LogEntryKind { AutoFire, Agent, External, Choice };

struct LogEntry {
  int seq = 0;  // strictly increasing from 1
  std::string node;
  LogEntryKind kind = LogEntryKind::AutoFire;
  std::string branch;
};

struct EventLog {
  std::vector<LogEntry> entries;
};

// A gateway branch whose target can reach the gateway again. Taking one
// consumes a unit of that branch's round budget; the revise and redo loops
// of a model are all bounded this way.
bool is_loop_branch(const ProcessModel& model, const std::string& gateway,
                    const std::string& branch);

struct SimState {
  const ProcessModel* model = nullptr;
  int max_rounds = 1;
  std::string current;
  bool terminal = false;
  Pending pending;
  std::map<std::pair<std::string, std::string>, int> loop_rounds;  // (gateway, branch) -> uses
  EventLog log;

  int rounds_used(const std::string& gateway, const std::string& branch) const;
};

// Throws ModelError{invalid-model} unless the model is a clean ToBe model.
SimState start_run(const ProcessModel& tobe, int max_revision_rounds);

// Returns the advanced state; throws ModelError{event-mismatch},
// ModelError{branch-unknown} or ModelError{revision-budget-exceeded}.
SimState apply_event(const SimState& state, const Event& event);

struct Outcome {
  std::string end_node;
  long long paths = 0;
};

// Exhaustive exploration of every gateway choice under the round budget;
// sorted by end node id. Await events have a single continuation, so all
// branching comes from gateways.
std::vector<Outcome> enumerate_outcomes(const ProcessModel& tobe, int max_revision_rounds);

struct TerminationReport {
  bool terminates = false;
  int max_steps = 0;  // longest observed path, in node entries
};

// Runs on structurally sound ToBe models even when the reachability rules
// fail (that is what it diagnoses); paths are cut at
// |nodes|*(1+max_revision_rounds)+|nodes| steps.
TerminationReport check_termination(const ProcessModel& tobe, int max_revision_rounds);

// Script lines: `agent <task>`, `external <task>`, `choose <gateway> <branch>`.
// `auto <task>` lines (as emitted in logs) are informational and skipped, so
// a produced log replays directly.
std::vector<Event> parse_event_script(const std::string& text);

std::string format_event_log(const EventLog& log);

}  // namespace procflow
