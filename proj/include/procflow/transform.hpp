#pragma once

#include "procflow/decision.hpp"
#include "procflow/model.hpp"
#include "procflow/textfmt.hpp"

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace procflow {

// ---------------------------------------------------------------------------
// Model-to-model changes, classified by modeling perspective
// ---------------------------------------------------------------------------

struct LabelAssigned {
  std::string task;
  std::optional<AutomationLabel> label;  // nullopt clears the label
};
struct NodeAdded { Node node; };
struct NodeRemoved { std::string id; };
struct FlowAdded { Flow flow; };
struct FlowRemoved { Flow flow; };
struct RoleAdded { Role role; };
struct RoleRemoved { std::string id; };
struct ProcessRenamed {
  std::string old_name;
  std::string new_name;
};

using Change = std::variant<RoleRemoved, NodeRemoved, FlowRemoved, RoleAdded, NodeAdded,
                            FlowAdded, LabelAssigned, ProcessRenamed>;

struct ChangeSet {
  std::vector<Change> changes;
};

// Strictly ordered, most general first.
enum class PerspectiveLevel {
  SystemInformation = 0,
  BusinessProcess = 1,
  Organizational = 2,
  Strategic = 3,
};

std::string perspective_name(PerspectiveLevel level);  // e.g. "SYSTEMINFORMATION"

// Copies the As-Is topology and stamps each task with its decided label.
// Throws ModelError{invalid-model} / ModelError{coverage-mismatch}.
ProcessModel derive_tobe(const ProcessModel& asis,
                         const std::vector<LabeledDecision>& decisions);

// Minimal change set taking a to b, matching nodes by id only. Deterministic
// order: removals, additions, label changes, rename; each group sorted by id.
// The `kind` field is pipeline metadata and is not diffed.
ChangeSet diff_models(const ProcessModel& a, const ProcessModel& b);

// Applies a change set; throws ModelError{apply-mismatch} when a change does
// not fit the model it is applied to.
ProcessModel apply_changes(const ProcessModel& base, const ChangeSet& changes);

// Where each kind of change lands in the perspective hierarchy. The default
// is the tested contract; alternative mappings may be supplied.
struct PerspectiveMapping {
  PerspectiveLevel process_renamed = PerspectiveLevel::Strategic;
  PerspectiveLevel role_changed = PerspectiveLevel::Organizational;
  PerspectiveLevel topology_changed = PerspectiveLevel::BusinessProcess;
  PerspectiveLevel label_assigned = PerspectiveLevel::SystemInformation;
};

// Total over the Change alternatives.
PerspectiveLevel classify_change(const Change& change, const PerspectiveMapping& mapping = {});

// One change per line: `<LEVEL> <KIND> <ids...>`.
std::string format_change_report(const ChangeSet& changes);

// ---------------------------------------------------------------------------
// Use-case extraction
// ---------------------------------------------------------------------------

struct UseCaseModel {
  std::vector<std::string> actors;  // model role order
  std::vector<UseCasePackage> packages;
  std::vector<std::pair<std::string, std::string>> associations;  // (actor, task), sorted
};

// Packages must partition the model's tasks; actors must be model roles.
// Throws ModelError{non-partition} / ModelError{unknown-actor}.
UseCaseModel extract_use_cases(const ProcessModel& model,
                               const std::vector<UseCasePackage>& packages,
                               const std::set<std::string>& actors);

std::string format_use_case_model(const UseCaseModel& ucm);

}  // namespace procflow
