#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace procflow {

// ---------------------------------------------------------------------------
// Process model graph
// ---------------------------------------------------------------------------

enum class ModelKind { AsIs, ToBe };

// Total order: more automated = greater (Automatic > Supported > Manual).
enum class AutomationLabel { Manual = 0, Supported = 1, Automatic = 2 };

char label_letter(AutomationLabel label);
std::optional<AutomationLabel> label_from_letter(char letter);

struct Role {
  std::string id;
  std::string title;
};

struct Task {
  std::string id;
  std::string title;
  std::vector<std::string> roles;        // non-empty; declaration order
  std::optional<AutomationLabel> label;  // present only in ToBe models
};

struct DecisionGateway {
  std::string id;
  std::string title;
  std::string role;
  std::map<std::string, std::string> branches;  // branch label -> target node id
};

struct StartNode {
  std::string id;
};

struct EndNode {
  std::string id;
};

using Node = std::variant<StartNode, EndNode, Task, DecisionGateway>;

std::string node_id(const Node& node);

struct Flow {
  std::string from;
  std::string to;
  std::optional<std::string> branch;  // required iff `from` is a gateway
};

struct ProcessModel {
  std::string name;
  ModelKind kind = ModelKind::AsIs;
  std::vector<Role> roles;
  std::vector<Node> nodes;
  std::vector<Flow> flows;
  // Node ids named by `end` statements in source text. Normally these are the
  // EndNode ids; a mark pointing at a task or gateway is a validation error.
  std::vector<std::string> end_marks;

  const Node* find_node(const std::string& id) const;
  const Task* find_task(const std::string& id) const;
  const DecisionGateway* find_gateway(const std::string& id) const;
  std::vector<const Task*> tasks() const;
  std::vector<const DecisionGateway*> gateways() const;
  const StartNode* start() const;  // first one, or nullptr
  std::vector<const EndNode*> ends() const;
  std::vector<const Flow*> outgoing(const std::string& id) const;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
  std::string rule;
  std::string element;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool clean() const { return violations.empty(); }
  bool has(const std::string& rule) const;
  bool has(const std::string& rule, const std::string& element) const;
  std::string to_text() const;
};

class ModelError : public std::runtime_error {
 public:
  ModelError(std::string code, const std::string& message);
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Full invariant check. Violations are data, not failures; the report is
// deterministic and independent of declaration order.
ValidationReport validate_model(const ProcessModel& model);

// Structural rules only: skips the two reachability rules (unreachable-node,
// end-not-reachable) so termination analysis can run on trap-cycle models.
ValidationReport validate_structure(const ProcessModel& model);

// ---------------------------------------------------------------------------
// Structural queries
// ---------------------------------------------------------------------------

// Role id -> task ids in canonical (lexicographic) order. Only roles with at
// least one task appear. Throws ModelError{invalid-model} on a dirty model.
std::map<std::string, std::vector<std::string>> role_task_index(const ProcessModel& model);

// Forward closure over flows, including the node itself.
// Throws ModelError{unknown-node} if the node does not exist.
std::set<std::string> reachable_from(const ProcessModel& model, const std::string& node);

// Structural equality ignoring declaration order (and end_marks).
bool models_equal(const ProcessModel& a, const ProcessModel& b);

}  // namespace procflow
