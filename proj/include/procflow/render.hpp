#pragma once

#include "procflow/model.hpp"
#include "procflow/transform.hpp"

#include <string>

namespace procflow {

// Tasks are filled by automation label; every label state is mapped.
struct RenderStyle {
  std::string automatic_color = "green";
  std::string supported_color = "yellow";
  std::string manual_color = "blue";
  std::string unlabeled_color = "white";
};

// Deterministic DOT digraph: one node statement per model node (tasks as
// filled boxes, gateways as diamonds, start as circle, ends as double
// circles), one edge per flow with gateway edges labeled by branch.
// Throws ModelError{invalid-model} on a dirty model.
std::string process_to_dot(const ProcessModel& model, const RenderStyle& style = {});

// Actors as boxes, use cases as ellipses grouped into one cluster per
// package, association edges.
std::string usecase_to_dot(const UseCaseModel& ucm);

}  // namespace procflow
