#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace uforge {

/// One certified property. `required` is false for properties that are
/// recorded but not expected to hold (e.g. left distributivity of a proper
/// nearfield).
struct Check {
  std::string name;
  bool holds = false;
  bool required = true;
  std::string witness;
};

struct AxiomReport {
  std::vector<Check> checks;

  void add(std::string name, bool holds, std::string witness = {}, bool required = true) {
    checks.push_back({std::move(name), holds, required, std::move(witness)});
  }

  bool all_required_hold() const {
    for (const auto& c : checks)
      if (c.required && !c.holds) return false;
    return true;
  }

  const Check* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  bool holds(std::string_view name) const {
    const Check* c = find(name);
    return c != nullptr && c->holds;
  }
};

}  // namespace uforge
