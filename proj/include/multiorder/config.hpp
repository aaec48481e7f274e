#pragma once

// Tunable budgets shared by the CLI and the acceptance runs.

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "multiorder/errors.hpp"
#include "multiorder/exact_field.hpp"
#include "multiorder/finite_structures.hpp"
#include "multiorder/genericity.hpp"
#include "multiorder/json_io.hpp"
#include "multiorder/refuter.hpp"

namespace multiorder {

struct Config {
  unsigned precision_cap = kDefaultPrecisionCap;
  std::uint64_t witness_probe_budget = 1'000'000;
  std::vector<std::int64_t> brute_box_schedule{8, 16, 32, 64};
  std::int64_t endpoint_search_norm = 32;
  std::uint64_t rng_seed = 0;

  /// Throws InvalidArgument unless every budget is positive and the brute
  /// schedule is strictly increasing.
  void validate() const {
    if (precision_cap < kInitialSignPrecision)
      throw InvalidArgument("precision_cap must be at least " + std::to_string(kInitialSignPrecision));
    if (witness_probe_budget == 0) throw InvalidArgument("witness_probe_budget must be positive");
    if (endpoint_search_norm <= 0) throw InvalidArgument("endpoint_search_norm must be positive");
    if (brute_box_schedule.empty()) throw InvalidArgument("brute_box_schedule must not be empty");
    for (std::size_t i = 0; i < brute_box_schedule.size(); ++i) {
      if (brute_box_schedule[i] <= 0) throw InvalidArgument("brute_box_schedule entries must be positive");
      if (i > 0 && brute_box_schedule[i] <= brute_box_schedule[i - 1])
        throw InvalidArgument("brute_box_schedule must be strictly increasing");
    }
  }

  /// MULTIORDER_PRECISION_CAP overrides precision_cap.
  void apply_environment() {
    if (const char* v = std::getenv("MULTIORDER_PRECISION_CAP")) {
      char* end = nullptr;
      const unsigned long bits = std::strtoul(v, &end, 10);
      if (end == v || *end != '\0') throw InvalidArgument("MULTIORDER_PRECISION_CAP is not a number");
      precision_cap = static_cast<unsigned>(bits);
    }
  }

  WitnessConfig witness() const { return {witness_probe_budget, brute_box_schedule}; }

  RefuteConfig refute() const {
    RefuteConfig r;
    r.endpoint_search_norm = endpoint_search_norm;
    return r;
  }

  EmbedConfig embed() const { return {witness(), brute_box_schedule}; }

  io::Json to_json() const {
    return {{"precision_cap", precision_cap},
            {"witness_probe_budget", witness_probe_budget},
            {"brute_box_schedule", brute_box_schedule},
            {"endpoint_search_norm", endpoint_search_norm},
            {"rng_seed", rng_seed}};
  }

  /// Missing keys keep their defaults; unknown keys are rejected.
  static Config from_json(const io::Json& j) {
    if (!j.is_object()) throw MalformedInput("config must be a JSON object");
    Config c;
    try {
      for (const auto& [key, value] : j.items()) {
        if (key == "schema") continue;
        if (key == "precision_cap") {
          c.precision_cap = value.get<unsigned>();
        } else if (key == "witness_probe_budget") {
          c.witness_probe_budget = value.get<std::uint64_t>();
        } else if (key == "brute_box_schedule") {
          c.brute_box_schedule = value.get<std::vector<std::int64_t>>();
        } else if (key == "endpoint_search_norm") {
          c.endpoint_search_norm = value.get<std::int64_t>();
        } else if (key == "rng_seed") {
          c.rng_seed = value.get<std::uint64_t>();
        } else {
          throw MalformedInput("config: unknown key \"" + key + "\"");
        }
      }
    } catch (const io::Json::exception& e) {
      throw MalformedInput(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
  }
};

}  // namespace multiorder
