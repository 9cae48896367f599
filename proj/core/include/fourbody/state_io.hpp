#pragma once

// JSON form of a State:
//   {"masses": [m1, m2, m3],
//    "positions": [[x, y, z, w], [..], [..]],
//    "velocities": [[x, y, z, w], [..], [..]]}
// Additional keys are ignored by the reader.

#include <nlohmann/json.hpp>

#include "fourbody/phase.hpp"

namespace fourbody {

struct ReadState {
  State state;
  // True when the input violated the center-of-mass invariants and was
  // shifted to the center-of-mass frame.
  bool recentered = false;
};

nlohmann::json state_to_json(State const& s);

// Throws std::invalid_argument on malformed input. Without allow_recenter,
// a state off the center-of-mass frame raises InvalidState.
ReadState state_from_json(nlohmann::json const& doc, bool allow_recenter);

}  // namespace fourbody
