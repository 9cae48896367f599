#include "fourbody/state_io.hpp"

#include <string>

namespace fourbody {

namespace {

nlohmann::json vec_to_json(Vec4 const& v) {
  return nlohmann::json::array({v[0], v[1], v[2], v[3]});
}

Vec4 vec_from_json(nlohmann::json const& a, std::string const& what) {
  if (!a.is_array() || a.size() != 4) {
    throw std::invalid_argument("state JSON: " + what + " must be an array of 4 reals");
  }
  Vec4 v;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!a[i].is_number()) {
      throw std::invalid_argument("state JSON: " + what + " has a non-numeric entry");
    }
    v[i] = a[i].get<double>();
  }
  return v;
}

std::array<Vec4, 3> triple_from_json(nlohmann::json const& doc, char const* key) {
  if (!doc.contains(key) || !doc[key].is_array() || doc[key].size() != 3) {
    throw std::invalid_argument(std::string("state JSON: \"") + key +
                                "\" must hold 3 vectors");
  }
  std::array<Vec4, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = vec_from_json(doc[key][i], std::string(key) + "[" + std::to_string(i) + "]");
  }
  return out;
}

}  // namespace

nlohmann::json state_to_json(State const& s) {
  nlohmann::json doc;
  doc["masses"] = s.masses().values();
  for (std::size_t i = 0; i < 3; ++i) {
    doc["positions"].push_back(vec_to_json(s.position(i)));
    doc["velocities"].push_back(vec_to_json(s.velocity(i)));
  }
  return doc;
}

ReadState state_from_json(nlohmann::json const& doc, bool allow_recenter) {
  if (!doc.is_object()) throw std::invalid_argument("state JSON: expected an object");
  if (!doc.contains("masses") || !doc["masses"].is_array() || doc["masses"].size() != 3) {
    throw std::invalid_argument("state JSON: \"masses\" must hold 3 reals");
  }
  for (auto const& m : doc["masses"]) {
    if (!m.is_number()) throw std::invalid_argument("state JSON: non-numeric mass");
  }
  Masses const masses(doc["masses"][0].get<double>(), doc["masses"][1].get<double>(),
                      doc["masses"][2].get<double>());
  auto positions = triple_from_json(doc, "positions");
  auto velocities = triple_from_json(doc, "velocities");
  try {
    return {State(masses, positions, velocities), false};
  } catch (InvalidState const&) {
    if (!allow_recenter) throw;
  }
  recenter(masses, positions, velocities);
  return {State(masses, positions, velocities), true};
}

}  // namespace fourbody
