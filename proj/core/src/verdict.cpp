#include "microdom/verdict.hpp"

namespace microdom {

std::string to_string(Status s) {
  switch (s) {
    case Status::holds: return "holds";
    case Status::fails: return "fails";
    case Status::unknown: return "unknown";
  }
  return "unknown";
}

Json Verdict::to_json() const {
  Json j;
  j["status"] = to_string(status);
  if (depth > 0) j["depth"] = depth;
  if (precision > 0) j["precision"] = precision;
  j["symbolic"] = symbolic;
  if (!note.empty()) j["note"] = note;
  if (!witness.empty()) j["witness"] = witness;
  return j;
}

}  // namespace microdom
