#pragma once

#include <string>

#include <json.hpp>

#include "microdom/value.hpp"

namespace microdom {

using Json = nlohmann::json;

enum class Status { holds, fails, unknown };

std::string to_string(Status s);

/// Three-valued certified result. A holds/fails verdict carries a witness
/// payload that an independent checker can replay; unknown carries the ledger
/// gathered so far and the horizon it was gathered at.
struct Verdict {
  Status status = Status::unknown;
  long depth = 0;         // horizon checked (0 = not depth-bounded)
  long precision = 0;     // enclosure precision used, when relevant
  bool symbolic = false;  // true when closed by a symbolic rule, not sampling
  std::string note;       // short tag, e.g. the rule or witness kind
  Json witness = Json::object();

  static Verdict yes(std::string note = {}, Json w = Json::object()) {
    return {Status::holds, 0, 0, false, std::move(note), std::move(w)};
  }
  static Verdict no(std::string note = {}, Json w = Json::object()) {
    return {Status::fails, 0, 0, false, std::move(note), std::move(w)};
  }
  static Verdict dunno(std::string note = {}, Json w = Json::object()) {
    return {Status::unknown, 0, 0, false, std::move(note), std::move(w)};
  }

  Verdict& at_depth(long n) {
    depth = n;
    return *this;
  }
  Verdict& by_rule() {
    symbolic = true;
    return *this;
  }

  bool holds() const { return status == Status::holds; }
  bool fails() const { return status == Status::fails; }

  Json to_json() const;
};

}  // namespace microdom
