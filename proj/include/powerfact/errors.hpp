#pragma once

#include <stdexcept>
#include <string>

namespace powerfact {

enum class Errc {
  parameter_out_of_range,
  norm_bound_violated,
  divergent_majorant,
  zero_value,
  singular,
  schedule_overflow,
  illegal_path,
  not_in_s,
  precondition_failed,
  decay_too_slow,
  instance_mismatch,
  bad_config,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::parameter_out_of_range: return "ParameterOutOfRange";
    case Errc::norm_bound_violated: return "NormBoundViolated";
    case Errc::divergent_majorant: return "DivergentMajorant";
    case Errc::zero_value: return "ZeroValue";
    case Errc::singular: return "Singular";
    case Errc::schedule_overflow: return "ScheduleOverflow";
    case Errc::illegal_path: return "IllegalPath";
    case Errc::not_in_s: return "NotInS";
    case Errc::precondition_failed: return "PreconditionFailed";
    case Errc::decay_too_slow: return "DecayTooSlow";
    case Errc::instance_mismatch: return "InstanceMismatch";
    case Errc::bad_config: return "BadConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace powerfact
