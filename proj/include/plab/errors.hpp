#pragma once

// Error taxonomy for the toolkit.  Every throwing precondition failure in the
// library raises plab::error with a code describing *which contract* was
// violated, so callers (and the CLI) can distinguish bad inputs from genuine
// mathematical inadmissibility.

#include <stdexcept>
#include <string>

namespace plab {

enum class errc {
  parameter,      // malformed argument (wrong range, wrong size, unknown key)
  resolution,     // grid too coarse for the requested operation
  alignment,      // quantity must sit on the sample lattice and does not
  degenerate_ball,// averaging region captures too few samples to mean anything
  overflow,       // requested exponent/scale would overflow double range
  hypothesis,     // a theorem-style precondition between parameters fails
  admissibility,  // parameter pack is usable but outside the guaranteed regime
  io,             // file could not be read/written/parsed
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::parameter: return "parameter";
    case errc::resolution: return "resolution";
    case errc::alignment: return "alignment";
    case errc::degenerate_ball: return "degenerate_ball";
    case errc::overflow: return "overflow";
    case errc::hypothesis: return "hypothesis";
    case errc::admissibility: return "admissibility";
    case errc::io: return "io";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace plab
