#pragma once

#include <stdexcept>
#include <string>

namespace pspt {

enum class Errc {
  parse_error,          // malformed edge-list line
  invalid_weight,       // weight <= 0 or non-finite
  unknown_id,           // query id not present in the graph
  contract_violation,   // operation precondition broken by the caller
  size_guard,           // all-pairs oracle asked for a graph above its cap
  bad_magic,            // index file does not start with the magic bytes
  bad_version,          // index file format version unsupported
  truncated,            // index stream ended mid-record
  crc_mismatch,         // index payload checksum failed
  invariant_violation,  // decoded index breaks a structural invariant
  empty_batch,          // batch query set is empty
  fan_in_overflow,      // a shuffle key exceeded the per-key value cap
  io_error,             // file could not be opened/read/written
  invalid_argument,     // bad parameter (alpha <= 0, ...)
};

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::parse_error: return "parse_error";
    case Errc::invalid_weight: return "invalid_weight";
    case Errc::unknown_id: return "unknown_id";
    case Errc::contract_violation: return "contract_violation";
    case Errc::size_guard: return "size_guard";
    case Errc::bad_magic: return "bad_magic";
    case Errc::bad_version: return "bad_version";
    case Errc::truncated: return "truncated";
    case Errc::crc_mismatch: return "crc_mismatch";
    case Errc::invariant_violation: return "invariant_violation";
    case Errc::empty_batch: return "empty_batch";
    case Errc::fan_in_overflow: return "fan_in_overflow";
    case Errc::io_error: return "io_error";
    case Errc::invalid_argument: return "invalid_argument";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, std::string msg) {
  throw Error(code, std::move(msg));
}

}  // namespace pspt
