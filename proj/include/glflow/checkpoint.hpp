#pragma once

#include <cstdint>
#include <string>

#include "glflow/field.hpp"

namespace glflow {

// Mid-run state capsule: "GLCKPT01" | u32 version | u64 config hash |
// u64 next stop index | u64 report byte offset | u64 field blob length |
// field blob (snapshot layout).  Everything else a resumed run needs is
// replayed from the report rows the original run had already written.
struct Checkpoint {
  std::uint64_t config_hash = 0;
  std::uint64_t next_stop = 0;
  std::uint64_t report_offset = 0;
  ComplexField field;
};

void write_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace glflow
