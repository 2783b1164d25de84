#pragma once

#include <string>

#include "glflow/field.hpp"

namespace glflow {

// Field snapshot container, explicit little-endian layout:
//   magic "GLFLOW01" | u32 version | u8 dim | u64 cells per axis (dim of
//   them) | f64 h | f64 epsilon | f64 t | u8 precision | payload
// The payload is interleaved (re, im) pairs in storage order.  precision 0
// means f64 pairs; that is the only format this build writes or accepts.
// Reads are strict: wrong magic, unknown version, unknown precision, or a
// short payload are hard errors, never silent repairs.
void write_snapshot(const std::string& path, const ComplexField& f);
ComplexField read_snapshot(const std::string& path);

// Byte-level serialization used by both snapshots and checkpoints.
std::string snapshot_bytes(const ComplexField& f);
ComplexField snapshot_from_bytes(const std::string& bytes, std::size_t* off);

}  // namespace glflow
