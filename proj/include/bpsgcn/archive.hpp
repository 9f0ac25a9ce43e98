#pragma once

#include "bpsgcn/params.hpp"

#include <string>

namespace bpsgcn {

/// Named-array checkpoint archive.
///
/// Layout: 8-byte magic "BPSA0001", uint64 little-endian manifest length,
/// JSON manifest { format_version, arrays: [{name, rows, cols, dtype, offset}] },
/// then raw column-major little-endian float64 payloads. Offsets are relative
/// to the end of the manifest.
void save_archive(const std::string& path, const ParamStore& params);

/// Loads every array in the archive into a fresh store.
ParamStore load_archive(const std::string& path);

/// Loads arrays into an existing store; every archive name must already exist
/// with the same shape.
void load_archive_into(const std::string& path, ParamStore& params);

} // namespace bpsgcn
