#pragma once

#include <string>

#include "krontrace/network.hpp"
#include "krontrace/generators.hpp"
#include "krontrace/trace.hpp"
#include "krontrace/whitney.hpp"
#include "krontrace/report.hpp"

namespace kt {

// Serialization for the on-disk artifact formats.  Writers emit a fixed key
// order and 17-significant-digit doubles so that identical inputs produce
// byte-identical files.  Readers reject unknown fields.

std::string json_escape(const std::string& s);

// %.17g, except non-finite values map to null.
std::string json_num(double v);

std::string network_to_json(const ResistanceNetwork& net);
ResistanceNetwork network_from_json(const std::string& text);

// Geometry sidecar for a generated domain: boundary metric table, distance
// to boundary, and address labels where the generator assigns them.
std::string geometry_to_json(const GeneratedDomain& dom);

std::string trace_to_json(const TraceForm& tf);
TraceForm trace_from_json(const std::string& text);

std::string cover_to_json(const GeneratedDomain& dom, const WhitneyCover& cov);

std::string report_to_json(const Report& rep);
std::string report_to_csv(const Report& rep);

std::string read_file(const std::string& path);

// Writes via a temp file in the same directory plus rename, so a crash never
// leaves a partial artifact.  Creates parent directories as needed.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace kt
