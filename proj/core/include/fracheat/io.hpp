#pragma once

#include <filesystem>
#include <iosfwd>

#include "fracheat/field.hpp"

namespace fracheat {

/// Binary layout: little-endian int64 dim, int64 points_per_axis, float64
/// extent, then the row-major float64 payload.
void write_field_binary(const Field& f, std::ostream& out);
void write_field_binary(const Field& f, const std::filesystem::path& path);
Field read_field_binary(std::istream& in);
Field read_field_binary(const std::filesystem::path& path);

/// CSV with header "x,value" (1D) or "x,y,value" (2D).
void write_field_csv(const Field& f, std::ostream& out);
void write_field_csv(const Field& f, const std::filesystem::path& path);

}  // namespace fracheat
