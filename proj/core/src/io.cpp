#include "fracheat/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "fracheat/error.hpp"

namespace fracheat {
namespace {

static_assert(std::endian::native == std::endian::little, "binary field format assumes a little-endian host");

template <class T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw InvalidArgument("truncated field file");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_field_binary(const Field& f, std::ostream& out) {
  put<std::int64_t>(out, f.grid().dim());
  put<std::int64_t>(out, f.grid().points_per_axis());
  put<double>(out, f.grid().extent());
  for (double v : f.values()) put<double>(out, v);
}

void write_field_binary(const Field& f, const std::filesystem::path& path) {
  auto out = open_out(path, std::ios::binary);
  write_field_binary(f, out);
}

Field read_field_binary(std::istream& in) {
  const auto dim = get<std::int64_t>(in);
  const auto n = get<std::int64_t>(in);
  const auto extent = get<double>(in);
  Grid grid(static_cast<int>(dim), extent, static_cast<int>(n));
  std::vector<double> values(grid.size());
  for (double& v : values) v = get<double>(in);
  Field f(grid, std::move(values));
  if (!f.all_finite()) throw InvalidArgument("field file contains non-finite values");
  return f;
}

Field read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return read_field_binary(in);
}

void write_field_csv(const Field& f, std::ostream& out) {
  const int dim = f.grid().dim();
  out << (dim == 1 ? "x,value\r\n" : "x,y,value\r\n");
  out << std::setprecision(17);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Point p = f.grid().point(k);
    out << p[0] << ',';
    if (dim == 2) out << p[1] << ',';
    out << f[k] << "\r\n";
  }
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  auto out = open_out(path, std::ios::out);
  write_field_csv(f, out);
}

}  // namespace fracheat
