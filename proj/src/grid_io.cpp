#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "orthlip/error.hpp"
#include "orthlip/grid.hpp"

namespace orthlip {

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw InvalidArgument("truncated binary field");
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

}  // namespace

void write_field_csv(const NodalField& f, std::ostream& os) {
  os << "index,value\n";
  char buf[64];
  for (std::size_t k = 0; k < f.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k, f[k]);
    os << buf;
  }
}

NodalField read_field_csv(const Grid& grid, std::istream& is) {
  std::vector<double> values(grid.size(), 0.0);
  std::vector<bool> seen(grid.size(), false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "index,value") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InvalidArgument("field CSV line " + std::to_string(lineno) + " has no comma");
    }
    std::size_t idx = 0;
    double v = 0.0;
    try {
      idx = std::stoul(line.substr(0, comma));
      v = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("field CSV line " + std::to_string(lineno) + " is not 'index,value'");
    }
    if (idx >= grid.size()) {
      throw InvalidArgument("field CSV index " + std::to_string(idx) + " exceeds the grid");
    }
    values[idx] = v;
    seen[idx] = true;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) throw InvalidArgument("field CSV misses node " + std::to_string(k));
  }
  return NodalField(grid, std::move(values));
}

void write_field_binary(const NodalField& f, std::ostream& os) {
  const Grid& g = f.grid();
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
  for (std::size_t d = 0; d < g.dim(); ++d) put_le<std::uint64_t>(os, g.nodes(d));
  for (std::size_t d = 0; d < g.dim(); ++d) {
    put_le<double>(os, g.extent(d).lo);
    put_le<double>(os, g.extent(d).hi);
  }
  for (double v : f.values()) put_le<double>(os, v);
}

NodalField read_field_binary(std::istream& is) {
  const auto dim = get_le<std::uint32_t>(is);
  if (dim < 2 || dim > 3) throw InvalidArgument("binary field header has unsupported dimension");
  std::vector<std::size_t> nodes(dim);
  std::vector<Interval> extent(dim);
  for (auto& n : nodes) n = static_cast<std::size_t>(get_le<std::uint64_t>(is));
  for (auto& e : extent) {
    e.lo = get_le<double>(is);
    e.hi = get_le<double>(is);
  }
  Grid g(extent, nodes);
  std::vector<double> values(g.size());
  for (auto& v : values) v = get_le<double>(is);
  return NodalField(std::move(g), std::move(values));
}

}  // namespace orthlip
