#include "nlchns/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nlchns {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr const char* kLedgerHeader =
    "t,E,kinetic,nonlocal,potential,visc_dissipation,mu_dissipation,forcing_power,mass";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_row(const std::string& line, std::size_t expect, const std::string& path) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) throw IoError(path + ": bad number '" + cell + "'");
    out.push_back(v);
  }
  if (out.size() != expect) throw IoError(path + ": wrong column count in '" + line + "'");
  return out;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw IoError("cannot open " + path + " for writing");
  return os;
}

}  // namespace

void write_ledger_csv(std::ostream& os, const std::vector<EnergyLedgerEntry>& ledger) {
  os << "# nlchns " << kVersion << '\n' << kLedgerHeader << '\n';
  for (const auto& e : ledger)
    os << fmt(e.t) << ',' << fmt(e.E) << ',' << fmt(e.kinetic) << ',' << fmt(e.nonlocal) << ',' << fmt(e.potential)
       << ',' << fmt(e.visc_dissipation) << ',' << fmt(e.mu_dissipation) << ',' << fmt(e.forcing_power) << ','
       << fmt(e.mass) << '\n';
}

void write_ledger_csv(const std::string& path, const std::vector<EnergyLedgerEntry>& ledger) {
  auto os = open_out(path);
  write_ledger_csv(os, ledger);
  if (!os) throw IoError("write failed: " + path);
}

std::vector<EnergyLedgerEntry> read_ledger_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::string line;
  std::vector<EnergyLedgerEntry> out;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kLedgerHeader) throw IoError(path + ": unexpected ledger header");
      header = true;
      continue;
    }
    const auto v = parse_row(line, 9, path);
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]});
  }
  if (!header) throw IoError(path + ": missing ledger header");
  return out;
}

void write_signal_csv(const std::string& path, const SampledSignal& s, const std::string& value_name) {
  auto os = open_out(path);
  os << "t," << value_name << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) os << fmt(s.time(i)) << ',' << fmt(s.values[i]) << '\n';
  if (!os) throw IoError("write failed: " + path);
}

SampledSignal read_signal_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::string line;
  std::vector<double> t, v;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (first) {
      first = false;
      char* end = nullptr;
      std::strtod(line.c_str(), &end);
      if (end == line.c_str()) continue;  // header row
    }
    const auto row = parse_row(line, 2, path);
    t.push_back(row[0]);
    v.push_back(row[1]);
  }
  if (t.size() < 2) throw IoError(path + ": need at least two samples");
  const double dt = (t.back() - t.front()) / double(t.size() - 1);
  if (!(dt > 0.0)) throw IoError(path + ": times must increase");
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::abs(t[i] - (t.front() + double(i) * dt)) > 1e-9 * std::max(1.0, std::abs(t[i])))
      throw IoError(path + ": samples must be uniformly spaced");
  SampledSignal s{t.front(), dt, std::move(v)};
  return s;
}

namespace {

constexpr char kMagic[8] = {'N', 'L', 'C', 'H', 'N', 'S', '1', '\0'};
constexpr std::size_t kHeader = 8 + 4 + 4 + 8 + 8;

template <class T>
void put(std::vector<char>& b, T v) {
  const auto* p = reinterpret_cast<const char*>(&v);
  b.insert(b.end(), p, p + sizeof(T));
}

template <class T>
T get(const std::vector<char>& b, std::size_t& off) {
  T v;
  std::memcpy(&v, b.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

}  // namespace

std::vector<char> snapshot_bytes(const FlowState& s) {
  const GridSpec& g = s.grid();
  std::vector<char> b(kMagic, kMagic + 8);
  put<std::uint32_t>(b, std::uint32_t(g.resolution));
  put<std::uint32_t>(b, 3);
  put<double>(b, g.side_length);
  put<double>(b, s.t);
  for (const ScalarField* f : {&s.u.x, &s.u.y, &s.phi}) {
    const auto* p = reinterpret_cast<const char*>(f->values().data());
    b.insert(b.end(), p, p + f->size() * sizeof(double));
  }
  return b;
}

FlowState snapshot_from_bytes(const std::vector<char>& b) {
  if (b.size() < kHeader || std::memcmp(b.data(), kMagic, 8) != 0) throw IoError("snapshot: bad magic or header");
  std::size_t off = 8;
  const auto N = get<std::uint32_t>(b, off);
  const auto count = get<std::uint32_t>(b, off);
  const auto L = get<double>(b, off);
  const auto t = get<double>(b, off);
  if (count != 3) throw IoError("snapshot: field count must be 3");
  const std::size_t plane = std::size_t(N) * N;
  if (b.size() != kHeader + 3 * plane * sizeof(double)) throw IoError("snapshot: size mismatch");
  GridSpec g = GridSpec::make(L, int(N));
  FlowState s(g);
  s.t = t;
  for (ScalarField* f : {&s.u.x, &s.u.y, &s.phi}) {
    std::memcpy(f->values().data(), b.data() + off, plane * sizeof(double));
    off += plane * sizeof(double);
  }
  return s;
}

void write_snapshot(const std::string& path, const FlowState& s) {
  const auto b = snapshot_bytes(s);
  auto os = open_out(path, std::ios::binary);
  os.write(b.data(), std::streamsize(b.size()));
  if (!os) throw IoError("write failed: " + path);
}

FlowState read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::vector<char> b((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return snapshot_from_bytes(b);
}

void write_text(const std::string& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace nlchns
