#include "cilab/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cilab/error.hpp"
#include "cilab/format.hpp"

namespace cilab {

namespace {

static_assert(std::endian::native == std::endian::little, "binary payloads assume a little-endian host");

void write_doubles(std::ostream& os, const double* data, std::size_t count) {
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::istream& is, double* data, std::size_t count) {
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double)) {
    throw Error(ErrorKind::Format, "payload truncated");
  }
}

std::string ints(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

void write_grid(std::ostream& os, const Grid& g) {
  os << "origin " << join_doubles(g.origin(), " ") << '\n';
  os << "spacing " << join_doubles(g.spacing(), " ") << '\n';
  os << "counts " << ints(g.counts()) << '\n';
}

struct Header {
  int n = 0;
  std::vector<double> origin, spacing, times;
  std::vector<std::int64_t> counts;
  bool has_times = false;
  std::string layout;
  std::vector<std::string> fields;
  std::vector<SingularPoint> singular;
};

std::pair<std::string, std::string> next_line(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::Format, "header truncated");
  const auto sp = line.find(' ');
  if (sp == std::string::npos) return {line, {}};
  return {line.substr(0, sp), line.substr(sp + 1)};
}

std::vector<std::int64_t> parse_ints(const std::string& s) {
  std::vector<std::int64_t> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    try {
      out.push_back(std::stoll(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Format, "bad integer '" + tok + "'");
    }
  }
  return out;
}

Header read_header(std::istream& is, const std::string& magic) {
  const auto [m, rest] = next_line(is);
  if (m != magic) throw Error(ErrorKind::Format, "expected '" + magic + "' magic, got '" + m + "'");
  Header h;
  const std::string terminal = magic == "dbv1" ? "layout" : "fields";
  while (true) {
    const auto [key, value] = next_line(is);
    if (key == "n" || key == "d") {
      h.n = static_cast<int>(parse_ints(value).at(0));
    } else if (key == "origin") {
      h.origin = parse_doubles(value, ' ');
    } else if (key == "spacing") {
      h.spacing = parse_doubles(value, ' ');
    } else if (key == "counts") {
      h.counts = parse_ints(value);
    } else if (key == "time-axis" || key == "times") {
      h.times = parse_doubles(value, ' ');
      h.has_times = true;
    } else if (key == "singular" && magic == "dbv1") {
      auto v = parse_doubles(value, ' ');
      if (v.size() < 2) throw Error(ErrorKind::Format, "singular line needs a position and a radius");
      const double radius = v.back();
      v.pop_back();
      h.singular.push_back({std::move(v), radius});
    } else if (key == terminal) {
      if (magic == "dbv1") {
        h.layout = value;
      } else {
        std::istringstream in(value);
        std::string f;
        while (in >> f) h.fields.push_back(f);
      }
      break;
    } else {
      throw Error(ErrorKind::Format, "unknown header key '" + key + "'");
    }
  }
  return h;
}

Grid header_grid(const Header& h) { return Grid(h.origin, h.spacing, h.counts); }

void write_dbv1_header(std::ostream& os, int n, const Grid& g, const std::vector<double>* times, const char* layout,
                       const std::vector<SingularPoint>& singular = {}) {
  os << "dbv1\nn " << n << '\n';
  write_grid(os, g);
  if (times) os << "time-axis " << join_doubles(*times, " ") << '\n';
  for (const auto& sp : singular) {
    os << "singular " << join_doubles(sp.position, " ") << ' ' << format_double(sp.resolve_radius) << '\n';
  }
  os << "layout " << layout << '\n';
}

}  // namespace

void write_dbv1(std::ostream& os, const TensorField& f) {
  write_dbv1_header(os, f.dim(), f.grid(), nullptr, "packed-upper", f.singular_points());
  write_doubles(os, f.raw().data(), f.raw().size());
}

void write_dbv1(std::ostream& os, const ScalarField& f) {
  write_dbv1_header(os, 1, f.grid, nullptr, "scalar");
  write_doubles(os, f.values.data(), f.values.size());
}

void write_dbv1(std::ostream& os, const DefectField& f) {
  if (f.sigma.size() != f.times.size() || f.sigma.empty()) throw Error(ErrorKind::Format, "defect field blocks");
  write_dbv1_header(os, f.sigma.front().dim(), f.grid, &f.times, "packed-upper");
  for (const auto& s : f.sigma) write_doubles(os, s.raw().data(), s.raw().size());
}

TensorField read_dbv1_tensor(std::istream& is) {
  const Header h = read_header(is, "dbv1");
  if (h.layout != "packed-upper" || h.has_times) throw Error(ErrorKind::Format, "not a tensor DBV1 file");
  TensorField f(header_grid(h), h.n);
  std::vector<double> data(f.raw().size());
  read_doubles(is, data.data(), data.size());
  f.raw() = std::move(data);
  for (const auto& sp : h.singular) f.add_singular_point(sp);
  return f;
}

ScalarField read_dbv1_scalar(std::istream& is) {
  const Header h = read_header(is, "dbv1");
  if (h.layout != "scalar" || h.n != 1) throw Error(ErrorKind::Format, "not a scalar DBV1 file");
  ScalarField f(header_grid(h));
  read_doubles(is, f.values.data(), f.values.size());
  return f;
}

DefectField read_dbv1_defect(std::istream& is) {
  const Header h = read_header(is, "dbv1");
  if (h.layout != "packed-upper" || !h.has_times) throw Error(ErrorKind::Format, "not a defect DBV1 file");
  DefectField f;
  f.grid = header_grid(h);
  f.times = h.times;
  for (std::size_t k = 0; k < h.times.size(); ++k) {
    TensorField s(f.grid, h.n);
    std::vector<double> data(s.raw().size());
    read_doubles(is, data.data(), data.size());
    s.raw() = std::move(data);
    f.sigma.push_back(std::move(s));
  }
  return f;
}

void write_flw1(std::ostream& os, const FlowField& w) {
  os << "flw1\nd " << w.d() << "\ntimes " << join_doubles(w.times, " ") << '\n';
  write_grid(os, w.grid);
  os << "fields rho u p e\n";
  for (const auto& s : w.snapshots) {
    write_doubles(os, s.rho.data(), s.rho.size());
    write_doubles(os, s.u.data(), s.u.size());
    write_doubles(os, s.p.data(), s.p.size());
    write_doubles(os, s.e.data(), s.e.size());
  }
}

FlowField read_flw1(std::istream& is) {
  const Header h = read_header(is, "flw1");
  if (h.fields != std::vector<std::string>{"rho", "u", "p", "e"}) throw Error(ErrorKind::Format, "unsupported field list");
  if (static_cast<int>(h.counts.size()) != h.n) throw Error(ErrorKind::Format, "d disagrees with counts");
  FlowField w(header_grid(h), h.times);
  for (auto& s : w.snapshots) {
    read_doubles(is, s.rho.data(), s.rho.size());
    read_doubles(is, s.u.data(), s.u.size());
    read_doubles(is, s.p.data(), s.p.size());
    read_doubles(is, s.e.data(), s.e.size());
  }
  return w;
}

namespace {

template <class T>
void save_any(const std::string& path, const T& value, void (*writer)(std::ostream&, const T&)) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Format, "cannot write " + path);
  writer(os, value);
  if (!os) throw Error(ErrorKind::Format, "write failed for " + path);
}

}  // namespace

void save(const std::string& path, const TensorField& f) {
  save_any<TensorField>(path, f, static_cast<void (*)(std::ostream&, const TensorField&)>(&write_dbv1));
}
void save(const std::string& path, const ScalarField& f) {
  save_any<ScalarField>(path, f, static_cast<void (*)(std::ostream&, const ScalarField&)>(&write_dbv1));
}
void save(const std::string& path, const DefectField& f) {
  save_any<DefectField>(path, f, static_cast<void (*)(std::ostream&, const DefectField&)>(&write_dbv1));
}
void save(const std::string& path, const FlowField& w) { save_any<FlowField>(path, w, &write_flw1); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Format, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sniff_format(const std::string& bytes) {
  const auto nl = bytes.find('\n');
  return bytes.substr(0, nl == std::string::npos ? bytes.size() : nl);
}

}  // namespace cilab
