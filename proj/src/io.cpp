#include "cosntf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace cosntf {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Index parse_index(const std::string& field) {
  const std::string s = trim(field);
  Index v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError("idx: bad index '" + s + "'");
  }
  if (v < 1) throw FormatError("idx: indices are 1-based, got " + s);
  return v;
}

IndexList parse_idx_line(const std::string& line, char tag, Mode mode) {
  const std::string s = trim(line);
  if (s.size() < 2 || s[0] != tag || s[1] != ':') {
    throw FormatError(std::string("idx: expected a line starting with '") + tag + ":'");
  }
  std::vector<Index> one_based;
  std::stringstream rest(s.substr(2));
  std::string field;
  while (std::getline(rest, field, ',')) one_based.push_back(parse_index(field));
  if (one_based.empty()) throw FormatError(std::string("idx: empty ") + tag + " list");
  return IndexList::from_one_based(mode, one_based);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw FormatError("cannot format value");
  return std::string(buf, ptr);
}

void write_t3t(std::ostream& os, const Tensor3& t) {
  if (t.empty()) throw InvalidArgument("write_t3t: empty tensor");
  os << "t3 " << t.m() << ' ' << t.n() << ' ' << t.p() << '\n';
  const auto data = t.data();
  const Index n = t.n();
  for (std::size_t i = 0; i < data.size(); ++i) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), data[i], std::chars_format::scientific, 16);
    os.write(buf, res.ptr - buf);
    os << ((i + 1) % static_cast<std::size_t>(n) == 0 ? '\n' : ' ');
  }
}

void write_t3t(const std::filesystem::path& path, const Tensor3& t) {
  std::ofstream out = open_out(path);
  write_t3t(out, t);
  finish(out, path);
}

Tensor3 read_t3t(std::istream& is) {
  std::string magic;
  long long m = 0, n = 0, p = 0;
  if (!(is >> magic) || magic != "t3") throw FormatError("t3t: missing 't3' header");
  if (!(is >> m >> n >> p)) throw FormatError("t3t: malformed dimensions");
  if (m < 1 || n < 1 || p < 1) throw FormatError("t3t: dimensions must be positive");
  const auto count = static_cast<std::size_t>(m) * static_cast<std::size_t>(n) *
                     static_cast<std::size_t>(p);
  std::vector<double> data;
  data.reserve(count);
  std::string tok;
  while (is >> tok) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw FormatError("t3t: bad value '" + tok + "'");
    }
    if (!std::isfinite(v)) throw FormatError("t3t: non-finite value");
    data.push_back(v);
    if (data.size() > count) break;
  }
  if (data.size() != count) {
    throw FormatError("t3t: expected " + std::to_string(count) + " values, found " +
                      (data.size() > count ? "more" : std::to_string(data.size())));
  }
  return Tensor3(m, n, p, std::move(data));
}

Tensor3 read_t3t(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_t3t(in);
}

void write_idx(std::ostream& os, const IndexList& I, const IndexList& J) {
  auto line = [&](char tag, const IndexList& idx) {
    os << tag << ':';
    bool first = true;
    for (Index v : idx.one_based()) {
      os << (first ? " " : ",") << v;
      first = false;
    }
    os << '\n';
  };
  line('I', I);
  line('J', J);
}

void write_idx(const std::filesystem::path& path, const IndexList& I, const IndexList& J) {
  std::ofstream out = open_out(path);
  write_idx(out, I, J);
  finish(out, path);
}

std::pair<IndexList, IndexList> read_idx(std::istream& is) {
  std::string a, b;
  if (!std::getline(is, a) || !std::getline(is, b)) throw FormatError("idx: need I and J lines");
  return {parse_idx_line(a, 'I', Mode::horizontal), parse_idx_line(b, 'J', Mode::lateral)};
}

std::pair<IndexList, IndexList> read_idx(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_idx(in);
}

}  // namespace cosntf
