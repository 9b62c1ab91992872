#include "cosntf/images.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace cosntf {

namespace {

// Next header integer, skipping whitespace and '#' comments.
long read_header_int(const std::string& buf, std::size_t& pos, const std::string& name) {
  while (pos < buf.size()) {
    if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
      ++pos;
    } else if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < buf.size() && std::isdigit(static_cast<unsigned char>(buf[pos]))) ++pos;
  if (start == pos) throw FormatError(name + ": malformed PGM header");
  return std::stol(buf.substr(start, pos - start));
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string name = path.filename().string();
  if (buf.size() < 2 || buf[0] != 'P' || (buf[1] != '2' && buf[1] != '5')) {
    throw FormatError(name + ": not a P2/P5 PGM file");
  }
  std::size_t pos = 2;
  const long w = read_header_int(buf, pos, name);
  const long h = read_header_int(buf, pos, name);
  const long maxval = read_header_int(buf, pos, name);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) throw FormatError(name + ": bad PGM header");

  GrayImage img;
  img.height = h;
  img.width = w;
  const auto count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  img.pixels.resize(count);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (buf[1] == '5') {
    ++pos;  // single whitespace byte after maxval
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    if (buf.size() < pos + count * bytes) throw FormatError(name + ": truncated pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(buf.data() + pos + i * bytes);
      const unsigned v = bytes == 2 ? (static_cast<unsigned>(p[0]) << 8) | p[1] : p[0];
      if (v > static_cast<unsigned>(maxval)) throw FormatError(name + ": pixel above maxval");
      img.pixels[i] = v * scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const long v = read_header_int(buf, pos, name);
      if (v > maxval) throw FormatError(name + ": pixel above maxval");
      img.pixels[i] = static_cast<double>(v) * scale;
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  for (double v : img.pixels) {
    out.put(static_cast<char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
  }
  if (!out) throw IoError("write to " + path.string() + " failed");
}

GrayImage resize_bilinear(const GrayImage& img, Index height, Index width) {
  if (height < 1 || width < 1) throw InvalidArgument("resize_bilinear: target size must be positive");
  if (height == img.height && width == img.width) return img;
  GrayImage out;
  out.height = height;
  out.width = width;
  out.pixels.resize(static_cast<std::size_t>(height * width));
  const double sy = static_cast<double>(img.height) / static_cast<double>(height);
  const double sx = static_cast<double>(img.width) / static_cast<double>(width);
  auto source = [](Index dst, double s, Index extent, Index& lo, Index& hi, double& frac) {
    const double x = std::clamp((static_cast<double>(dst) + 0.5) * s - 0.5, 0.0,
                                static_cast<double>(extent - 1));
    lo = static_cast<Index>(std::floor(x));
    hi = std::min(lo + 1, extent - 1);
    frac = x - static_cast<double>(lo);
  };
  for (Index r = 0; r < height; ++r) {
    Index r0, r1;
    double fy;
    source(r, sy, img.height, r0, r1, fy);
    for (Index c = 0; c < width; ++c) {
      Index c0, c1;
      double fx;
      source(c, sx, img.width, c0, c1, fx);
      const double top = (1.0 - fx) * img.at(r0, c0) + fx * img.at(r0, c1);
      const double bottom = (1.0 - fx) * img.at(r1, c0) + fx * img.at(r1, c1);
      out.pixels[static_cast<std::size_t>(r * width + c)] = (1.0 - fy) * top + fy * bottom;
    }
  }
  return out;
}

Tensor3 ingest_images(const std::filesystem::path& dir,
                      std::optional<std::pair<Index, Index>> resize) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".pgm") files.push_back(entry.path());
  }
  if (files.empty()) throw IoError("no .pgm files in " + dir.string());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

  Index h0 = 0, w0 = 0;
  std::vector<GrayImage> images;
  for (const auto& f : files) {
    GrayImage img = read_pgm(f);
    if (images.empty()) {
      h0 = img.height;
      w0 = img.width;
    } else if (img.height != h0 || img.width != w0) {
      throw DimensionError(f.filename().string() + " is " + std::to_string(img.height) + "x" +
                           std::to_string(img.width) + ", expected " + std::to_string(h0) + "x" +
                           std::to_string(w0));
    }
    if (resize) img = resize_bilinear(img, resize->first, resize->second);
    images.push_back(std::move(img));
  }

  const Index m = images.front().height, p = images.front().width;
  const auto n = static_cast<Index>(images.size());
  Tensor3 t(m, n, p);
  for (Index j = 0; j < n; ++j) {
    const GrayImage& img = images[static_cast<std::size_t>(j)];
    for (Index i = 0; i < m; ++i) {
      for (Index k = 0; k < p; ++k) t(i, j, k) = img.at(i, k);
    }
  }
  return t;
}

}  // namespace cosntf
