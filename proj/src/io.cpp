#include "io.hpp"

#include <openssl/sha.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace litho {

using nlohmann::json;

std::string sha1_hex(std::string_view data) {
  unsigned char md[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(data.data()), data.size(), md);
  static const char* hex = "0123456789abcdef";
  std::string out(2 * SHA_DIGEST_LENGTH, '0');
  for (int k = 0; k < SHA_DIGEST_LENGTH; ++k) {
    out[2 * k] = hex[md[k] >> 4];
    out[2 * k + 1] = hex[md[k] & 15];
  }
  return out;
}

std::string git_blob_hash(std::string_view content) {
  std::string s = "blob " + std::to_string(content.size());
  s.push_back('\0');
  s.append(content);
  return sha1_hex(s);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return os.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("short write to " + path.string());
}

namespace {

json grid_json(const GridSpec& g) {
  return {{"nx", g.nx}, {"ny", g.ny}, {"spacing", g.spacing}, {"origin_x", g.origin_x}, {"origin_y", g.origin_y}};
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  g.nx = j.at("nx").get<int>();
  g.ny = j.at("ny").get<int>();
  g.spacing = j.at("spacing").get<double>();
  g.origin_x = j.at("origin_x").get<double>();
  g.origin_y = j.at("origin_y").get<double>();
  return g;
}

void write_sidecar(const fs::path& path, json meta, const json& extra) {
  if (extra.is_object())
    for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
  write_file(path.string() + ".json", meta.dump(2) + "\n");
}

// Image row 0 is the top of the picture, i.e. the largest y.
std::string pgm(const GridSpec& g, int maxval, const std::function<int(int, int)>& sample) {
  std::string out = "P5\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n" + std::to_string(maxval) + "\n";
  const bool wide = maxval > 255;
  out.reserve(out.size() + g.size() * (wide ? 2 : 1));
  for (int row = 0; row < g.ny; ++row) {
    const int j = g.ny - 1 - row;
    for (int i = 0; i < g.nx; ++i) {
      const int v = sample(i, j);
      if (wide) out.push_back(static_cast<char>(v >> 8));
      out.push_back(static_cast<char>(v & 255));
    }
  }
  return out;
}

struct Raster {
  int w = 0, h = 0;
  std::vector<double> v;  // row-major, top row first, in [0, 1]
};

Raster parse_pgm(const std::string& data, const std::string& name) {
  std::size_t pos = 0;
  auto token = [&]() {
    for (;;) {
      while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
      if (pos < data.size() && data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const std::size_t b = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    if (b == pos) throw IoError(name + ": truncated PGM header");
    return data.substr(b, pos - b);
  };
  const std::string magic = token();
  if (magic != "P5" && magic != "P2") throw IoError(name + ": not a PGM file");
  Raster r;
  int maxval = 0;
  try {
    r.w = std::stoi(token());
    r.h = std::stoi(token());
    maxval = std::stoi(token());
  } catch (const std::logic_error&) {
    throw IoError(name + ": malformed PGM header");
  }
  if (r.w <= 0 || r.h <= 0 || maxval <= 0 || maxval > 65535) throw IoError(name + ": bad PGM dimensions");
  const std::size_t n = static_cast<std::size_t>(r.w) * static_cast<std::size_t>(r.h);
  r.v.resize(n);
  if (magic == "P5") {
    ++pos;  // single whitespace after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    if (data.size() < pos + n * bytes) throw IoError(name + ": truncated PGM raster");
    for (std::size_t k = 0; k < n; ++k) {
      const auto* p = reinterpret_cast<const unsigned char*>(data.data() + pos + k * bytes);
      const int v = bytes == 2 ? (p[0] << 8 | p[1]) : p[0];
      r.v[k] = static_cast<double>(std::min(v, maxval)) / maxval;
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      int v = 0;
      try {
        v = std::stoi(token());
      } catch (const std::logic_error&) {
        throw IoError(name + ": malformed ASCII PGM raster");
      }
      r.v[k] = static_cast<double>(std::clamp(v, 0, maxval)) / maxval;
    }
  }
  return r;
}

Raster parse_png(const std::string& data, const std::string& name) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, data.data(), data.size()))
    throw IoError(name + ": " + img.message);
  img.format = PNG_FORMAT_LINEAR_Y;  // 16-bit linear luminance
  std::vector<png_uint_16> buf(PNG_IMAGE_SIZE(img) / sizeof(png_uint_16));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw IoError(name + ": " + msg);
  }
  Raster r;
  r.w = static_cast<int>(img.width);
  r.h = static_cast<int>(img.height);
  r.v.resize(buf.size());
  for (std::size_t k = 0; k < buf.size(); ++k) r.v[k] = buf[k] / 65535.0;
  return r;
}

ScalarField raster_to_field(const Raster& r, const GridSpec& grid, const std::string& name) {
  if (r.w != grid.nx || r.h != grid.ny)
    throw ConfigError(name + ": image is " + std::to_string(r.w) + "x" + std::to_string(r.h) + " but the grid is " +
                      std::to_string(grid.nx) + "x" + std::to_string(grid.ny));
  ScalarField f(grid);
  for (int row = 0; row < r.h; ++row)
    for (int i = 0; i < r.w; ++i) f(i, r.h - 1 - row) = r.v[static_cast<std::size_t>(row) * r.w + i];
  return f;
}

ScalarField rasterize_polygons(const json& doc, const GridSpec& grid, const std::string& name) {
  if (!doc.is_object() || !doc.contains("polygons") || !doc["polygons"].is_array())
    throw ConfigError(name + ": expected {\"polygons\": [[[x, y], ...], ...]}");
  std::vector<std::vector<Point>> polys;
  for (const auto& poly : doc["polygons"]) {
    std::vector<Point> pts;
    if (!poly.is_array()) throw ConfigError(name + ": polygon must be an array of [x, y] pairs");
    for (const auto& p : poly) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ConfigError(name + ": polygon vertex must be [x, y]");
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    if (pts.size() < 3) throw ConfigError(name + ": polygon needs at least three vertices");
    polys.push_back(std::move(pts));
  }
  ScalarField f(grid);
  for (int j = 0; j < grid.ny; ++j) {
    const double y = grid.y(j);
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i);
      bool inside = false;
      for (const auto& pts : polys)
        for (std::size_t a = 0, b = pts.size() - 1; a < pts.size(); b = a++) {
          const Point& p = pts[a];
          const Point& q = pts[b];
          if ((p.y > y) != (q.y > y) && x < (q.x - p.x) * (y - p.y) / (q.y - p.y) + p.x) inside = !inside;
        }
      f(i, j) = inside ? 1.0 : 0.0;
    }
  }
  return f;
}

}  // namespace

void write_pgm16(const fs::path& path, const ScalarField& f, const json& extra) {
  const double lo = f.min(), hi = f.max();
  const double span = hi > lo ? hi - lo : 1.0;
  write_file(path, pgm(f.grid(), 65535, [&](int i, int j) {
               return static_cast<int>(std::lround((f(i, j) - lo) / span * 65535.0));
             }));
  write_sidecar(path, {{"format", "pgm16"}, {"min", lo}, {"max", hi}, {"grid", grid_json(f.grid())}}, extra);
}

ScalarField read_pgm16(const fs::path& path) {
  json meta;
  try {
    meta = json::parse(read_file(path.string() + ".json"));
  } catch (const json::exception& e) {
    throw IoError(path.string() + ".json: " + e.what());
  }
  const GridSpec g = grid_from_json(meta.at("grid"));
  const Raster r = parse_pgm(read_file(path), path.string());
  ScalarField f = raster_to_field(r, g, path.string());
  const double lo = meta.at("min").get<double>(), hi = meta.at("max").get<double>();
  for (auto& v : f.values()) v = lo + v * (hi - lo);
  return f;
}

void write_pgm_bitmap(const fs::path& path, const BinaryPattern& p, const json& extra) {
  write_file(path, pgm(p.grid(), 1, [&](int i, int j) { return p.at(i, j) ? 1 : 0; }));
  write_sidecar(path, {{"format", "pgm1"}, {"count", p.count()}, {"grid", grid_json(p.grid())}}, extra);
}

json contour_json(const BinaryPattern& p) {
  json loops = json::array();
  for (const auto& loop : p.contour()) {
    json pts = json::array();
    for (const Point& q : loop) pts.push_back({q.x, q.y});
    loops.push_back(std::move(pts));
  }
  return {{"grid", grid_json(p.grid())}, {"perimeter", total_length(p.contour())}, {"loops", std::move(loops)}};
}

std::string field_csv(const ScalarField& f) {
  const GridSpec& g = f.grid();
  std::string out = "nx,ny,spacing,origin_x,origin_y\n";
  char buf[64];
  out += std::to_string(g.nx) + "," + std::to_string(g.ny);
  for (double v : {g.spacing, g.origin_x, g.origin_y}) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    out += buf;
  }
  out += "\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      std::snprintf(buf, sizeof buf, i ? ",%.17g" : "%.17g", f(i, j));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

ScalarField read_mask(const fs::path& path, const GridSpec& grid) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  const std::string data = read_file(path);
  const std::string name = path.string();
  if (ext == ".json") {
    json doc;
    try {
      doc = json::parse(data);
    } catch (const json::exception& e) {
      throw IoError(name + ": " + e.what());
    }
    return rasterize_polygons(doc, grid, name);
  }
  if (ext == ".png") return raster_to_field(parse_png(data, name), grid, name);
  if (ext == ".pgm" || ext == ".pbm" || ext == ".pnm") return raster_to_field(parse_pgm(data, name), grid, name);
  throw IoError(name + ": unknown mask format (expected .pgm, .png or .json)");
}

std::string kernel_cache_key(double delta_tilde, const PsfSearchBudget& budget) {
  const json j = {{"kind", "smoothed_psf"},
                  {"delta_tilde", delta_tilde},
                  {"s0_halvings", budget.s0_halvings},
                  {"b0_doublings", budget.b0_doublings},
                  {"cutoff", "smooth_cutoff"}};
  return git_blob_hash(j.dump());
}

void write_kernel_cache(const fs::path& dir, const SmoothedPsf& psf, const PsfSearchBudget& budget) {
  std::string csv = "r,T\n";
  char buf[80];
  for (std::size_t k = 0; k < psf.profile.values.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", psf.profile.dr * static_cast<double>(k), psf.profile.values[k]);
    csv += buf;
  }
  const json head = {{"kind", "smoothed_psf"},
                     {"key", kernel_cache_key(psf.delta_tilde, budget)},
                     {"delta_tilde", psf.delta_tilde},
                     {"budget", {{"s0_halvings", budget.s0_halvings}, {"b0_doublings", budget.b0_doublings}}},
                     {"s0", psf.s0},
                     {"b0", psf.b0},
                     {"b", psf.b},
                     {"deviation", psf.deviation},
                     {"deviation_scaled", psf.deviation_scaled},
                     {"l1_norm", psf.l1_norm},
                     {"candidates_tried", psf.candidates_tried},
                     {"profile_dr", psf.profile.dr},
                     {"profile_samples", psf.profile.values.size()},
                     {"profile_hash", git_blob_hash(csv)}};
  write_file(dir / "kernel_profile.csv", csv);
  write_file(dir / "kernel.json", head.dump(2) + "\n");
}

std::optional<SmoothedPsf> read_kernel_cache(const fs::path& dir, double delta_tilde, const PsfSearchBudget& budget) {
  if (!fs::exists(dir / "kernel.json") || !fs::exists(dir / "kernel_profile.csv")) return std::nullopt;
  json head;
  try {
    head = json::parse(read_file(dir / "kernel.json"));
  } catch (const json::exception&) {
    return std::nullopt;
  }
  if (head.value("key", std::string()) != kernel_cache_key(delta_tilde, budget)) return std::nullopt;
  const std::string csv = read_file(dir / "kernel_profile.csv");
  if (head.value("profile_hash", std::string()) != git_blob_hash(csv)) return std::nullopt;
  SmoothedPsf psf;
  try {
    psf.delta_tilde = head.at("delta_tilde").get<double>();
    psf.s0 = head.at("s0").get<double>();
    psf.b0 = head.at("b0").get<double>();
    psf.b = head.at("b").get<double>();
    psf.deviation = head.at("deviation").get<double>();
    psf.deviation_scaled = head.at("deviation_scaled").get<double>();
    psf.l1_norm = head.at("l1_norm").get<double>();
    psf.candidates_tried = head.at("candidates_tried").get<int>();
    psf.profile.dr = head.at("profile_dr").get<double>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) return std::nullopt;
    psf.profile.values.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
  }
  if (psf.profile.values.size() != head.value("profile_samples", std::size_t{0})) return std::nullopt;
  psf.cutoff = smooth_cutoff;
  return psf;
}

}  // namespace litho
