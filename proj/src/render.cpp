#include "ringsq/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <png.h>

#include <json.hpp>

#include "ringsq/io.hpp"

namespace ringsq {

namespace {

// Anchors of a perceptually ordered dark-to-bright map.
constexpr std::array<std::array<double, 3>, 9> kMap{{
    {0.267, 0.005, 0.329},
    {0.283, 0.141, 0.458},
    {0.254, 0.265, 0.530},
    {0.207, 0.372, 0.553},
    {0.164, 0.471, 0.558},
    {0.128, 0.567, 0.551},
    {0.135, 0.659, 0.518},
    {0.478, 0.821, 0.318},
    {0.993, 0.906, 0.144},
}};

std::array<unsigned char, 3> color(double v) {
  v = std::clamp(v, 0.0, 1.0) * (kMap.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(v), kMap.size() - 2);
  const double f = v - static_cast<double>(i);
  std::array<unsigned char, 3> c{};
  for (int k = 0; k < 3; ++k)
    c[k] = static_cast<unsigned char>(std::lround(255.0 * ((1 - f) * kMap[i][k] + f * kMap[i + 1][k])));
  return c;
}

Index nearest(const RVector& axis, double x) {
  Index best = 0;
  double d = std::abs(axis(0) - x);
  for (Index i = 1; i < axis.size(); ++i) {
    const double di = std::abs(axis(i) - x);
    if (di < d) {
      d = di;
      best = i;
    }
  }
  return best;
}

std::string base64(const std::vector<unsigned char>& in) {
  static const char* tbl = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < in.size(); i += 3) {
    const unsigned v = (in[i] << 16) | ((i + 1 < in.size() ? in[i + 1] : 0) << 8) |
                       (i + 2 < in.size() ? in[i + 2] : 0);
    out += tbl[(v >> 18) & 63];
    out += tbl[(v >> 12) & 63];
    out += i + 1 < in.size() ? tbl[(v >> 6) & 63] : '=';
    out += i + 2 < in.size() ? tbl[v & 63] : '=';
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

double nice_step(double span) {
  const double raw = span / 6.0;
  const double p = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * p >= raw) return m * p;
  return 10.0 * p;
}

}  // namespace

Image heatmap(const RVector& row_axis, const RVector& col_axis, const RMatrix& m, double lo,
              double hi, int pixels) {
  if (m.rows() != row_axis.size() || m.cols() != col_axis.size() || m.size() == 0)
    throw Error("cli_io", "heatmap axes do not match the matrix");
  Image img;
  img.width = img.height = pixels;
  img.rgb.resize(static_cast<std::size_t>(3 * pixels * pixels));
  std::vector<Index> ix(pixels), iy(pixels);
  for (int p = 0; p < pixels; ++p) {
    const double c = lo + (p + 0.5) / pixels * (hi - lo);
    ix[p] = nearest(col_axis, c);
    iy[p] = nearest(row_axis, c);
  }
  double top = 0.0;
  for (int py = 0; py < pixels; ++py)
    for (int px = 0; px < pixels; ++px) top = std::max(top, m(iy[py], ix[px]));
  for (int py = 0; py < pixels; ++py) {
    const Index r = iy[pixels - 1 - py];
    for (int px = 0; px < pixels; ++px) {
      const auto c = color(top > 0.0 ? m(r, ix[px]) / top : 0.0);
      const std::size_t o = 3 * (static_cast<std::size_t>(py) * pixels + px);
      img.rgb[o] = c[0];
      img.rgb[o + 1] = c[1];
      img.rgb[o + 2] = c[2];
    }
  }
  return img;
}

std::vector<unsigned char> encode_png(const Image& img) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("cli_io", "libpng init failed");
  png_infop info = png_create_info_struct(png);
  std::vector<unsigned char> out;
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("cli_io", "PNG encoding failed");
  }
  png_set_write_fn(
      png, &out,
      [](png_structp p, png_bytep data, png_size_t len) {
        auto* v = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(p));
        v->insert(v->end(), data, data + len);
      },
      [](png_structp) {});
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 9);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y)
    png_write_row(png, const_cast<png_bytep>(&img.rgb[static_cast<std::size_t>(3 * y * img.width)]));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const std::string& path, const Image& img) {
  const auto bytes = encode_png(img);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cli_io", "cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::string heatmap_svg(const Image& img, double lo, double hi, const std::string& title,
                        const std::string& xlabel, const std::string& ylabel) {
  const int ml = 70, mt = 40, side = 400, mr = 90, mb = 60;
  const int W = ml + side + mr, H = mt + side + mb;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << ml + side / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(title) << "</text>\n";
  s << "<image x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << side << "\" height=\"" << side
    << "\" preserveAspectRatio=\"none\" style=\"image-rendering:pixelated\" href=\"data:image/png;base64,"
    << base64(encode_png(img)) << "\"/>\n";
  s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << side << "\" height=\"" << side
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double step = nice_step(hi - lo);
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9; v += step) {
    const double fx = ml + (v - lo) / (hi - lo) * side;
    const double fy = mt + side - (v - lo) / (hi - lo) * side;
    s << "<line x1=\"" << num(fx) << "\" y1=\"" << mt + side << "\" x2=\"" << num(fx) << "\" y2=\""
      << mt + side + 5 << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << num(fx) << "\" y=\"" << mt + side + 19 << "\" text-anchor=\"middle\">"
      << num(std::abs(v) < 1e-12 ? 0.0 : v) << "</text>\n";
    s << "<line x1=\"" << ml - 5 << "\" y1=\"" << num(fy) << "\" x2=\"" << ml << "\" y2=\""
      << num(fy) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << ml - 8 << "\" y=\"" << num(fy + 4) << "\" text-anchor=\"end\">"
      << num(std::abs(v) < 1e-12 ? 0.0 : v) << "</text>\n";
  }
  s << "<text x=\"" << ml + side / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
    << escape(xlabel) << "</text>\n";
  s << "<text x=\"18\" y=\"" << mt + side / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << mt + side / 2 << ")\">" << escape(ylabel) << "</text>\n";
  // Color bar, normalized to the panel maximum.
  const int bx = ml + side + 20, bw = 16;
  for (int k = 0; k < 50; ++k) {
    const auto c = color((49 - k) / 49.0);
    char hex[8];
    std::snprintf(hex, sizeof hex, "#%02x%02x%02x", c[0], c[1], c[2]);
    s << "<rect x=\"" << bx << "\" y=\"" << num(mt + k * side / 50.0) << "\" width=\"" << bw
      << "\" height=\"" << num(side / 50.0 + 0.5) << "\" fill=\"" << hex << "\"/>\n";
  }
  s << "<text x=\"" << bx + bw + 4 << "\" y=\"" << mt + 10 << "\">max</text>\n";
  s << "<text x=\"" << bx + bw + 4 << "\" y=\"" << mt + side << "\">0</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string curves_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel) {
  static const char* colors[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400"};
  const int ml = 70, mt = 40, pw = 480, ph = 320, mb = 60, mr = 30;
  const int W = ml + pw + mr, H = mt + ph + mb;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  for (const auto& sr : series)
    for (std::size_t i = 0; i < sr.x.size(); ++i) {
      if (!any) {
        x0 = x1 = sr.x[i];
        y1 = sr.y[i];
        any = true;
      }
      x0 = std::min(x0, sr.x[i]);
      x1 = std::max(x1, sr.x[i]);
      y1 = std::max(y1, sr.y[i]);
    }
  if (x1 <= x0) x1 = x0 + 1.0;
  x0 = std::min(x0, 0.0);
  y0 = 0.0;
  if (y1 <= y0) y1 = 1.0;
  y1 *= 1.08;
  auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto Y = [&](double y) { return mt + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(title) << "</text>\n";
  s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double sx = nice_step(x1 - x0), sy = nice_step(y1 - y0);
  for (double v = std::ceil(x0 / sx) * sx; v <= x1 + 1e-9; v += sx)
    s << "<text x=\"" << num(X(v)) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
      << num(v) << "</text>\n";
  for (double v = std::ceil(y0 / sy) * sy; v <= y1 + 1e-9; v += sy) {
    s << "<line x1=\"" << ml << "\" y1=\"" << num(Y(v)) << "\" x2=\"" << ml + pw << "\" y2=\""
      << num(Y(v)) << "\" stroke=\"#dddddd\"/>\n";
    s << "<text x=\"" << ml - 6 << "\" y=\"" << num(Y(v) + 4) << "\" text-anchor=\"end\">" << num(v)
      << "</text>\n";
  }
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
    << escape(xlabel) << "</text>\n";
  s << "<text x=\"18\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << mt + ph / 2 << ")\">" << escape(ylabel) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& sr = series[k];
    const char* c = colors[k % 5];
    s << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < sr.x.size(); ++i) s << num(X(sr.x[i])) << ',' << num(Y(sr.y[i])) << ' ';
    s << "\"/>\n";
    for (std::size_t i = 0; i < sr.x.size(); ++i)
      s << "<circle cx=\"" << num(X(sr.x[i])) << "\" cy=\"" << num(Y(sr.y[i])) << "\" r=\"3\" fill=\""
        << c << "\"/>\n";
    const int ly = mt + 18 + 18 * static_cast<int>(k);
    s << "<line x1=\"" << ml + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + 36 << "\" y2=\""
      << ly - 4 << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << ml + 42 << "\" y=\"" << ly << "\">" << escape(sr.label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void render_bundle(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::ifstream mf(root / "manifest.json");
  if (!mf) throw Error("cli_io", "missing manifest.json in " + dir);
  const nlohmann::json manifest = nlohmann::json::parse(mf);

  for (const auto& p : manifest.at("points")) {
    if (!p.contains("files")) continue;
    const fs::path pd = root / p.at("directory").get<std::string>();
    const auto& files = p.at("files");
    auto has = [&](const std::string& f) {
      return std::find(files.begin(), files.end(), f) != files.end();
    };
    const std::string tag = num(p.at("U_P_pJ").get<double>()) + " pJ";
    for (const char* which : {"full", "first"}) {
      const std::string jname = std::string("J_") + which + "_abs.csv";
      if (has(jname)) {
        const AxesMatrix a = read_axes_csv((pd / jname).string());
        const Image img = heatmap(a.row_axis, a.col_axis, a.values, -3.0, 3.0, 301);
        write_png((pd / (std::string("J_") + which + ".png")).string(), img);
        write_text((pd / (std::string("J_") + which + ".svg")).string(),
                   heatmap_svg(img, -3.0, 3.0,
                               std::string("|J| ") + (which[1] == 'u' ? "full" : "first order") +
                                   ", " + tag,
                               "(k\u2081 \u2212 K_S) v_S / \u0393_S", "(k\u2082 \u2212 K_S) v_S / \u0393_S"));
      }
      const std::string gname = std::string("g2_") + which + ".csv";
      if (has(gname)) {
        const AxesMatrix a = read_axes_csv((pd / gname).string());
        const double t1 = a.col_axis(a.col_axis.size() - 1);
        const Image img = heatmap(a.row_axis, a.col_axis, a.values, a.col_axis(0), t1, 322);
        write_png((pd / (std::string("g2_") + which + ".png")).string(), img);
        write_text((pd / (std::string("g2_") + which + ".svg")).string(),
                   heatmap_svg(img, a.col_axis(0), t1,
                               std::string("normalized G2 ") +
                                   (which[1] == 'u' ? "full" : "first order") + ", " + tag,
                               "t\u2081 \u0393_S", "t\u2082 \u0393_S"));
      }
    }
  }

  const fs::path summary = root / "summary.json";
  if (!fs::exists(summary)) return;
  std::ifstream sf(summary);
  const nlohmann::json sj = nlohmann::json::parse(sf);
  const auto& recs = sj.at("records");
  if (recs.size() < 2) return;
  Series nf{"full", {}, {}}, n1{"first order", {}, {}}, kf{"full", {}, {}}, k1{"first order", {}, {}};
  for (const auto& r : recs) {
    const double u = r.at("U_P_pJ").get<double>();
    auto push = [&](Series& s, const char* key) {
      if (r.contains(key) && r.at(key).is_number()) {
        s.x.push_back(u);
        s.y.push_back(r.at(key).get<double>());
      }
    };
    push(nf, "n_full");
    push(n1, "n_first");
    push(kf, "K_full");
    push(k1, "K_first");
  }
  auto keep = [](std::vector<Series> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](const Series& s) { return s.x.empty(); }), v.end());
    return v;
  };
  write_text((root / "photon_number.svg").string(),
             curves_svg(keep({nf, n1}), "Photon number", "U_P (pJ)", "photons"));
  write_text((root / "schmidt_number.svg").string(),
             curves_svg(keep({kf, k1}), "Schmidt number", "U_P (pJ)", "K"));
}

}  // namespace ringsq
