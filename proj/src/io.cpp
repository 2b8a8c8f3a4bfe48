#include "ringsq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ringsq {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cli_io", "cannot write " + path);
  return f;
}

}  // namespace

void write_axes_csv(const std::string& path, const RVector& row_axis, const RVector& col_axis,
                    const RMatrix& m) {
  auto f = open_out(path);
  f << "axis";
  for (Index j = 0; j < col_axis.size(); ++j) f << ',' << fmt(col_axis(j));
  f << '\n';
  for (Index i = 0; i < row_axis.size(); ++i) {
    f << fmt(row_axis(i));
    for (Index j = 0; j < m.cols(); ++j) f << ',' << fmt(m(i, j));
    f << '\n';
  }
}

void write_complex_csv(const std::string& path, const RVector& axis, const CMatrix& m) {
  auto f = open_out(path);
  f << "axis";
  for (Index j = 0; j < axis.size(); ++j) f << ",re_" << j << ",im_" << j;
  f << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    f << fmt(axis(i));
    for (Index j = 0; j < m.cols(); ++j) f << ',' << fmt(m(i, j).real()) << ',' << fmt(m(i, j).imag());
    f << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const std::vector<TrajectorySample>& t) {
  auto f = open_out(path);
  f << "t_s,frobW,pump_photons,Q,sympl_res,symm_res\n";
  for (const auto& s : t)
    f << fmt(s.t_s) << ',' << fmt(s.frobW) << ',' << fmt(s.pump_photons) << ',' << fmt(s.Q) << ','
      << fmt(s.sympl_res) << ',' << fmt(s.symm_res) << '\n';
}

AxesMatrix read_axes_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cli_io", "missing input CSV " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  std::vector<double> cols;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (header && first) {
        first = false;
        continue;
      }
      first = false;
      vals.push_back(std::stod(cell));
    }
    if (header) {
      cols = vals;
      header = false;
    } else {
      rows.push_back(vals);
    }
  }
  AxesMatrix out;
  out.col_axis = Eigen::Map<RVector>(cols.data(), static_cast<Index>(cols.size()));
  out.row_axis.resize(static_cast<Index>(rows.size()));
  out.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols.size() + 1) throw Error("cli_io", "ragged CSV " + path);
    out.row_axis(static_cast<Index>(i)) = rows[i][0];
    for (std::size_t j = 0; j < cols.size(); ++j)
      out.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j + 1];
  }
  return out;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

void write_text(const std::string& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
}

}  // namespace ringsq
