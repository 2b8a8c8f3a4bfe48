#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ringsq/gaussian_dynamics.hpp"
#include "ringsq/types.hpp"

namespace ringsq {

/// Round-trip scientific notation.
std::string fmt(double v);

/// Matrix with its axes: first row is the column axis, first column the row axis.
void write_axes_csv(const std::string& path, const RVector& row_axis, const RVector& col_axis,
                    const RMatrix& m);

/// Complex matrix as paired re/im columns, first column the row axis.
void write_complex_csv(const std::string& path, const RVector& axis, const CMatrix& m);

void write_trajectory_csv(const std::string& path, const std::vector<TrajectorySample>& t);

struct AxesMatrix {
  RVector row_axis;
  RVector col_axis;
  RMatrix values;
};

AxesMatrix read_axes_csv(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
void write_text(const std::string& path, const std::string& text);

}  // namespace ringsq
