#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "vpfp/echo.hpp"
#include "vpfp/fit.hpp"
#include "vpfp/kernel.hpp"
#include "vpfp/kernel_scaling.hpp"
#include "vpfp/penrose.hpp"
#include "vpfp/simulator.hpp"

namespace vpfp {

/// Decimal with 17 significant digits ('.' separator regardless of locale).
std::string format_number(double x);

/// Header row plus rows, LF line endings. Throws Error if the file cannot be written.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Columns t, K, R (R left empty when the table has no resolvent).
void write_kernel_table(const std::string& path, const KernelTable& table);

/// Columns t, k, re_rho, im_rho, abs_E.
void write_density_trace(const std::string& path, const DensityTrace& trace);

/// Lines starting with '#' describe the grid (key = value), followed by a
/// CSV body t, k, eta_index, re, im.
void write_snapshot(const std::string& path, const SpectralState& state);
SpectralState read_snapshot(const std::string& path);

nlohmann::json to_json(const PenroseReport& report);
nlohmann::json to_json(const EchoRegimeReport& report);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const KernelScalingResult& result);
nlohmann::json to_json(const Grid& grid);

void write_json(const std::string& path, const nlohmann::json& value);

}  // namespace vpfp
