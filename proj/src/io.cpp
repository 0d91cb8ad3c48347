#include "vpfp/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vpfp/errors.hpp"

namespace vpfp {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // The C locale is the default for snprintf, but guard against a ','.
  for (char* p = buf; *p; ++p)
    if (*p == ',') *p = '.';
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void write_kernel_table(const std::string& path, const KernelTable& table) {
  auto out = open_out(path);
  out << "t,K,R\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << format_number(table.t[i]) << ',' << format_number(table.K[i]) << ',';
    if (i < table.R.size()) out << format_number(table.R[i]);
    out << '\n';
  }
}

void write_density_trace(const std::string& path, const DensityTrace& trace) {
  auto out = open_out(path);
  out << "t,k,re_rho,im_rho,abs_E\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    for (int k = -trace.Kmax; k <= trace.Kmax; ++k) {
      const std::size_t m = static_cast<std::size_t>(k + trace.Kmax);
      out << format_number(trace.times[i]) << ',' << k << ',' << format_number(trace.rho[i][m].real()) << ','
          << format_number(trace.rho[i][m].imag()) << ',' << format_number(std::abs(trace.efield[i][m])) << '\n';
    }
}

void write_snapshot(const std::string& path, const SpectralState& state) {
  auto out = open_out(path);
  const Grid& g = state.grid;
  out << "# vpfp snapshot\n"
      << "# d = " << g.d << "\n# Kmax = " << g.Kmax << "\n# Neta = " << g.Neta
      << "\n# eta_max = " << format_number(g.eta_max) << "\n# Nv = " << g.Nv << "\n# Nx = " << g.Nx
      << "\n# v_max = " << format_number(g.v_max) << "\n# nu = " << format_number(state.nu)
      << "\n# time = " << format_number(state.time) << '\n';
  out << "t,k,eta_index,re,im\n";
  for (int k = -g.Kmax; k <= g.Kmax; ++k)
    for (int j = 0; j < g.num_eta(); ++j)
      out << format_number(state.time) << ',' << k << ',' << j << ',' << format_number(state.at(k, j).real()) << ','
          << format_number(state.at(k, j).imag()) << '\n';
}

SpectralState read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::map<std::string, std::string> header;
  std::string line;
  while (std::getline(in, line) && !line.empty() && line[0] == '#') {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" #\t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    header[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  try {
    Grid g;
    g.d = std::stoi(header.at("d"));
    g.Kmax = std::stoi(header.at("Kmax"));
    g.Neta = std::stoi(header.at("Neta"));
    g.eta_max = std::stod(header.at("eta_max"));
    g.Nv = std::stoi(header.at("Nv"));
    g.Nx = std::stoi(header.at("Nx"));
    g.v_max = std::stod(header.at("v_max"));
    g.validate();
    SpectralState state(g, std::stod(header.at("nu")), std::stod(header.at("time")));
    // line holds the column header now.
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string cell[5];
      for (auto& c : cell) std::getline(ss, c, ',');
      const int k = std::stoi(cell[1]), j = std::stoi(cell[2]);
      if (std::abs(k) > g.Kmax || j < 0 || j >= g.num_eta()) throw ConfigError("snapshot index out of range");
      state.at(k, j) = cplx(std::stod(cell[3]), std::stod(cell[4]));
    }
    return state;
  } catch (const std::out_of_range&) {
    throw ConfigError("snapshot " + path + " has an incomplete header");
  } catch (const std::invalid_argument&) {
    throw ConfigError("snapshot " + path + " has a malformed entry");
  }
}

nlohmann::json to_json(const PenroseReport& r) {
  return {{"nu", r.nu},
          {"lambda_bar", r.lambda_bar},
          {"kappa", r.kappa_estimate},
          {"kappa_coarse", r.kappa_coarse},
          {"refinement_change", r.refinement_change},
          {"k_min", r.scan.k_min},
          {"k_max", r.scan.k_max},
          {"omega_min", r.scan.omega_min},
          {"omega_max", r.scan.omega_max},
          {"n_omega", r.scan.n_omega},
          {"argmin_k", r.argmin_k},
          {"argmin_z", {r.argmin_z.real(), r.argmin_z.imag()}},
          {"tail_constant", r.tail_constant},
          {"tail_bound", r.tail_bound}};
}

nlohmann::json to_json(const EchoRegimeReport& r) {
  return {{"nu", r.nu},   {"a", r.a},   {"eta", r.eta},           {"regime", to_string(r.regime)},
          {"k1", r.k1},   {"k2", r.k2}, {"log_sup", r.log_sup}, {"envelope1", r.envelope1},
          {"envelope2", r.envelope2}};
}

nlohmann::json to_json(const FitResult& f) {
  return {{"model", to_string(f.model)},
          {"rate", f.rate},
          {"rate_stderr", f.rate_stderr},
          {"prefactor", f.prefactor},
          {"log_prefactor_stderr", f.prefactor_stderr},
          {"window", {f.window_lo, f.window_hi}},
          {"points", f.points},
          {"residual_norm", f.residual_norm}};
}

nlohmann::json to_json(const KernelScalingResult& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points)
    pts.push_back({{"nu", p.nu}, {"M", p.M}, {"argmax_k", p.argmax_k}, {"argmax_t", p.argmax_t},
                   {"cap_change", p.cap_change}});
  return {{"s", r.s},
          {"exponent", r.exponent},
          {"points", pts},
          {"slope", r.slope},
          {"slope_stderr", r.slope_stderr},
          {"max_min_ratio", r.max_min_ratio},
          {"constant", r.constant},
          {"bound_holds", r.bound_holds}};
}

nlohmann::json to_json(const Grid& g) {
  return {{"d", g.d},   {"Kmax", g.Kmax}, {"Neta", g.Neta},   {"eta_max", g.eta_max},
          {"Nv", g.Nv}, {"Nx", g.Nx},     {"v_max", g.v_max}};
}

void write_json(const std::string& path, const nlohmann::json& value) {
  auto out = open_out(path);
  out << value.dump(2) << '\n';
}

}  // namespace vpfp
