#include "gsemm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace gsemm {

namespace {

double parse_double(const std::string& tok) {
  if (tok == "nan" || tok == "-nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double d = std::stod(tok, &used);
    if (used == tok.size()) return d;
  } catch (const std::out_of_range&) {
    // subnormal or overflowing text; strtod still gives the right value
    return std::strtod(tok.c_str(), nullptr);
  } catch (const std::exception&) {
  }
  throw IoError("not a number: '" + tok + "'");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw IoError("CSV row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  if (!out) throw IoError("CSV write failed");
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  {
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(parse_double(cell));
    if (row.size() != table.header.size()) throw IoError("CSV row width differs from header");
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable t;
  const Index k = traj.overlaps.empty() ? 0 : traj.overlaps.front().size();
  t.header.push_back("time");
  for (Index i = 1; i <= k; ++i) t.header.push_back("m_" + std::to_string(i));
  for (const char* name : {"E_total", "E_assoc", "E_seq", "E_c", "F", "G"}) t.header.push_back(name);

  const bool have_energy = traj.energies.size() == traj.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t s = 0; s < traj.size(); ++s) {
    std::vector<double> row{traj.times[s]};
    for (Index i = 0; i < k; ++i) row.push_back(traj.overlaps[s][i]);
    if (have_energy) {
      const EnergyReport& e = traj.energies[s];
      row.insert(row.end(), {e.total, e.e_assoc, e.e_seq, e.e_c, e.f_rate, e.g_rate});
    } else {
      row.insert(row.end(), 6, nan);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_double(m(i, j));
    out << '\n';
  }
  if (!out) throw IoError("matrix write failed");
}

Matrix read_matrix(std::istream& in) {
  Index rows = -1, cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) throw IoError("bad matrix header");
  Matrix m(rows, cols);
  std::string tok;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      if (!(in >> tok)) throw IoError("matrix ended early");
      m(i, j) = parse_double(tok);
    }
  return m;
}

void write_synapses(std::ostream& out, const SynapseState& syn) {
  write_matrix(out, syn.xi);
  write_matrix(out, syn.phi);
}

SynapseState read_synapses(std::istream& in) {
  SynapseState syn;
  syn.xi = read_matrix(in);
  syn.phi = read_matrix(in);
  if (syn.phi.rows() != syn.xi.cols() || syn.phi.cols() != syn.xi.cols())
    throw IoError("phi must be square with one row per xi column");
  return syn;
}

void save_synapses(const std::filesystem::path& path, const SynapseState& syn) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_synapses(out, syn);
}

SynapseState load_synapses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return read_synapses(in);
}

}  // namespace gsemm
