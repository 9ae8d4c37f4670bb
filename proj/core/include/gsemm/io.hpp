#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gsemm/integrate.hpp"
#include "gsemm/types.hpp"

namespace gsemm {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, enough to round-trip any double. NaN prints "nan".
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);
CsvTable read_csv(std::istream& in);

/// time, m_1..m_K, E_total, E_assoc, E_seq, E_c, F, G. Energy columns are NaN
/// when the trajectory carries no energy reports.
CsvTable trajectory_table(const Trajectory& traj);

/// "rows cols" line, then one row per line.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);

/// Xi block followed by Phi block.
void write_synapses(std::ostream& out, const SynapseState& syn);
SynapseState read_synapses(std::istream& in);

void save_synapses(const std::filesystem::path& path, const SynapseState& syn);
SynapseState load_synapses(const std::filesystem::path& path);

}  // namespace gsemm
