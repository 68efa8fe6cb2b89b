#pragma once

// Binary snapshots and diagnostics tables.
//
// Snapshot layout, little-endian throughout:
//   "KOLM"  u16 version  u16 d  u32 n  f64 t
//   then for each of v_1..v_d, omega, b:
//     u64 count, count x (d x i32 k, f64 re, f64 im) in lexicographic k order

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kolmo/diagnostics.hpp"

namespace kolmo {

class SnapshotError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint16_t kSnapshotVersion = 1;

struct SnapshotOptions {
  std::optional<int> expected_dim;
  /// Accept coefficients that are not conjugate symmetric.
  bool allow_asymmetric = false;
};

std::vector<std::uint8_t> encode_snapshot(const SimState& state);
SimState decode_snapshot(const std::vector<std::uint8_t>& bytes, const SnapshotOptions& options = {});

void save_snapshot(const SimState& state, const std::filesystem::path& path);
SimState load_snapshot(const std::filesystem::path& path, const SnapshotOptions& options = {});

/// t, hs_v, hs_omega, hs_b, triple_sq, min_omega, max_omega, min_b, nu_min,
/// energy_lhs, energy_rhs_bound, div_residual, realness_residual
const std::vector<std::string>& diagnostics_columns();
std::string diagnostics_csv(const std::vector<EnergyReport>& reports);
void write_diagnostics_csv(const std::vector<EnergyReport>& reports, const std::filesystem::path& path);

/// Minimal reader for the numeric tables written here: header row plus one
/// row of numbers per line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Exclusive ownership of an output directory through a lock file that is
/// removed on destruction.  Throws Error when the lock is already held.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path lock_path_;
  int fd_ = -1;
};

}  // namespace kolmo
