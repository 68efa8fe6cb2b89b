#include "kolmo/io.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "kolmo/config.hpp"

namespace kolmo {

namespace {

class Writer {
 public:
  template <typename T>
  void put(T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
    U bits;
    std::memcpy(&bits, &value, sizeof bits);
    for (std::size_t i = 0; i < sizeof bits; ++i) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }

  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* what) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
    if (pos_ > bytes_.size() || bytes_.size() - pos_ < sizeof(U)) {
      throw SnapshotError("snapshot truncated at offset " + std::to_string(pos_) + " while reading " + what +
                          " (file has " + std::to_string(bytes_.size()) + " bytes)");
    }
    U bits = 0;
    for (std::size_t i = 0; i < sizeof bits; ++i) bits |= static_cast<U>(static_cast<U>(bytes_[pos_ + i]) << (8 * i));
    pos_ += sizeof bits;
    T value;
    std::memcpy(&value, &bits, sizeof value);
    return value;
  }

  void skip(std::size_t n) { pos_ += n; }
  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'K', 'O', 'L', 'M'};

void write_field(Writer& w, const SpectralField& f) {
  const ModeSet& modes = f.modes();
  w.put<std::uint64_t>(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (int kj : modes.wave(i)) w.put<std::int32_t>(kj);
    w.put<double>(f[i].real());
    w.put<double>(f[i].imag());
  }
}

SpectralField read_field(Reader& r, int dim, int cutoff, const char* name) {
  SpectralField f(dim, cutoff);
  const ModeSet& modes = f.modes();
  const std::size_t at = r.offset();
  const auto count = r.get<std::uint64_t>("coefficient count");
  if (count != modes.size()) {
    throw SnapshotError(std::string("snapshot field ") + name + " at offset " + std::to_string(at) + " has " +
                        std::to_string(count) + " coefficients, expected " + std::to_string(modes.size()) +
                        " for d = " + std::to_string(dim) + ", n = " + std::to_string(cutoff));
  }
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::size_t rec = r.offset();
    const auto k = modes.wave(i);
    for (int j = 0; j < dim; ++j) {
      const auto kj = r.get<std::int32_t>("wave vector");
      if (kj != k[static_cast<std::size_t>(j)]) {
        throw SnapshotError(std::string("snapshot field ") + name + ": record at offset " + std::to_string(rec) +
                            " is out of lexicographic order");
      }
    }
    const double re = r.get<double>("coefficient");
    const double im = r.get<double>("coefficient");
    f[i] = Complex(re, im);
  }
  f.set_real(realness_residual(f) == 0.0);
  return f;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open snapshot " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const SimState& state) {
  state.check_shapes();
  Writer w;
  for (char c : kMagic) w.bytes.push_back(static_cast<std::uint8_t>(c));
  w.put<std::uint16_t>(kSnapshotVersion);
  w.put<std::uint16_t>(static_cast<std::uint16_t>(state.dim()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(state.cutoff()));
  w.put<double>(state.t);
  for (const auto& c : state.v.components) write_field(w, c);
  write_field(w, state.omega);
  write_field(w, state.b);
  return std::move(w.bytes);
}

SimState decode_snapshot(const std::vector<std::uint8_t>& bytes, const SnapshotOptions& options) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (i >= bytes.size()) throw SnapshotError("snapshot truncated at offset " + std::to_string(i) + " inside magic");
    if (bytes[i] != static_cast<std::uint8_t>(kMagic[i])) {
      throw SnapshotError("bad snapshot magic at offset " + std::to_string(i) + " (expected \"KOLM\")");
    }
  }
  Reader r(bytes);
  r.skip(4);
  const auto version = r.get<std::uint16_t>("version");
  if (version != kSnapshotVersion) {
    throw SnapshotError("unsupported snapshot version " + std::to_string(version) + " at offset 4");
  }
  const int dim = r.get<std::uint16_t>("dimension");
  const auto cutoff = r.get<std::uint32_t>("cutoff");
  if (dim < 2 || dim > 6) throw SnapshotError("snapshot dimension " + std::to_string(dim) + " at offset 6 unsupported");
  if (cutoff < 1 || cutoff > 4096) throw SnapshotError("snapshot cutoff " + std::to_string(cutoff) + " at offset 8 invalid");
  if (options.expected_dim && *options.expected_dim != dim) {
    throw DimensionMismatch("snapshot has d = " + std::to_string(dim) + " but the run uses d = " +
                            std::to_string(*options.expected_dim));
  }
  SimState st;
  st.t = r.get<double>("time");
  const int n = static_cast<int>(cutoff);
  std::vector<SpectralField> comps;
  for (int j = 0; j < dim; ++j) comps.push_back(read_field(r, dim, n, ("v" + std::to_string(j + 1)).c_str()));
  st.v = VectorField(std::move(comps));
  st.omega = read_field(r, dim, n, "omega");
  st.b = read_field(r, dim, n, "b");
  if (r.remaining() != 0) {
    throw SnapshotError("snapshot has " + std::to_string(r.remaining()) + " trailing bytes at offset " +
                        std::to_string(r.offset()));
  }
  if (!options.allow_asymmetric) {
    const double defect = st.realness_residual();
    if (defect > 1e-12) {
      throw SnapshotError("snapshot coefficients are not conjugate symmetric (residual " + format_double(defect) + ")");
    }
  }
  return st;
}

void save_snapshot(const SimState& state, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(state);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write snapshot " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for snapshot " + path.string());
}

SimState load_snapshot(const std::filesystem::path& path, const SnapshotOptions& options) {
  try {
    return decode_snapshot(read_file(path), options);
  } catch (const DimensionMismatch& e) {
    throw DimensionMismatch(path.string() + ": " + e.what());
  } catch (const SnapshotError& e) {
    throw SnapshotError(path.string() + ": " + e.what());
  }
}

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {
      "t",     "hs_v",       "hs_omega",         "hs_b",         "triple_sq",    "min_omega",        "max_omega",
      "min_b", "nu_min",     "energy_lhs",       "energy_rhs_bound", "div_residual", "realness_residual"};
  return cols;
}

std::string diagnostics_csv(const std::vector<EnergyReport>& reports) {
  std::ostringstream out;
  const auto& cols = diagnostics_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : reports) {
    const double row[] = {r.t,     r.hs_v,   r.hs_omega, r.hs_b,      r.triple_sq,    r.min_omega,        r.max_omega,
                          r.min_b, r.nu_min, r.lhs,      r.rhs_bound, r.div_residual, r.realness_residual};
    for (std::size_t i = 0; i < std::size(row); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  return out.str();
}

void write_diagnostics_csv(const std::vector<EnergyReport>& reports, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << diagnostics_csv(reports);
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<double> CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] != name) continue;
    std::vector<double> out;
    for (const auto& row : rows) out.push_back(row.at(j));
    return out;
  }
  throw Error("csv: no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      table.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != table.header.size()) throw Error("csv: row width differs from header");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c, "csv cell"));
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

DirectoryLock::DirectoryLock(const std::filesystem::path& dir) : lock_path_(dir / ".kolmo.lock") {
  std::filesystem::create_directories(dir);
  fd_ = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd_ < 0) {
    throw Error("output directory " + dir.string() + " is locked by another run (" + lock_path_.string() + ")");
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] const auto n = ::write(fd_, pid.data(), pid.size());
}

DirectoryLock::~DirectoryLock() {
  if (fd_ >= 0) {
    ::close(fd_);
    std::error_code ec;
    std::filesystem::remove(lock_path_, ec);
  }
}

}  // namespace kolmo
