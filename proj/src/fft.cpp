#include "kolmo/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace kolmo::fft {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dim, int points, Direction dir) {
    const auto key = std::tuple(dim, points, dir == Direction::forward);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<int> shape(static_cast<std::size_t>(dim), points);
    const std::size_t total = grid_size(dim, points);
    fftw_complex* scratch = fftw_alloc_complex(total);
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = fftw_plan_dft(dim, shape.data(), scratch, scratch, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw Error("fftw: failed to create plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<Complex> data, int dim, int points, Direction dir) {
  if (data.size() != grid_size(dim, points)) throw Error("fft: buffer size does not match grid");
  fftw_plan plan = cache().get(dim, points, dir);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

std::vector<std::size_t> mode_offsets(const ModeSet& modes, int points) {
  std::vector<std::size_t> offsets(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    std::size_t offset = 0;
    for (int k : modes.wave(i)) {
      int wrapped = k % points;
      if (wrapped < 0) wrapped += points;
      offset = offset * static_cast<std::size_t>(points) + static_cast<std::size_t>(wrapped);
    }
    offsets[i] = offset;
  }
  return offsets;
}

void scatter(const SpectralField& f, std::span<const std::size_t> offsets,
             std::span<Complex> grid) {
  std::fill(grid.begin(), grid.end(), Complex{});
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) grid[offsets[i]] += c[i];
}

SpectralField gather(std::span<const Complex> grid,
                     std::span<const std::size_t> offsets,
                     const std::shared_ptr<const ModeSet>& modes, double scale) {
  SpectralField out(modes);
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = grid[offsets[i]] * scale;
  out.set_real(false);
  return out;
}

}  // namespace kolmo::fft
