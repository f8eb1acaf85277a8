#include "tpra/abstraction.hpp"

#include <algorithm>
#include <atomic>
#include <new>
#include <string>
#include <thread>

namespace tpra {

AbstractSystem::AbstractSystem(Grid grid, std::size_t input_count,
                               std::vector<std::uint64_t> offsets, std::vector<CellId> successors,
                               std::vector<std::uint8_t> unsafe)
    : grid_(std::move(grid)),
      input_count_(input_count),
      offsets_(std::move(offsets)),
      successors_(std::move(successors)),
      unsafe_(std::move(unsafe)) {
  const std::size_t pairs = grid_.state_count() * input_count_;
  if (input_count_ == 0) throw std::invalid_argument("AbstractSystem: no inputs");
  if (offsets_.size() != pairs + 1 || unsafe_.size() != pairs) {
    throw std::invalid_argument("AbstractSystem: offset/flag table size mismatch");
  }
  if (offsets_.front() != 0 || offsets_.back() != successors_.size()) {
    throw std::invalid_argument("AbstractSystem: offsets do not span the successor array");
  }
  for (std::size_t p = 0; p < pairs; ++p) {
    if (offsets_[p + 1] <= offsets_[p]) {
      throw std::invalid_argument("AbstractSystem: empty successor set at pair " +
                                  std::to_string(p));
    }
  }
}

TransitionGraph AbstractSystem::graph() const noexcept {
  return TransitionGraph{grid_.state_count(), input_count_, offsets_, successors_};
}

bool AbstractSystem::is_unsafe(CellId cell, InputId input) const {
  return unsafe_.at(static_cast<std::size_t>(cell) * input_count_ + input) != 0;
}

std::uint64_t AbstractSystem::unsafe_count() const noexcept {
  return static_cast<std::uint64_t>(std::count(unsafe_.begin(), unsafe_.end(), std::uint8_t{1}));
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  threads = std::max(1u, threads);
  if (threads == 1) {
    fn(0, n);
    return;
  }
  const std::size_t chunk = std::max<std::size_t>(1, n / (static_cast<std::size_t>(threads) * 64));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      for (;;) {
        if (failed.load(std::memory_order_relaxed)) return;
        const std::size_t begin = next.fetch_add(chunk);
        if (begin >= n) return;
        fn(begin, std::min(n, begin + chunk));
      }
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

bool abstract_successors(const SampledSystem& sys, const Grid& grid, CellId cell,
                         std::span<const double> input, std::vector<CellId>& out) {
  out.clear();
  if (cell >= grid.cell_count()) {
    out.push_back(grid.out_cell());
    return false;
  }
  ReachBox rb;
  try {
    rb = reach_box(sys, grid.cell_box(cell), input);
  } catch (const IntegrationFailure&) {
    out.push_back(grid.out_cell());
    return false;
  }
  const std::size_t n = grid.dim();
  const auto& dom = grid.domain();
  std::vector<std::vector<std::uint32_t>> slabs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rb.center[i] - rb.radius[i];
    const double b = rb.center[i] + rb.radius[i];
    if (grid.is_periodic(i)) {
      slabs[i] = grid.periodic_range(i, a, b);
    } else {
      if (a < dom.lo(i) || b >= dom.hi(i)) {
        out.push_back(grid.out_cell());
        return false;
      }
      const auto [first, count] = grid.closed_range(i, a, b);
      slabs[i].resize(count);
      for (std::uint32_t k = 0; k < count; ++k) slabs[i][k] = first + k;
    }
  }
  // Cartesian product of the per-axis slab lists.
  std::vector<std::size_t> idx(n, 0);
  std::vector<std::uint32_t> coords(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) coords[i] = slabs[i][idx[i]];
    out.push_back(grid.cell_at(coords));
    std::size_t i = 0;
    while (i < n && ++idx[i] == slabs[i].size()) {
      idx[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return true;
}

AbstractSystem compute_transitions(const SampledSystem& sys, const Grid& grid,
                                   const AbstractionOptions& options) {
  sys.validate();
  if (grid.dim() != sys.dim) throw DimensionError("compute_transitions: grid/system dimension mismatch");
  const std::size_t inputs = sys.inputs.size();
  const std::size_t cells = grid.cell_count();
  const std::size_t pairs = grid.state_count() * inputs;

  std::vector<std::uint64_t> offsets(pairs + 1, 0);
  std::vector<std::uint8_t> unsafe(pairs, 0);
  std::atomic<std::size_t> done{0};

  // Pass 1: successor counts.
  parallel_for(cells, options.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<CellId> scratch;
    for (std::size_t c = begin; c < end; ++c) {
      for (std::size_t u = 0; u < inputs; ++u) {
        const bool safe = abstract_successors(sys, grid, static_cast<CellId>(c), sys.inputs[u], scratch);
        offsets[c * inputs + u + 1] = scratch.size();
        unsafe[c * inputs + u] = safe ? 0 : 1;
      }
      if (options.progress) options.progress(done.fetch_add(1) + 1, 2 * cells);
    }
  });
  for (std::size_t u = 0; u < inputs; ++u) {
    offsets[cells * inputs + u + 1] = 1;
    unsafe[cells * inputs + u] = 1;
  }
  for (std::size_t p = 0; p < pairs; ++p) {
    offsets[p + 1] += offsets[p];
    if (offsets[p + 1] > options.max_transitions) {
      throw CapacityError("compute_transitions: more than " +
                          std::to_string(options.max_transitions) +
                          " transitions; limit reached at cell " + std::to_string(p / inputs) +
                          ", input " + std::to_string(p % inputs));
    }
  }

  std::vector<CellId> successors;
  try {
    successors.resize(offsets.back());
  } catch (const std::bad_alloc&) {
    throw CapacityError("compute_transitions: cannot allocate " + std::to_string(offsets.back()) +
                        " successor entries for " + std::to_string(cells) + " cells x " +
                        std::to_string(inputs) + " inputs");
  }

  // Pass 2: fill.
  parallel_for(cells, options.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<CellId> scratch;
    for (std::size_t c = begin; c < end; ++c) {
      for (std::size_t u = 0; u < inputs; ++u) {
        const std::size_t p = c * inputs + u;
        abstract_successors(sys, grid, static_cast<CellId>(c), sys.inputs[u], scratch);
        if (scratch.size() != offsets[p + 1] - offsets[p]) {
          throw std::logic_error("compute_transitions: non-deterministic successor count at cell " +
                                 std::to_string(c));
        }
        std::copy(scratch.begin(), scratch.end(), successors.begin() + static_cast<std::ptrdiff_t>(offsets[p]));
      }
      if (options.progress) options.progress(done.fetch_add(1) + 1, 2 * cells);
    }
  });
  for (std::size_t u = 0; u < inputs; ++u) {
    successors[offsets[cells * inputs + u]] = grid.out_cell();
  }
  return AbstractSystem(grid, inputs, std::move(offsets), std::move(successors), std::move(unsafe));
}

}  // namespace tpra
