#ifndef QDL_CORE_HPP
#define QDL_CORE_HPP

#include <atomic>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qdl {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// exp(i*pi*w)
inline cplx expi_pi(cplx w) { return std::exp(kI * kPi * w); }

inline double abs2(cplx z) { return std::norm(z); }

// ---------------------------------------------------------------------------
// Error types shared across the library.

struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EndpointMassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NearSingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LadderDivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegreeOverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Deterministic parallel map: results land in a pre-sized vector by index,
// so ordering never depends on thread scheduling.
template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& fn,
                            unsigned max_threads = 0) {
  std::vector<R> out(n);
  unsigned hw = max_threads ? max_threads : std::thread::hardware_concurrency();
  if (hw < 2 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  unsigned nt = std::min<unsigned>(hw, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nt);
  std::atomic<std::size_t> next{0};
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace qdl

#endif  // QDL_CORE_HPP
