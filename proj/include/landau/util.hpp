#ifndef LANDAU_UTIL_HPP
#define LANDAU_UTIL_HPP

#include <atomic>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace landau {

using cplx = std::complex<double>;

constexpr double pi = 3.14159265358979323846;

// Wrap an angle increment into (-pi, pi].
inline double wrap_angle(double a) {
    while (a > pi) a -= 2.0 * pi;
    while (a <= -pi) a += 2.0 * pi;
    return a;
}

// Evaluate fn(i) for i in [0, n) on up to `threads` workers. Results are
// written by index, so the output order is deterministic regardless of
// scheduling. threads <= 1 runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Worker count used by the evaluation layers; set once by the CLI / tests.
int global_threads();
void set_global_threads(int n);

// FNV-1a, used for content-addressed caching and profile hashes.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Doubles serialized with 17 significant digits (lossless round-trip).
std::string fmt_double(double v);

}  // namespace landau

#endif
