#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mdbt/objectives.hpp"
#include "mdbt/vec.hpp"

namespace mdbt {

enum class Task { regression, classification };

struct Dataset {
  CsrMatrix X;
  Vec y;  // classification labels stored as {0,1}
  Task task = Task::regression;
  std::string name;
};

/// Parses LIBSVM text: `label idx:val idx:val ...` with 1-based, strictly
/// ascending indices. Blank lines and lines starting with '#' are skipped.
/// Classification labels -1/+1 map to 0/1; 0/1 pass through.
/// Duplicate or non-ascending indices and index 0 are ParseErrors.
Dataset parse_libsvm(std::istream& in, Task task, std::string name = "");
Dataset parse_libsvm_file(const std::string& path, Task task);

std::string to_libsvm(const Dataset& ds);

/// Returns a copy with a leading all-ones feature column; existing columns
/// shift right by one. Applying it twice stacks two ones-columns.
Dataset prepend_bias(const Dataset& ds);

struct InitSpec {
  enum class Kind { bias, gaussian };
  Kind kind = Kind::bias;
  std::uint64_t seed = 0;  // gaussian only
};

/// bias: w = 0 except w[0] = mean(y) (regression) or log(ybar/(1-ybar))
/// (classification); requires the bias column. gaussian: w ~ N(0, I).
Vec initialize(const Dataset& ds, const InitSpec& spec);

/// xoshiro256++ with splitmix64 seeding; satisfies UniformRandomBitGenerator.
/// The stream is deterministic within a build (the library's only
/// reproducibility contract for random draws).
struct Xoshiro256pp {
  using result_type = std::uint64_t;
  explicit Xoshiro256pp(std::uint64_t seed);
  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }

 private:
  std::uint64_t s_[4];
};

Vec gaussian_vector(std::size_t n, std::uint64_t seed);
double uniform_in(Xoshiro256pp& rng, double lo, double hi);

struct SynthSpec {
  enum class Kind { diagonal, rotated };
  Kind kind = Kind::diagonal;
  std::size_t d = 2;
  double cond = 1.0;
  std::uint64_t seed = 0;  // rotated only
};

/// Quadratic test problem with spectrum logspaced between 1 and cond
/// (lambda_min = 1, lambda_max = cond). `rotated` conjugates the diagonal
/// with a seeded random rotation.
QuadraticObjective synth_quadratic(const SynthSpec& spec);

}  // namespace mdbt
