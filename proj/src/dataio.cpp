#include "mdbt/dataio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>

#include "mdbt/errors.hpp"
#include "mdbt/linalg.hpp"

namespace mdbt {

namespace {

double parse_double_token(const std::string& tok, std::size_t line_no) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("unparsable number '" + tok + "'", line_no);
  }
  if (pos != tok.size()) throw ParseError("trailing characters in '" + tok + "'", line_no);
  return v;
}

double map_class_label(double raw, std::size_t line_no) {
  if (raw == -1.0 || raw == 0.0) return 0.0;
  if (raw == 1.0) return 1.0;
  throw ParseError("classification label must be -1, 0 or +1", line_no);
}

}  // namespace

Dataset parse_libsvm(std::istream& in, Task task, std::string name) {
  Dataset ds;
  ds.task = task;
  ds.name = std::move(name);
  ds.X.row_offsets.push_back(0);
  std::size_t max_col = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;

    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    const double raw_label = parse_double_token(tok, line_no);
    ds.y.push_back(task == Task::classification ? map_class_label(raw_label, line_no)
                                                : raw_label);

    long long prev_idx = 0;
    while (ls >> tok) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError("expected idx:val, got '" + tok + "'", line_no);
      long long idx = 0;
      try {
        std::size_t pos = 0;
        idx = std::stoll(tok.substr(0, colon), &pos);
        if (pos != colon) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("unparsable index in '" + tok + "'", line_no);
      }
      if (idx == 0) throw ParseError("indices are 1-based; got 0", line_no);
      if (idx < 0) throw ParseError("negative feature index", line_no);
      if (idx == prev_idx) throw ParseError("duplicate feature index", line_no);
      if (idx < prev_idx) throw ParseError("feature indices must be ascending", line_no);
      prev_idx = idx;
      const double val = parse_double_token(tok.substr(colon + 1), line_no);
      ds.X.col_indices.push_back(static_cast<std::uint32_t>(idx - 1));
      ds.X.values.push_back(val);
      max_col = std::max(max_col, static_cast<std::size_t>(idx));
    }
    ds.X.row_offsets.push_back(ds.X.values.size());
  }

  ds.X.rows = ds.y.size();
  ds.X.cols = max_col;
  ds.X.validate();
  return ds;
}

Dataset parse_libsvm_file(const std::string& path, Task task) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string name = path;
  const std::size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  return parse_libsvm(in, task, name);
}

std::string to_libsvm(const Dataset& ds) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < ds.X.rows; ++i) {
    if (ds.task == Task::classification) {
      out += ds.y[i] == 1.0 ? "1" : "-1";
    } else {
      std::snprintf(buf, sizeof buf, "%.17g", ds.y[i]);
      out += buf;
    }
    for (std::size_t k = ds.X.row_offsets[i]; k < ds.X.row_offsets[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, " %u:%.17g", ds.X.col_indices[k] + 1,
                    ds.X.values[k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Dataset prepend_bias(const Dataset& ds) {
  Dataset out;
  out.y = ds.y;
  out.task = ds.task;
  out.name = ds.name;
  out.X.rows = ds.X.rows;
  out.X.cols = ds.X.cols + 1;
  out.X.row_offsets.reserve(ds.X.rows + 1);
  out.X.row_offsets.push_back(0);
  out.X.col_indices.reserve(ds.X.nnz() + ds.X.rows);
  out.X.values.reserve(ds.X.nnz() + ds.X.rows);
  for (std::size_t i = 0; i < ds.X.rows; ++i) {
    out.X.col_indices.push_back(0);
    out.X.values.push_back(1.0);
    for (std::size_t k = ds.X.row_offsets[i]; k < ds.X.row_offsets[i + 1]; ++k) {
      out.X.col_indices.push_back(ds.X.col_indices[k] + 1);
      out.X.values.push_back(ds.X.values[k]);
    }
    out.X.row_offsets.push_back(out.X.values.size());
  }
  return out;
}

Vec initialize(const Dataset& ds, const InitSpec& spec) {
  const std::size_t d = ds.X.cols;
  if (spec.kind == InitSpec::Kind::gaussian) return gaussian_vector(d, spec.seed);

  // bias init needs column 0 to be the all-ones bias column
  for (std::size_t i = 0; i < ds.X.rows; ++i) {
    const std::size_t k = ds.X.row_offsets[i];
    if (k == ds.X.row_offsets[i + 1] || ds.X.col_indices[k] != 0 ||
        ds.X.values[k] != 1.0)
      throw std::invalid_argument("bias init requires a leading ones column");
  }
  double ybar = 0.0;
  for (double y : ds.y) ybar += y;
  ybar /= static_cast<double>(ds.y.size());

  Vec w(d, 0.0);
  if (ds.task == Task::regression) {
    w[0] = ybar;
  } else {
    if (ybar == 0.0 || ybar == 1.0)
      throw DegenerateLabels("bias init undefined: labels are all identical");
    w[0] = std::log(ybar / (1.0 - ybar));
  }
  return w;
}

// ------------------------------------------------------------------ random

namespace {
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Xoshiro256pp::operator()() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

Vec gaussian_vector(std::size_t n, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

double uniform_in(Xoshiro256pp& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

// --------------------------------------------------------------- synthetic

QuadraticObjective synth_quadratic(const SynthSpec& spec) {
  if (spec.cond < 1.0) throw std::invalid_argument("synth: cond must be >= 1");
  if (spec.d < 1) throw std::invalid_argument("synth: d must be >= 1");
  const std::size_t d = spec.d;

  Vec eig(d);
  if (d == 1) {
    eig[0] = spec.cond;
  } else {
    for (std::size_t i = 0; i < d; ++i)
      eig[i] = std::pow(spec.cond, static_cast<double>(i) / static_cast<double>(d - 1));
  }

  if (spec.kind == SynthSpec::Kind::diagonal) {
    CsrMatrix A;
    A.rows = A.cols = d;
    A.row_offsets.resize(d + 1);
    A.col_indices.resize(d);
    A.values = eig;
    for (std::size_t i = 0; i <= d; ++i) A.row_offsets[i] = i;
    for (std::size_t i = 0; i < d; ++i) A.col_indices[i] = static_cast<std::uint32_t>(i);
    return QuadraticObjective(std::move(A));
  }

  const linalg::DenseMatrix q = linalg::random_rotation(d, spec.seed);
  // A = Q^T D Q, symmetrized against rounding.
  std::vector<double> a(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += q.at(k, i) * eig[k] * q.at(k, j);
      a[i * d + j] = s;
    }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double m = 0.5 * (a[i * d + j] + a[j * d + i]);
      a[i * d + j] = a[j * d + i] = m;
    }
  return QuadraticObjective(CsrMatrix::from_dense(d, d, a.data()));
}

}  // namespace mdbt
