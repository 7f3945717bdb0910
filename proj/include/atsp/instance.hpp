#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace atsp {

// Directed edge (tail, head), equivalently the bipartite pair (a_tail, b_head).
// Vertices are 0-based. Ordering is lexicographic, which is the tie-break
// order used throughout the library.
struct Edge {
  int tail = 0;
  int head = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// SplitMix64 stream. Each call to next() advances the state by the golden
// gamma and returns the mixed output; doubles take the top 53 bits.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., bound - 1} via the high word of a 128-bit product.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

// n x n cost matrix of a random ATSP instance. The diagonal is the excluded
// edge set D: it is stored as +inf and never returned by operator().
class CostMatrix {
 public:
  static constexpr std::string_view kUniformId = "splitmix64:uniform01";
  static constexpr std::string_view kExplicitId = "explicit";
  static constexpr int kMinSize = 3;

  // Validates n >= 3 and every off-diagonal entry in [0, 1]. Diagonal values
  // in `costs` are ignored and replaced by +inf.
  CostMatrix(Eigen::MatrixXd costs, std::uint64_t seed, std::string generator_id);

  // Hand-written instance, generator_id "explicit".
  static CostMatrix from_dense(Eigen::MatrixXd costs);
  // Every off-diagonal entry equal to c.
  static CostMatrix constant(int n, double c);

  int n() const { return static_cast<int>(costs_.rows()); }
  std::uint64_t seed() const { return seed_; }
  const std::string& generator_id() const { return generator_id_; }

  // Throws InvalidEdge for i == j or out-of-range indices.
  double operator()(int i, int j) const;
  double operator()(Edge e) const { return (*this)(e.tail, e.head); }
  static bool excluded(int i, int j) { return i == j; }

  // Dense view with +inf on the diagonal.
  const Eigen::MatrixXd& dense() const { return costs_; }

  double off_diagonal_mean() const;

  friend bool operator==(const CostMatrix& a, const CostMatrix& b);

 private:
  Eigen::MatrixXd costs_;
  std::uint64_t seed_;
  std::string generator_id_;
};

// Off-diagonal entries i.i.d. U[0,1), drawn from SplitMix64(seed) in row-major
// order, skipping the diagonal.
CostMatrix generate_uniform(int n, std::uint64_t seed);

// Entries k / L with k uniform on {0, ..., L}; same stream order as above.
CostMatrix generate_integer_scaled(int n, std::int64_t L, std::uint64_t seed);

// Rebuilds a matrix from its self-describing metadata. Throws InvalidInput
// for an unknown or non-reproducible generator id.
CostMatrix regenerate(int n, std::uint64_t seed, std::string_view generator_id);

std::string integer_generator_id(std::int64_t L);

// On-disk format: one JSON header line {"format","version","n","seed",
// "generator_id"} followed by n CSV rows, "inf" on the diagonal, values with
// 17 significant digits.
void save(const CostMatrix& matrix, const std::filesystem::path& path);
CostMatrix load(const std::filesystem::path& path);

std::string to_text(const CostMatrix& matrix);
CostMatrix from_text(std::string_view text);

}  // namespace atsp
