#include "atsp/instance.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "atsp/error.hpp"
#include "atsp/format.hpp"

namespace atsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::string_view kFormatName = "atsp-cost-matrix";
constexpr int kFormatVersion = 1;

void require_size(int n) {
  if (n < CostMatrix::kMinSize) {
    throw InvalidSize("cost matrix needs n >= 3, got n = " + std::to_string(n));
  }
}

template <typename Draw>
CostMatrix fill(int n, std::uint64_t seed, std::string id, Draw draw) {
  require_size(n);
  SplitMix64 rng(seed);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = i == j ? kInf : draw(rng);
    }
  }
  return CostMatrix(std::move(m), seed, std::move(id));
}

}  // namespace

CostMatrix::CostMatrix(Eigen::MatrixXd costs, std::uint64_t seed, std::string generator_id)
    : costs_(std::move(costs)), seed_(seed), generator_id_(std::move(generator_id)) {
  if (costs_.rows() != costs_.cols()) {
    throw InvalidSize("cost matrix must be square");
  }
  require_size(n());
  for (int i = 0; i < n(); ++i) {
    for (int j = 0; j < n(); ++j) {
      if (i == j) {
        costs_(i, j) = kInf;
        continue;
      }
      const double c = costs_(i, j);
      if (!(c >= 0.0 && c <= 1.0)) {
        throw InvalidRange("cost(" + std::to_string(i) + "," + std::to_string(j) +
                           ") = " + format_real(c) + " outside [0, 1]");
      }
    }
  }
}

CostMatrix CostMatrix::from_dense(Eigen::MatrixXd costs) {
  return CostMatrix(std::move(costs), 0, std::string(kExplicitId));
}

CostMatrix CostMatrix::constant(int n, double c) {
  require_size(n);
  return from_dense(Eigen::MatrixXd::Constant(n, n, c));
}

double CostMatrix::operator()(int i, int j) const {
  if (i < 0 || j < 0 || i >= n() || j >= n()) {
    throw InvalidEdge("edge (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
  }
  if (i == j) {
    throw InvalidEdge("diagonal edge (" + std::to_string(i) + "," + std::to_string(i) +
                      ") is excluded");
  }
  return costs_(i, j);
}

double CostMatrix::off_diagonal_mean() const {
  const Eigen::MatrixXd finite = costs_.array().isFinite().select(costs_, 0.0);
  return finite.sum() / (static_cast<double>(n()) * (n() - 1));
}

bool operator==(const CostMatrix& a, const CostMatrix& b) {
  if (a.n() != b.n() || a.seed_ != b.seed_ || a.generator_id_ != b.generator_id_) return false;
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      if (i != j && a.costs_(i, j) != b.costs_(i, j)) return false;
    }
  }
  return true;
}

CostMatrix generate_uniform(int n, std::uint64_t seed) {
  return fill(n, seed, std::string(CostMatrix::kUniformId),
              [](SplitMix64& rng) { return rng.next_unit(); });
}

std::string integer_generator_id(std::int64_t L) { return "splitmix64:int:" + std::to_string(L); }

CostMatrix generate_integer_scaled(int n, std::int64_t L, std::uint64_t seed) {
  if (L < 1) {
    throw InvalidRange("integer range L must be >= 1, got " + std::to_string(L));
  }
  const auto levels = static_cast<std::uint64_t>(L) + 1;
  const double scale = static_cast<double>(L);
  return fill(n, seed, integer_generator_id(L), [&](SplitMix64& rng) {
    return static_cast<double>(rng.next_below(levels)) / scale;
  });
}

CostMatrix regenerate(int n, std::uint64_t seed, std::string_view generator_id) {
  if (generator_id == CostMatrix::kUniformId) return generate_uniform(n, seed);
  constexpr std::string_view int_prefix = "splitmix64:int:";
  if (generator_id.starts_with(int_prefix)) {
    const std::string_view digits = generator_id.substr(int_prefix.size());
    std::int64_t L = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), L);
    if (ec == std::errc{} && ptr == digits.data() + digits.size()) {
      return generate_integer_scaled(n, L, seed);
    }
  }
  throw InvalidInput("cannot regenerate from generator id '" + std::string(generator_id) + "'");
}

std::string to_text(const CostMatrix& matrix) {
  nlohmann::ordered_json header;
  header["format"] = kFormatName;
  header["version"] = kFormatVersion;
  header["n"] = matrix.n();
  header["seed"] = matrix.seed();
  header["generator_id"] = matrix.generator_id();
  std::string out = header.dump() + "\n";
  for (int i = 0; i < matrix.n(); ++i) {
    for (int j = 0; j < matrix.n(); ++j) {
      if (j > 0) out += ',';
      out += i == j ? std::string("inf") : format_real(matrix(i, j));
    }
    out += '\n';
  }
  return out;
}

CostMatrix from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1, "header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("header is not JSON: ") + e.what(), 1, "header");
  }
  auto field = [&](const char* key) -> const nlohmann::json& {
    if (!header.contains(key)) throw ParseError("missing key", 1, key);
    return header.at(key);
  };
  if (field("format") != kFormatName) throw ParseError("unknown format", 1, "format");
  if (!field("n").is_number_integer()) throw ParseError("expected integer", 1, "n");
  if (!field("seed").is_number_unsigned() && !field("seed").is_number_integer()) {
    throw ParseError("expected unsigned integer", 1, "seed");
  }
  if (!field("generator_id").is_string()) throw ParseError("expected string", 1, "generator_id");

  const int n = field("n").get<int>();
  require_size(n);
  const auto seed = field("seed").get<std::uint64_t>();
  auto id = field("generator_id").get<std::string>();

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const int line_no = i + 2;
    if (!std::getline(in, line)) throw ParseError("missing row", line_no, "row");
    std::string_view rest = line;
    for (int j = 0; j < n; ++j) {
      const std::string name = "column " + std::to_string(j + 1);
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (j == n - 1)) {
        throw ParseError("expected " + std::to_string(n) + " entries", line_no, name);
      }
      const auto cell = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto value = parse_real(cell);
      if (!value) throw ParseError("not a number: '" + std::string(cell) + "'", line_no, name);
      if (i == j) {
        if (!std::isinf(*value)) throw ParseError("diagonal must be inf", line_no, name);
        m(i, j) = kInf;
        continue;
      }
      if (!(*value >= 0.0 && *value <= 1.0)) {
        throw InvalidRange("line " + std::to_string(line_no) + ", " + name + ": entry " +
                           format_real(*value) + " outside [0, 1]");
      }
      m(i, j) = *value;
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") throw ParseError("trailing content", n + 2, "row");
  }
  return CostMatrix(std::move(m), seed, std::move(id));
}

void save(const CostMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  out << to_text(matrix);
  if (!out) throw InvalidInput("write to '" + path.string() + "' failed");
}

CostMatrix load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

}  // namespace atsp
