#include "qadv/boolean_function.hpp"

#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace qadv {

BooleanFunction::BooleanFunction(int n, std::vector<std::string> domain,
                                 std::vector<int> values)
    : n_(n), domain_(std::move(domain)), values_(std::move(values)) {
  if (domain_.size() != values_.size())
    throw std::invalid_argument("boolean function: domain/value size mismatch");
  if (domain_.empty()) throw std::invalid_argument("boolean function: empty domain");
  index_.reserve(domain_.size());
  for (int i = 0; i < static_cast<int>(domain_.size()); ++i) {
    const std::string& x = domain_[i];
    if (static_cast<int>(x.size()) != n_)
      throw std::invalid_argument("boolean function: input '" + x +
                               "' does not have length " + std::to_string(n_));
    for (char ch : x)
      if (ch != '0' && ch != '1')
        throw std::invalid_argument("boolean function: non-binary character in '" + x + "'");
    if (values_[i] != 0 && values_[i] != 1)
      throw std::invalid_argument("boolean function: label outside {0,1} for '" + x + "'");
    if (!index_.emplace(x, i).second)
      throw std::invalid_argument("boolean function: duplicate input '" + x + "'");
  }
}

int BooleanFunction::index_of(const std::string& x) const {
  auto it = index_.find(x);
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> BooleanFunction::one_inputs() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (values_[i] == 1) out.push_back(i);
  return out;
}

std::vector<int> BooleanFunction::zero_inputs() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (values_[i] == 0) out.push_back(i);
  return out;
}

bool BooleanFunction::is_constant() const {
  for (int v : values_)
    if (v != values_[0]) return false;
  return true;
}

BooleanFunction parse_function(const std::string& text) {
  std::vector<std::string> domain;
  std::vector<int> values;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    std::string bits, label, extra;
    if (!(fields >> bits >> label) || (fields >> extra))
      throw std::runtime_error("function file: malformed line " + std::to_string(lineno));
    if (label != "0" && label != "1")
      throw std::runtime_error("function file: label outside {0,1} on line " +
                               std::to_string(lineno));
    domain.push_back(bits);
    values.push_back(label == "1" ? 1 : 0);
  }
  if (domain.empty()) throw std::runtime_error("function file: empty domain");
  int n = static_cast<int>(domain.front().size());
  for (const std::string& x : domain)
    if (static_cast<int>(x.size()) != n)
      throw std::runtime_error("function file: ragged input lengths");
  try {
    return BooleanFunction(n, std::move(domain), std::move(values));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("function file: ") + e.what());
  }
}

std::string serialize_function(const BooleanFunction& f) {
  std::ostringstream out;
  for (int i = 0; i < f.size(); ++i) out << f.input(i) << ' ' << f.value(i) << '\n';
  return out.str();
}

BooleanFunction random_function(int n, int domain_size, std::uint64_t seed) {
  if (n < 1 || n > 62) throw std::invalid_argument("random_function: n out of range");
  if (domain_size < 2 || (n < 62 && static_cast<std::uint64_t>(domain_size) > (1ull << n)))
    throw std::invalid_argument("random_function: domain_size out of range");

  std::mt19937_64 rng(seed);
  const std::uint64_t span = 1ull << n;

  // Distinct strings by rejection, keeping draw order as the canonical order.
  std::vector<std::string> domain;
  std::unordered_set<std::uint64_t> seen;
  while (static_cast<int>(domain.size()) < domain_size) {
    // Draw uniformly from [0, 2^n) by masking, so the result depends only on
    // the engine's raw bit stream.
    std::uint64_t word = rng() & (span - 1);
    if (!seen.insert(word).second) continue;
    std::string bits(n, '0');
    for (int j = 0; j < n; ++j)
      if (word >> (n - 1 - j) & 1) bits[j] = '1';
    domain.push_back(std::move(bits));
  }

  std::vector<int> values(domain_size);
  do {
    for (int& v : values) v = static_cast<int>(rng() & 1);
  } while ([&] {
    for (int v : values)
      if (v != values[0]) return false;
    return true;
  }());

  return BooleanFunction(n, std::move(domain), std::move(values));
}

BooleanFunction negate(const BooleanFunction& f) {
  std::vector<int> values = f.values();
  for (int& v : values) v = 1 - v;
  return BooleanFunction(f.n(), f.domain(), std::move(values));
}

std::vector<int> differing_indices(const BooleanFunction& f, int ix, int iy) {
  std::vector<int> out;
  const std::string& x = f.input(ix);
  const std::string& y = f.input(iy);
  for (int j = 1; j <= f.n(); ++j)
    if (x[j - 1] != y[j - 1]) out.push_back(j);
  return out;
}

}  // namespace qadv
