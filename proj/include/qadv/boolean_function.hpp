#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace qadv {

/// A Boolean function given by an explicit list of inputs and labels.
///
/// The domain is an ordered list of n-bit strings; the order of the list is
/// the canonical index order used everywhere else (SDP rows, CSV rows, JSON).
/// Bit j of an input, 1 <= j <= n, is the j-th character of its string.
class BooleanFunction {
public:
  BooleanFunction() = default;
  BooleanFunction(int n, std::vector<std::string> domain, std::vector<int> values);

  int n() const { return n_; }
  int size() const { return static_cast<int>(domain_.size()); }

  const std::vector<std::string>& domain() const { return domain_; }
  const std::vector<int>& values() const { return values_; }

  const std::string& input(int ix) const { return domain_[ix]; }
  int value(int ix) const { return values_[ix]; }
  char bit(int ix, int j) const { return domain_[ix][j - 1]; }

  /// Index of a domain string, or -1 if absent.
  int index_of(const std::string& x) const;

  /// Domain indices with f(x) = 1, in canonical order.
  std::vector<int> one_inputs() const;
  /// Domain indices with f(x) = 0, in canonical order.
  std::vector<int> zero_inputs() const;

  bool is_constant() const;

private:
  int n_ = 0;
  std::vector<std::string> domain_;
  std::vector<int> values_;
  std::unordered_map<std::string, int> index_;
};

/// Parses the "<bitstring> <0|1>" line format. Lines whose first
/// non-whitespace character is '#' are comments; blank lines are skipped.
/// Throws std::runtime_error on ragged input lengths, duplicate domain
/// strings, labels outside {0,1}, non-binary characters, or an empty domain.
BooleanFunction parse_function(const std::string& text);

/// Inverse of parse_function: one "<bitstring> <value>" line per input,
/// in canonical order.
std::string serialize_function(const BooleanFunction& f);

/// A function on a uniform random sample of `domain_size` distinct n-bit
/// strings with independent fair-coin labels, resampling the labels until
/// the function is non-constant. Deterministic for a fixed seed.
BooleanFunction random_function(int n, int domain_size, std::uint64_t seed);

/// Same domain, flipped labels.
BooleanFunction negate(const BooleanFunction& f);

/// 1-based bit positions where two domain inputs differ.
std::vector<int> differing_indices(const BooleanFunction& f, int ix, int iy);

}  // namespace qadv
