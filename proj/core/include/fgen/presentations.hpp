#ifndef FGEN_PRESENTATIONS_HPP
#define FGEN_PRESENTATIONS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fgen/markov.hpp"
#include "fgen/tuples.hpp"
#include "fgen/words.hpp"

namespace fgen {

using IntMatrix = std::vector<std::vector<BigInt>>;

/// Row i, column j: signed count of letter a_j in h_i.
IntMatrix exponent_matrix(const WordTuple& h);

/// Z^r / rowspace as a free part plus a divisibility chain of factors > 1.
struct AbelianizationResult {
  std::size_t free_rank = 0;
  std::vector<BigInt> invariant_factors;

  bool operator==(const AbelianizationResult&) const = default;
  std::string str() const;  // "trivial", "Z/2", "Z^2", "Z/2 x Z/6 x Z^1", ...
};

/// U A V = D with U, V unimodular and D diagonal with a divisibility chain.
struct SmithNormalForm {
  IntMatrix d, u, v;
};

SmithNormalForm smith_normal_form(const IntMatrix& a);

/// Incremental integer row reduction; keeps a row basis of the span, so a
/// million relators fold into at most r rows before the final normal form.
class RowFolder {
 public:
  explicit RowFolder(std::size_t cols) : cols_(cols), pivot_(cols) {}
  void add_row(std::vector<BigInt> row);
  IntMatrix rows() const;

 private:
  std::size_t cols_;
  std::vector<std::vector<BigInt>> pivot_;  // empty vector = no pivot in that column
};

AbelianizationResult abelianization(const WordTuple& h);
AbelianizationResult abelianization_of_rows(std::size_t cols, const IntMatrix& rows);

BigInt determinant(const IntMatrix& a);

/// Letter usage of an automaton, reduced to what the degenerate-regime
/// classification needs: |D| where D is the set of positive letters never
/// emitted in either direction, and whether some emitted letter has its
/// inverse emitted too.
struct DegenerateLetterSets {
  std::size_t unused_positive_letters = 0;  // |D|
  bool has_inverse_pair = true;             // E intersect E^-1 nonempty
};

DegenerateLetterSets degenerate_letter_sets(const MarkovianAutomaton& a);

/// Verdict of the abelianization against the degenerate-regime prediction:
/// F(D) * Z/2Z (n even) or F(D) (n odd) when an inverse pair is emitted,
/// F(|D|+1) otherwise. A necessary condition only: consistent_trivial means
/// the torsion-free prediction matches, consistent_z2 the Z/2 prediction.
enum class DegenerateClass { consistent_trivial, consistent_z2, other };

DegenerateClass degenerate_class_check(const WordTuple& h,
                                       const DegenerateLetterSets& sets = {});

struct CollisionStats {
  bool exists = false;
  std::uint64_t pairs = 0;  // capped at 2^32
};

/// Prefix collisions: pairs of distinct entries (by index) sharing a prefix
/// of length ell. Requires ell <= Min(h).
CollisionStats collision_statistic(const WordTuple& h, std::size_t ell);

}  // namespace fgen

#endif
