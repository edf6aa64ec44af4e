#ifndef FGEN_CANCELLATION_HPP
#define FGEN_CANCELLATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgen/errors.hpp"
#include "fgen/tuples.hpp"

namespace fgen {

/// One rotation slot of h^+-: rotation `rotation` of h_{word} (inverse=false)
/// or of h_{word}^-1 (inverse=true). Distinct slots count as distinct
/// occurrences, so proper powers and duplicated words fail C'(lambda).
struct RotationIndex {
  std::size_t word = 0;
  bool inverse = false;
  std::size_t rotation = 0;

  bool operator==(const RotationIndex&) const = default;
};

/// Exact rational 0 < p/q < 1; comparisons are done in integer arithmetic.
struct Lambda {
  std::int64_t p = 1;
  std::int64_t q = 6;

  Lambda(std::int64_t p_, std::int64_t q_) : p(p_), q(q_) {
    if (p <= 0 || q <= 0 || p >= q)
      throw std::invalid_argument("lambda must satisfy 0 < p/q < 1");
  }

  static Lambda parse(std::string_view text);
  std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }

  bool operator<=(const Lambda& o) const { return p * o.q <= o.p * q; }
};

/// Per-slot maximum piece: length of the longest common prefix between the
/// slot's rotation and any other slot's rotation, with the witnessing partner.
struct RotationPiece {
  RotationIndex slot;
  std::size_t word_length = 0;
  std::size_t piece = 0;
  RotationIndex partner;  // meaningful when piece > 0
};

/// Fast path: materialize all rotations, sort, take neighbor LCPs.
/// Requires every word cyclically reduced.
std::vector<RotationPiece> max_piece_per_rotation(const WordTuple& h);

/// Direct quadratic oracle with identical output; refuses more than
/// `rotation_cap` rotation slots.
std::vector<RotationPiece> pieces_naive(const WordTuple& h, std::size_t rotation_cap = 5000);

/// First slot violating q * piece < p * |w|, if any.
std::optional<RotationPiece> cprime_violation(const WordTuple& h, Lambda lambda);

/// C'(lambda): every piece occurring as a prefix of a rotation w is shorter
/// than lambda * |w| (strict, exact arithmetic).
bool satisfies_cprime(const WordTuple& h, Lambda lambda);

}  // namespace fgen

#endif
