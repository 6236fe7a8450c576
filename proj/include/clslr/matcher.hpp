#pragma once

#include <cstddef>
#include <vector>

#include "clslr/error.hpp"
#include "clslr/instantiation.hpp"
#include "clslr/term.hpp"

namespace clslr {

inline constexpr std::size_t kDefaultMatchCap = 1'000'000;

/// Counts explored candidate assignments; throws ResourceLimitExceeded past the cap.
class MatchBudget {
 public:
  explicit MatchBudget(std::size_t cap = kDefaultMatchCap) : cap_(cap) {}

  void spend() {
    if (++used_ > cap_) throw ResourceLimitExceeded("matcher explored more than " + std::to_string(cap_) + " candidates");
  }
  std::size_t used() const { return used_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
  std::size_t used_ = 0;
};

/// p sigma, normalized. Rule nodes are left untouched.
Pattern substitute(const Pattern& p, const Instantiation& sigma);
Sequence substitute(const Sequence& s, const Instantiation& sigma);

/// All sigma with substitute(p, sigma) equivalent to t, in enumeration order,
/// without duplicates.
std::vector<Instantiation> match(const Pattern& p, const Pattern& t, MatchBudget& budget);
std::vector<Instantiation> match(const Pattern& p, const Pattern& t);

/// All sigma such that p sigma is equivalent to the parallel composition of a
/// sub-multiset of `available` (which must be normalized, non-Par, non-eps).
/// Bindings already present in `seed` are kept and must be respected.
std::vector<Instantiation> match_part(const Pattern& p, const std::vector<Pattern>& available,
                                      MatchBudget& budget, const Instantiation& seed = {});

/// All sigma with substitute(s, sigma) equal to some rotation of `membrane`.
std::vector<Instantiation> match_membrane(const Sequence& s, const Sequence& membrane,
                                          MatchBudget& budget, const Instantiation& seed = {});

/// Removes one copy of each member of `part` from `whole` (compared by key).
/// Returns false when `part` is not a sub-multiset.
bool subtract_members(std::vector<Pattern>& whole, const std::vector<Pattern>& part);

}  // namespace clslr
