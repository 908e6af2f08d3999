#pragma once

#include <iosfwd>

namespace mlmarket {

/// Runs the built-in invariant suite (budget identities, closed-form oracle
/// equivalence, wealth-update equivalences, solver self-consistency checks),
/// printing one pass/fail line per check. Returns true when everything
/// passed.
bool run_verification(std::ostream& out);

}  // namespace mlmarket
