#pragma once

namespace tiger::testing {

/// Number of ways to place n non-attacking queens, by trying every
/// permutation of column assignments.
long countQueens(int n);

} // namespace tiger::testing
