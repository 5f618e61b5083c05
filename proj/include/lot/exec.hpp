#pragma once

namespace lot {

// Execution policy for the data-parallel kernels. Every parallel kernel has a
// serial twin that produces identical output; tests compare the two and the
// bench target times them.
enum class Exec { Serial, Parallel };

inline constexpr Exec kDefaultExec = Exec::Parallel;

}  // namespace lot
