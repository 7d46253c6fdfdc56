#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace halnum {

// Execution knobs threaded through every parallel op. Results are required
// to be byte-identical for any `threads` value: work is always split into
// fixed-size blocks (a function of the input only), block results land in
// per-block slots, and combination happens in block-index order.
struct ExecPolicy {
  unsigned threads = 1;          // 0 or 1 = run sequentially
  std::uint64_t chunk = 65536;   // summation chunk size (config-visible)
};

// Runs fn(0), ..., fn(nblocks-1), distributing block indices over at most
// `threads` workers. fn(i) must confine its writes to slot i of some output
// so the result does not depend on which worker claims which block.
// The first exception thrown by any fn is rethrown after all workers join.
void run_blocks(std::size_t nblocks, unsigned threads,
                const std::function<void(std::size_t)>& fn);

}  // namespace halnum
