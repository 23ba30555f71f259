#pragma once

#include <functional>

namespace areal {

/// Caps the worker count used by parallel_for.  0 restores the hardware
/// default.  Results never depend on this setting: work items are
/// independent and write to disjoint slots.
void set_max_threads(int n);
int max_threads();

/// Runs body(i) for i in [begin, end), possibly across threads.  The first
/// exception thrown by any worker is rethrown on the caller's thread.
void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace areal
