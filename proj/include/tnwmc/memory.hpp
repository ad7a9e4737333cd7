#pragma once

#include <cstddef>
#include <new>

namespace tnwmc::memory {

/// Per-thread accounting of tensor value storage. Only buffers allocated
/// through CountingAllocator are counted.
struct AllocationStats {
  std::size_t live_bytes = 0;
  std::size_t peak_bytes = 0;
};

AllocationStats& thread_stats();

/// Resets the peak to the current live size and returns that baseline.
std::size_t reset_peak();

template <typename T>
struct CountingAllocator {
  using value_type = T;

  CountingAllocator() noexcept = default;
  template <typename U>
  CountingAllocator(const CountingAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    T* p = static_cast<T*>(::operator new(n * sizeof(T)));
    auto& s = thread_stats();
    s.live_bytes += n * sizeof(T);
    if (s.live_bytes > s.peak_bytes) s.peak_bytes = s.live_bytes;
    return p;
  }

  void deallocate(T* p, std::size_t n) noexcept {
    auto& s = thread_stats();
    // buffers may migrate between threads; never underflow
    s.live_bytes = s.live_bytes >= n * sizeof(T) ? s.live_bytes - n * sizeof(T) : 0;
    ::operator delete(p);
  }

  friend bool operator==(const CountingAllocator&, const CountingAllocator&) { return true; }
};

}  // namespace tnwmc::memory
