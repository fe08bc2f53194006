#pragma once

#include <cstddef>
#include <functional>

namespace litho {

// Process-wide worker count for internal parallel loops; 0 restores the
// hardware default. Results depend only on this count, never on scheduling.
void set_thread_count(int n);
int thread_count();

// Splits [0, n) into thread_count() contiguous chunks, calling
// body(begin, end, chunk) once per chunk, and joins. Chunk boundaries are a
// function of n and the thread count only.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, int)>& body);

}  // namespace litho
