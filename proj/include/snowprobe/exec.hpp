#pragma once

namespace snowprobe {

// Every parallel kernel has a serial twin; results must be identical
// regardless of which one runs or how many threads OpenMP uses.
enum class Exec { Serial, Parallel };

// 0 restores the OpenMP default.
void set_thread_count(int n);
int thread_count();

}  // namespace snowprobe
