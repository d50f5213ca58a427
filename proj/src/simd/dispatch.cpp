#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "cylshear/simd/kernels.hpp"

namespace cylsh::simd {
namespace {

const KernelTable* initial_table() {
  const char* env = std::getenv("CYLSH_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

bool available(Level level) {
  return level == Level::Scalar || avx2_kernels() != nullptr;
}

const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

void set_level(Level level) {
  if (level == Level::Scalar) {
    active().store(&scalar_kernels());
    return;
  }
  const KernelTable* t = avx2_kernels();
  if (t == nullptr) throw std::runtime_error("AVX2 kernels are not available on this CPU/build");
  active().store(t);
}

Level active_level() { return kernels().level; }

const char* level_name(Level level) { return level == Level::Scalar ? "scalar" : "avx2"; }

}  // namespace cylsh::simd
