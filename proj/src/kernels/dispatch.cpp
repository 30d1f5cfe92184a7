#include <atomic>
#include <cstdlib>
#include <cstring>

#include "sqz/kernels.hpp"

namespace sqz::kernels {

#ifdef SQZ_HAVE_AVX2
const Table* avx2_table_impl();
#endif

const Table* avx2_table() {
#ifdef SQZ_HAVE_AVX2
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const Table* initial() {
  const char* env = std::getenv("SQZ_KERNELS");
  if (env && std::strcmp(env, "scalar") == 0) return &scalar_table();
  if (const Table* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{initial()};
  return t;
}

}  // namespace

const Table& active() { return *current().load(std::memory_order_relaxed); }

bool select(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    current().store(&scalar_table());
    return true;
  }
  if (std::strcmp(name, "avx2") == 0) {
    const Table* t = avx2_table();
    if (!t) return false;
    current().store(t);
    return true;
  }
  return false;
}

}  // namespace sqz::kernels
