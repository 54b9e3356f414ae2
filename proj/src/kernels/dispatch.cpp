#include <atomic>
#include <cstdlib>
#include <cstring>

#include "anderson1d/kernels.hpp"

namespace anderson::kernels {

#ifdef ANDERSON1D_HAVE_AVX2
ChainFn avx2_kernel_impl();  // defined in chain_avx2.cpp
#endif

namespace {

bool cpu_has_avx2() {
#if defined(ANDERSON1D_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

enum class Choice { kAuto, kScalar, kAvx2 };

std::atomic<Choice> g_choice{Choice::kAuto};
std::atomic<bool> g_env_checked{false};

Choice parse_choice(const char* name) {
  if (name != nullptr) {
    if (std::strcmp(name, "scalar") == 0) return Choice::kScalar;
    if (std::strcmp(name, "avx2") == 0) return Choice::kAvx2;
  }
  return Choice::kAuto;
}

void apply_env_once() {
  bool expected = false;
  if (g_env_checked.compare_exchange_strong(expected, true)) {
    if (const char* env = std::getenv("ANDERSON1D_KERNEL")) {
      g_choice.store(parse_choice(env));
    }
  }
}

}  // namespace

ChainFn scalar_kernel();  // chain_scalar.cpp

ChainFn avx2_kernel() {
#ifdef ANDERSON1D_HAVE_AVX2
  if (cpu_has_avx2()) return avx2_kernel_impl();
#endif
  return nullptr;
}

void force_kernel(const char* name) {
  g_env_checked.store(true);  // explicit request wins over the environment
  g_choice.store(parse_choice(name));
}

ChainFn active_kernel() {
  apply_env_once();
  switch (g_choice.load()) {
    case Choice::kScalar:
      return scalar_kernel();
    case Choice::kAvx2:
      if (ChainFn f = avx2_kernel()) return f;
      return scalar_kernel();
    case Choice::kAuto:
    default:
      if (ChainFn f = avx2_kernel()) return f;
      return scalar_kernel();
  }
}

const char* active_kernel_name() {
  return active_kernel() == avx2_kernel() && avx2_kernel() != nullptr
             ? "avx2"
             : "scalar";
}

}  // namespace anderson::kernels
