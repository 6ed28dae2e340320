#pragma once

// Antisymmetric kernels h: H x H -> H. Three kinds:
//   cusum         h(x,y) = x - y
//   spatial_sign  h(x,y) = (x - y)/||x - y||, with 0/0 set to 0
//   clipped       h(x,y) = (x - y)/(c + ||x - y||), c > 0
// All evaluate to exactly -h(y,x), which the U-statistic recursions
// rely on.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "funcpd/core.hpp"

namespace funcpd {

enum class KernelKind { cusum, spatial_sign, clipped };

inline const char* to_string(KernelKind k) {
  switch (k) {
    case KernelKind::cusum: return "cusum";
    case KernelKind::spatial_sign: return "spatial_sign";
    case KernelKind::clipped: return "clipped";
  }
  return "?";
}

struct KernelSpec {
  KernelKind kind = KernelKind::spatial_sign;
  double clip_c = 1.0;  // used by clipped only
  GridWeighting weighting = GridWeighting::euclidean;

  void validate() const {
    if (kind == KernelKind::clipped && !(clip_c > 0.0))
      throw std::invalid_argument("clipped kernel requires c > 0, got " +
                                  std::to_string(clip_c));
  }
};

// Differences whose weighted norm is below this are treated as the exact
// tie x == y (the 0/0 := 0 convention); the guard only absorbs denormal
// underflow, never genuinely tiny differences.
inline constexpr double kSignZeroGuard = 1e-300;

inline void eval_kernel(const KernelSpec& spec, std::span<const double> x,
                        std::span<const double> y, std::span<double> out) {
  if (x.size() != y.size())
    throw std::invalid_argument("eval_kernel: dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  if (out.size() != x.size())
    throw std::invalid_argument("eval_kernel: output buffer size mismatch");
  spec.validate();
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  if (spec.kind == KernelKind::cusum) return;
  const double len = norm(out, spec.weighting);
  if (spec.kind == KernelKind::spatial_sign) {
    if (len < kSignZeroGuard) {
      for (double& v : out) v = 0.0;
      return;
    }
    for (double& v : out) v /= len;
    return;
  }
  const double scale = spec.clip_c + len;
  for (double& v : out) v /= scale;
}

inline std::vector<double> eval_kernel(const KernelSpec& spec,
                                       std::span<const double> x,
                                       std::span<const double> y) {
  std::vector<double> out(x.size());
  eval_kernel(spec, x, y, out);
  return out;
}

}  // namespace funcpd
