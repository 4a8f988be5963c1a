#ifndef PIXELSTORM_KERNELS_HPP
#define PIXELSTORM_KERNELS_HPP

// Inference kernels. Loops are ordered so the innermost runs over contiguous
// output channels; the outer spatial loop is split across OpenMP threads once
// a layer holds enough work to pay for the fork.
//
// Callers must have validated shapes (LayeredModel::validate).

#include "pixelstorm/classifier.hpp"

namespace pixelstorm::kernels {

struct PadInfo {
  int before_y = 0;
  int before_x = 0;
};

Shape conv_output_shape(const Shape& in, const Conv2D& conv, PadInfo* pad = nullptr);
/// Rejects windows that do not tile the input exactly.
Shape pool_output_shape(const Shape& in, int kernel, int stride);

Tensor conv2d(const Tensor& in, const Conv2D& conv);
void relu_inplace(Tensor& t);
Tensor max_pool(const Tensor& in, const MaxPool& pool);
Tensor avg_pool(const Tensor& in, const AvgPool& pool);
Tensor dense(const Tensor& in, const Dense& layer);

/// Work units (multiply-adds) above which a kernel goes parallel.
inline constexpr long parallel_threshold = 1L << 16;

}  // namespace pixelstorm::kernels

#endif  // PIXELSTORM_KERNELS_HPP
