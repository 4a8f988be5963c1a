#include "pixelstorm/kernels.hpp"

#include <algorithm>
#include <limits>

namespace pixelstorm::kernels {

Shape conv_output_shape(const Shape& in, const Conv2D& conv, PadInfo* pad) {
  if (conv.kernel <= 0 || conv.stride <= 0 || conv.depth <= 0) {
    throw std::invalid_argument("conv2d kernel, stride and depth must be positive");
  }
  Shape out{0, 0, conv.depth};
  PadInfo p;
  if (conv.padding == Padding::valid) {
    if (in.height < conv.kernel || in.width < conv.kernel) {
      throw std::invalid_argument("conv2d kernel larger than input " + to_string(in));
    }
    out.height = (in.height - conv.kernel) / conv.stride + 1;
    out.width = (in.width - conv.kernel) / conv.stride + 1;
  } else {
    out.height = (in.height + conv.stride - 1) / conv.stride;
    out.width = (in.width + conv.stride - 1) / conv.stride;
    const int total_y = std::max((out.height - 1) * conv.stride + conv.kernel - in.height, 0);
    const int total_x = std::max((out.width - 1) * conv.stride + conv.kernel - in.width, 0);
    p.before_y = total_y / 2;
    p.before_x = total_x / 2;
  }
  if (pad) *pad = p;
  return out;
}

Shape pool_output_shape(const Shape& in, int kernel, int stride) {
  if (kernel <= 0 || stride <= 0) throw std::invalid_argument("pool kernel and stride must be positive");
  if (in.height < kernel || in.width < kernel) {
    throw std::invalid_argument("pool window larger than input " + to_string(in));
  }
  if ((in.height - kernel) % stride != 0 || (in.width - kernel) % stride != 0) {
    throw std::invalid_argument("pool window " + std::to_string(kernel) + "/" +
                                std::to_string(stride) + " does not tile input " + to_string(in));
  }
  return {(in.height - kernel) / stride + 1, (in.width - kernel) / stride + 1, in.channels};
}

Tensor conv2d(const Tensor& in, const Conv2D& conv) {
  PadInfo pad;
  const Shape os = conv_output_shape(in.shape, conv, &pad);
  Tensor out(os);
  const int k = conv.kernel;
  const int cin = in.shape.channels;
  const int cout = conv.depth;
  const long work = static_cast<long>(os.size()) * k * k * cin;
  const double* w = conv.weights.data();

#pragma omp parallel for schedule(static) if (work > parallel_threshold)
  for (int oy = 0; oy < os.height; ++oy) {
    for (int ox = 0; ox < os.width; ++ox) {
      double* acc = &out.data[(static_cast<std::size_t>(oy) * os.width + ox) * cout];
      std::copy(conv.bias.begin(), conv.bias.end(), acc);
      const int y0 = oy * conv.stride - pad.before_y;
      const int x0 = ox * conv.stride - pad.before_x;
      const int ky_lo = std::max(0, -y0), ky_hi = std::min(k, in.shape.height - y0);
      const int kx_lo = std::max(0, -x0), kx_hi = std::min(k, in.shape.width - x0);
      for (int ky = ky_lo; ky < ky_hi; ++ky) {
        for (int kx = kx_lo; kx < kx_hi; ++kx) {
          const double* src = &in.data[(static_cast<std::size_t>(y0 + ky) * in.shape.width + (x0 + kx)) * cin];
          const double* wk = w + (static_cast<std::size_t>(ky * k + kx) * cin) * cout;
          for (int ci = 0; ci < cin; ++ci) {
            const double v = src[ci];
            const double* wrow = wk + static_cast<std::size_t>(ci) * cout;
            for (int co = 0; co < cout; ++co) acc[co] += v * wrow[co];
          }
        }
      }
    }
  }
  return out;
}

void relu_inplace(Tensor& t) {
  for (double& v : t.data) v = v > 0.0 ? v : 0.0;
}

namespace {

template <typename Reduce>
Tensor pool(const Tensor& in, int kernel, int stride, Reduce reduce) {
  const Shape os = pool_output_shape(in.shape, kernel, stride);
  Tensor out(os);
  const int c = in.shape.channels;
  const long work = static_cast<long>(os.size()) * kernel * kernel;

#pragma omp parallel for schedule(static) if (work > parallel_threshold)
  for (int oy = 0; oy < os.height; ++oy) {
    for (int ox = 0; ox < os.width; ++ox) {
      double* dst = &out.data[(static_cast<std::size_t>(oy) * os.width + ox) * c];
      reduce(in, oy * stride, ox * stride, kernel, dst);
    }
  }
  return out;
}

}  // namespace

Tensor max_pool(const Tensor& in, const MaxPool& p) {
  return pool(in, p.kernel, p.stride, [](const Tensor& t, int y0, int x0, int k, double* dst) {
    const int c = t.shape.channels;
    std::fill(dst, dst + c, -std::numeric_limits<double>::infinity());
    for (int y = y0; y < y0 + k; ++y) {
      const double* row = &t.data[(static_cast<std::size_t>(y) * t.shape.width + x0) * c];
      for (int x = 0; x < k; ++x, row += c)
        for (int ch = 0; ch < c; ++ch) dst[ch] = std::max(dst[ch], row[ch]);
    }
  });
}

Tensor avg_pool(const Tensor& in, const AvgPool& p) {
  return pool(in, p.kernel, p.stride, [](const Tensor& t, int y0, int x0, int k, double* dst) {
    const int c = t.shape.channels;
    std::fill(dst, dst + c, 0.0);
    for (int y = y0; y < y0 + k; ++y) {
      const double* row = &t.data[(static_cast<std::size_t>(y) * t.shape.width + x0) * c];
      for (int x = 0; x < k; ++x, row += c)
        for (int ch = 0; ch < c; ++ch) dst[ch] += row[ch];
    }
    const double scale = 1.0 / (k * k);
    for (int ch = 0; ch < c; ++ch) dst[ch] *= scale;
  });
}

Tensor dense(const Tensor& in, const Dense& layer) {
  const int n_in = static_cast<int>(in.data.size());
  const int n_out = layer.units;
  Tensor out(Shape{1, 1, n_out});
  constexpr int block = 64;
  const int n_blocks = (n_out + block - 1) / block;
  const long work = static_cast<long>(n_in) * n_out;

#pragma omp parallel for schedule(static) if (work > parallel_threshold)
  for (int b = 0; b < n_blocks; ++b) {
    const int lo = b * block;
    const int hi = std::min(n_out, lo + block);
    double* acc = out.data.data();
    for (int o = lo; o < hi; ++o) acc[o] = layer.bias[o];
    for (int i = 0; i < n_in; ++i) {
      const double v = in.data[i];
      const double* wrow = &layer.weights[static_cast<std::size_t>(i) * n_out];
      for (int o = lo; o < hi; ++o) acc[o] += v * wrow[o];
    }
  }
  return out;
}

}  // namespace pixelstorm::kernels
