// Copyright 2026 The vocabplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vocabplan/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vocabplan::nn
{

namespace
{

struct Dims
{
  std::size_t rows;
  std::size_t cols;
};

Dims matrix_dims(const Tensor & t, const char * op)
{
  if (t.rank() == 2) {
    return {t.dim(0), t.dim(1)};
  }
  if (t.rank() == 1) {
    return {1, t.dim(0)};
  }
  throw std::invalid_argument(std::string(op) + ": expected a matrix, got " + shape_string(t.shape()));
}

void require_same_shape(const Tensor & a, const Tensor & b, const char * op)
{
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(
      std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
      shape_string(b.shape()));
  }
}

detail::Node & parent(detail::Node & self, std::size_t i) { return *self.parents[i]; }

}  // namespace

Tensor matmul(const Tensor & a, const Tensor & b)
{
  const Dims da = matrix_dims(a, "matmul");
  const Dims db = matrix_dims(b, "matmul");
  if (da.cols != db.rows) {
    throw std::invalid_argument(
      "matmul: inner dimensions differ " + shape_string(a.shape()) + " x " +
      shape_string(b.shape()));
  }
  const std::size_t n = da.rows, k = da.cols, m = db.cols;
  std::vector<double> out(n * m, 0.0);
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < n; ++i) {
    double * row = out.data() + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double s = av[i * k + p];
      if (s == 0.0) continue;
      const double * brow = bv.data() + p * m;
      for (std::size_t j = 0; j < m; ++j) row[j] += s * brow[j];
    }
  }
  return Tensor::make_result(
    "matmul", {n, m}, std::move(out), {a, b}, [n, k, m](detail::Node & self) {
      detail::Node & pa = parent(self, 0);
      detail::Node & pb = parent(self, 1);
      const double * g = self.grad.data();
      if (pa.requires_grad) {
        // dA = dC B^T
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            double acc = 0.0;
            const double * brow = pb.value.data() + p * m;
            const double * grow = g + i * m;
            for (std::size_t j = 0; j < m; ++j) acc += grow[j] * brow[j];
            pa.grad[i * k + p] += acc;
          }
        }
      }
      if (pb.requires_grad) {
        // dB = A^T dC
        for (std::size_t i = 0; i < n; ++i) {
          const double * grow = g + i * m;
          for (std::size_t p = 0; p < k; ++p) {
            const double s = pa.value[i * k + p];
            if (s == 0.0) continue;
            double * brow = pb.grad.data() + p * m;
            for (std::size_t j = 0; j < m; ++j) brow[j] += s * grow[j];
          }
        }
      }
    });
}

Tensor transpose(const Tensor & a)
{
  const Dims d = matrix_dims(a, "transpose");
  std::vector<double> out(d.rows * d.cols);
  const auto av = a.values();
  for (std::size_t i = 0; i < d.rows; ++i) {
    for (std::size_t j = 0; j < d.cols; ++j) out[j * d.rows + i] = av[i * d.cols + j];
  }
  return Tensor::make_result("transpose", {d.cols, d.rows}, std::move(out), {a}, [d](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    for (std::size_t i = 0; i < d.rows; ++i) {
      for (std::size_t j = 0; j < d.cols; ++j) pa.grad[i * d.cols + j] += self.grad[j * d.rows + i];
    }
  });
}

Tensor reshape(const Tensor & a, Shape shape)
{
  if (shape_size(shape) != a.size()) {
    throw std::invalid_argument(
      "reshape: cannot view " + shape_string(a.shape()) + " as " + shape_string(shape));
  }
  std::vector<double> out(a.values().begin(), a.values().end());
  return Tensor::make_result("reshape", std::move(shape), std::move(out), {a}, [](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) pa.grad[i] += self.grad[i];
  });
}

Tensor add(const Tensor & a, const Tensor & b)
{
  require_same_shape(a, b, "add");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] + b.values()[i];
  return Tensor::make_result("add", a.shape(), std::move(out), {a, b}, [](detail::Node & self) {
    for (std::size_t p = 0; p < 2; ++p) {
      detail::Node & pp = parent(self, p);
      if (!pp.requires_grad) continue;
      for (std::size_t i = 0; i < self.grad.size(); ++i) pp.grad[i] += self.grad[i];
    }
  });
}

Tensor sub(const Tensor & a, const Tensor & b)
{
  require_same_shape(a, b, "sub");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] - b.values()[i];
  return Tensor::make_result("sub", a.shape(), std::move(out), {a, b}, [](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    detail::Node & pb = parent(self, 1);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (pa.requires_grad) pa.grad[i] += self.grad[i];
      if (pb.requires_grad) pb.grad[i] -= self.grad[i];
    }
  });
}

Tensor mul(const Tensor & a, const Tensor & b)
{
  require_same_shape(a, b, "mul");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] * b.values()[i];
  return Tensor::make_result("mul", a.shape(), std::move(out), {a, b}, [](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    detail::Node & pb = parent(self, 1);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (pa.requires_grad) pa.grad[i] += self.grad[i] * pb.value[i];
      if (pb.requires_grad) pb.grad[i] += self.grad[i] * pa.value[i];
    }
  });
}

Tensor scale(const Tensor & a, double factor)
{
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] * factor;
  return Tensor::make_result("scale", a.shape(), std::move(out), {a}, [factor](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) pa.grad[i] += self.grad[i] * factor;
  });
}

Tensor add_rowwise(const Tensor & a, const Tensor & b)
{
  const Dims d = matrix_dims(a, "add_rowwise");
  if (b.size() != d.cols) {
    throw std::invalid_argument(
      "add_rowwise: bias " + shape_string(b.shape()) + " does not match " + shape_string(a.shape()));
  }
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < d.rows; ++i) {
    for (std::size_t j = 0; j < d.cols; ++j) out[i * d.cols + j] = a.values()[i * d.cols + j] + b.values()[j];
  }
  return Tensor::make_result("add_rowwise", a.shape(), std::move(out), {a, b}, [d](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    detail::Node & pb = parent(self, 1);
    for (std::size_t i = 0; i < d.rows; ++i) {
      for (std::size_t j = 0; j < d.cols; ++j) {
        const double g = self.grad[i * d.cols + j];
        if (pa.requires_grad) pa.grad[i * d.cols + j] += g;
        if (pb.requires_grad) pb.grad[j] += g;
      }
    }
  });
}

Tensor relu(const Tensor & a)
{
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, a.values()[i]);
  return Tensor::make_result("relu", a.shape(), std::move(out), {a}, [](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (pa.value[i] > 0.0) pa.grad[i] += self.grad[i];
    }
  });
}

namespace
{

double stable_sigmoid(double z)
{
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void softmax_row(const double * in, double * out, std::size_t n)
{
  double mx = in[0];
  for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, in[j]);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = std::exp(in[j] - mx);
    total += out[j];
  }
  for (std::size_t j = 0; j < n; ++j) out[j] /= total;
}

}  // namespace

Tensor sigmoid(const Tensor & a)
{
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = stable_sigmoid(a.values()[i]);
  return Tensor::make_result("sigmoid", a.shape(), std::move(out), {a}, [](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      const double y = self.value[i];
      pa.grad[i] += self.grad[i] * y * (1.0 - y);
    }
  });
}

Tensor softmax_rows(const Tensor & a)
{
  const Dims d = matrix_dims(a, "softmax_rows");
  std::vector<double> out(a.size());
  if (d.cols > 0) {
    for (std::size_t i = 0; i < d.rows; ++i) {
      softmax_row(a.values().data() + i * d.cols, out.data() + i * d.cols, d.cols);
    }
  }
  return Tensor::make_result("softmax_rows", a.shape(), std::move(out), {a}, [d](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    for (std::size_t i = 0; i < d.rows; ++i) {
      const double * y = self.value.data() + i * d.cols;
      const double * g = self.grad.data() + i * d.cols;
      double dot = 0.0;
      for (std::size_t j = 0; j < d.cols; ++j) dot += g[j] * y[j];
      for (std::size_t j = 0; j < d.cols; ++j) pa.grad[i * d.cols + j] += y[j] * (g[j] - dot);
    }
  });
}

Tensor layer_norm_rows(const Tensor & a, double eps)
{
  const Dims d = matrix_dims(a, "layer_norm_rows");
  if (d.cols == 0) {
    throw std::invalid_argument("layer_norm_rows: empty rows");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("layer_norm_rows: eps must be positive");
  }
  const double n = static_cast<double>(d.cols);
  std::vector<double> out(a.size());
  std::vector<double> inv_std(d.rows);
  for (std::size_t i = 0; i < d.rows; ++i) {
    const double * x = a.values().data() + i * d.cols;
    double mu = 0.0;
    for (std::size_t j = 0; j < d.cols; ++j) mu += x[j];
    mu /= n;
    double var = 0.0;
    for (std::size_t j = 0; j < d.cols; ++j) var += (x[j] - mu) * (x[j] - mu);
    var /= n;
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < d.cols; ++j) out[i * d.cols + j] = (x[j] - mu) * inv_std[i];
  }
  return Tensor::make_result(
    "layer_norm_rows", a.shape(), std::move(out), {a}, [d, n, inv_std = std::move(inv_std)](detail::Node & self) {
      detail::Node & pa = parent(self, 0);
      for (std::size_t i = 0; i < d.rows; ++i) {
        const double * y = self.value.data() + i * d.cols;
        const double * g = self.grad.data() + i * d.cols;
        double g_mean = 0.0;
        double gy_mean = 0.0;
        for (std::size_t j = 0; j < d.cols; ++j) {
          g_mean += g[j];
          gy_mean += g[j] * y[j];
        }
        g_mean /= n;
        gy_mean /= n;
        for (std::size_t j = 0; j < d.cols; ++j) {
          pa.grad[i * d.cols + j] += inv_std[i] * (g[j] - g_mean - y[j] * gy_mean);
        }
      }
    });
}

Tensor sum(const Tensor & a)
{
  double total = 0.0;
  for (double v : a.values()) total += v;
  return Tensor::make_result("sum", {1}, {total}, {a}, [](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    for (auto & g : pa.grad) g += self.grad[0];
  });
}

Tensor mean(const Tensor & a)
{
  if (a.size() == 0) {
    throw std::invalid_argument("mean: empty tensor");
  }
  return scale(sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor gather_rows(const Tensor & a, std::span<const std::size_t> rows)
{
  const Dims d = matrix_dims(a, "gather_rows");
  std::vector<double> out(rows.size() * d.cols);
  std::vector<std::size_t> index(rows.begin(), rows.end());
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] >= d.rows) {
      throw std::out_of_range("gather_rows: row index out of range");
    }
    std::copy_n(a.values().data() + index[r] * d.cols, d.cols, out.data() + r * d.cols);
  }
  return Tensor::make_result(
    "gather_rows", {index.size(), d.cols}, std::move(out), {a}, [d, index](detail::Node & self) {
      detail::Node & pa = parent(self, 0);
      for (std::size_t r = 0; r < index.size(); ++r) {
        for (std::size_t j = 0; j < d.cols; ++j) pa.grad[index[r] * d.cols + j] += self.grad[r * d.cols + j];
      }
    });
}

Tensor tile_rows(const Tensor & a, std::size_t times)
{
  const Dims d = matrix_dims(a, "tile_rows");
  const std::size_t block = d.rows * d.cols;
  std::vector<double> out(times * block);
  for (std::size_t r = 0; r < times; ++r) {
    std::copy(a.values().begin(), a.values().end(), out.begin() + static_cast<std::ptrdiff_t>(r * block));
  }
  return Tensor::make_result(
    "tile_rows", {times * d.rows, d.cols}, std::move(out), {a}, [times, block](detail::Node & self) {
      detail::Node & pa = parent(self, 0);
      for (std::size_t r = 0; r < times; ++r) {
        for (std::size_t i = 0; i < block; ++i) pa.grad[i] += self.grad[r * block + i];
      }
    });
}

Tensor concat_rows(const std::vector<Tensor> & parts)
{
  if (parts.empty()) {
    throw std::invalid_argument("concat_rows: no inputs");
  }
  const std::size_t cols = matrix_dims(parts.front(), "concat_rows").cols;
  std::size_t rows = 0;
  std::vector<std::size_t> offsets;
  for (const auto & p : parts) {
    const Dims d = matrix_dims(p, "concat_rows");
    if (d.cols != cols) {
      throw std::invalid_argument("concat_rows: column mismatch");
    }
    offsets.push_back(rows * cols);
    rows += d.rows;
  }
  std::vector<double> out;
  out.reserve(rows * cols);
  for (const auto & p : parts) out.insert(out.end(), p.values().begin(), p.values().end());
  return Tensor::make_result("concat_rows", {rows, cols}, std::move(out), parts, [offsets](detail::Node & self) {
    for (std::size_t k = 0; k < self.parents.size(); ++k) {
      detail::Node & p = *self.parents[k];
      if (!p.requires_grad) continue;
      for (std::size_t i = 0; i < p.grad.size(); ++i) p.grad[i] += self.grad[offsets[k] + i];
    }
  });
}

Tensor clamp_columns(const Tensor & a, std::span<const double> lower, std::span<const double> upper)
{
  const Dims d = matrix_dims(a, "clamp_columns");
  if (lower.size() != d.cols || upper.size() != d.cols) {
    throw std::invalid_argument("clamp_columns: bound length does not match columns");
  }
  std::vector<double> out(a.size());
  std::vector<std::uint8_t> pass(a.size(), 0);
  for (std::size_t i = 0; i < d.rows; ++i) {
    for (std::size_t j = 0; j < d.cols; ++j) {
      const double v = a.values()[i * d.cols + j];
      const double c = std::clamp(v, lower[j], upper[j]);
      out[i * d.cols + j] = c;
      pass[i * d.cols + j] = (v > lower[j] && v < upper[j]) ? 1 : 0;
    }
  }
  return Tensor::make_result("clamp_columns", a.shape(), std::move(out), {a}, [pass](detail::Node & self) {
    detail::Node & pa = parent(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (pass[i]) pa.grad[i] += self.grad[i];
    }
  });
}

namespace
{

struct BilinearTap
{
  std::size_t i00, i01, i10, i11;  // flat offsets within one channel plane
  double w00, w01, w10, w11;
};

BilinearTap bilinear_tap(const SamplePoint & p, std::size_t h, std::size_t w)
{
  const double u = std::clamp(p.u, 0.5, static_cast<double>(w) - 0.5) - 0.5;
  const double v = std::clamp(p.v, 0.5, static_cast<double>(h) - 0.5) - 0.5;
  std::size_t x0 = static_cast<std::size_t>(std::floor(u));
  std::size_t y0 = static_cast<std::size_t>(std::floor(v));
  if (w >= 2) x0 = std::min(x0, w - 2); else x0 = 0;
  if (h >= 2) y0 = std::min(y0, h - 2); else y0 = 0;
  const std::size_t x1 = w >= 2 ? x0 + 1 : x0;
  const std::size_t y1 = h >= 2 ? y0 + 1 : y0;
  const double fx = w >= 2 ? u - static_cast<double>(x0) : 0.0;
  const double fy = h >= 2 ? v - static_cast<double>(y0) : 0.0;
  return {y0 * w + x0, y0 * w + x1, y1 * w + x0, y1 * w + x1,
          (1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy};
}

}  // namespace

Tensor bilinear_sample(const Tensor & grid, std::span<const SamplePoint> points)
{
  if (grid.rank() != 3) {
    throw std::invalid_argument("bilinear_sample: grid must be [C x H x W]");
  }
  const std::size_t c = grid.dim(0), h = grid.dim(1), w = grid.dim(2);
  if (h == 0 || w == 0) {
    throw std::invalid_argument("bilinear_sample: empty grid");
  }
  const std::size_t plane = h * w;
  std::vector<BilinearTap> taps;
  taps.reserve(points.size());
  for (const auto & p : points) {
    if (!std::isfinite(p.u) || !std::isfinite(p.v)) {
      throw std::invalid_argument("bilinear_sample: non-finite sample point");
    }
    taps.push_back(bilinear_tap(p, h, w));
  }
  std::vector<double> out(points.size() * c);
  const auto g = grid.values();
  for (std::size_t k = 0; k < taps.size(); ++k) {
    const BilinearTap & t = taps[k];
    for (std::size_t ch = 0; ch < c; ++ch) {
      const double * base = g.data() + ch * plane;
      out[k * c + ch] =
        t.w00 * base[t.i00] + t.w01 * base[t.i01] + t.w10 * base[t.i10] + t.w11 * base[t.i11];
    }
  }
  return Tensor::make_result(
    "bilinear_sample", {points.size(), c}, std::move(out), {grid},
    [taps = std::move(taps), c, plane](detail::Node & self) {
      detail::Node & pg = parent(self, 0);
      for (std::size_t k = 0; k < taps.size(); ++k) {
        const BilinearTap & t = taps[k];
        for (std::size_t ch = 0; ch < c; ++ch) {
          const double gk = self.grad[k * c + ch];
          double * base = pg.grad.data() + ch * plane;
          base[t.i00] += t.w00 * gk;
          base[t.i01] += t.w01 * gk;
          base[t.i10] += t.w10 * gk;
          base[t.i11] += t.w11 * gk;
        }
      }
    });
}

Tensor attention(const Tensor & query, const Tensor & key, const Tensor & value)
{
  const Dims dq = matrix_dims(query, "attention");
  const Dims dk = matrix_dims(key, "attention");
  const Dims dv = matrix_dims(value, "attention");
  if (dk.rows != dv.rows) {
    throw std::invalid_argument("attention: key and value row counts differ");
  }
  if (dk.rows == 0) {
    return Tensor::zeros({dq.rows, dv.cols});
  }
  if (dq.cols != dk.cols) {
    throw std::invalid_argument("attention: query and key widths differ");
  }
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(dq.cols));
  const Tensor weights = softmax_rows(scale(matmul(query, transpose(key)), inv_sqrt_d));
  return matmul(weights, value);
}

Tensor grouped_weighted_sum(const Tensor & weights, const Tensor & tokens)
{
  const Dims dw = matrix_dims(weights, "grouped_weighted_sum");
  const Dims dt = matrix_dims(tokens, "grouped_weighted_sum");
  if (dw.rows * dw.cols != dt.rows) {
    throw std::invalid_argument("grouped_weighted_sum: token rows must equal C x T");
  }
  const std::size_t groups = dw.rows, per = dw.cols, d = dt.cols;
  std::vector<double> out(groups * d, 0.0);
  for (std::size_t c = 0; c < groups; ++c) {
    for (std::size_t t = 0; t < per; ++t) {
      const double wt = weights.values()[c * per + t];
      const double * tok = tokens.values().data() + (c * per + t) * d;
      for (std::size_t j = 0; j < d; ++j) out[c * d + j] += wt * tok[j];
    }
  }
  return Tensor::make_result(
    "grouped_weighted_sum", {groups, d}, std::move(out), {weights, tokens},
    [groups, per, d](detail::Node & self) {
      detail::Node & pw = parent(self, 0);
      detail::Node & pt = parent(self, 1);
      for (std::size_t c = 0; c < groups; ++c) {
        const double * g = self.grad.data() + c * d;
        for (std::size_t t = 0; t < per; ++t) {
          const std::size_t row = (c * per + t) * d;
          if (pw.requires_grad) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += g[j] * pt.value[row + j];
            pw.grad[c * per + t] += acc;
          }
          if (pt.requires_grad) {
            const double wt = pw.value[c * per + t];
            for (std::size_t j = 0; j < d; ++j) pt.grad[row + j] += wt * g[j];
          }
        }
      }
    });
}

Tensor bce_with_logits_sum(const Tensor & logits, std::span<const double> targets)
{
  if (logits.size() != targets.size()) {
    throw std::invalid_argument("bce_with_logits_sum: target count mismatch");
  }
  std::vector<double> t(targets.begin(), targets.end());
  double total = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] >= 0.0 && t[i] <= 1.0)) {
      throw std::invalid_argument("bce_with_logits_sum: target outside [0, 1]");
    }
    const double z = logits.values()[i];
    total += std::max(z, 0.0) - z * t[i] + std::log1p(std::exp(-std::abs(z)));
  }
  return Tensor::make_result("bce_with_logits_sum", {1}, {total}, {logits}, [t](detail::Node & self) {
    detail::Node & pz = parent(self, 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
      pz.grad[i] += self.grad[0] * (stable_sigmoid(pz.value[i]) - t[i]);
    }
  });
}

Tensor cross_entropy_sum(const Tensor & logits, std::span<const std::size_t> classes)
{
  const Dims d = matrix_dims(logits, "cross_entropy_sum");
  if (classes.size() != d.rows) {
    throw std::invalid_argument("cross_entropy_sum: class count does not match rows");
  }
  std::vector<std::size_t> cls(classes.begin(), classes.end());
  std::vector<double> probs(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < d.rows; ++i) {
    if (cls[i] >= d.cols) {
      throw std::invalid_argument("cross_entropy_sum: class index out of range");
    }
    const double * z = logits.values().data() + i * d.cols;
    softmax_row(z, probs.data() + i * d.cols, d.cols);
    double mx = z[0];
    for (std::size_t j = 1; j < d.cols; ++j) mx = std::max(mx, z[j]);
    double lse = 0.0;
    for (std::size_t j = 0; j < d.cols; ++j) lse += std::exp(z[j] - mx);
    total += mx + std::log(lse) - z[cls[i]];
  }
  return Tensor::make_result(
    "cross_entropy_sum", {1}, {total}, {logits}, [cls, probs, d](detail::Node & self) {
      detail::Node & pz = parent(self, 0);
      for (std::size_t i = 0; i < d.rows; ++i) {
        for (std::size_t j = 0; j < d.cols; ++j) {
          const double onehot = (j == cls[i]) ? 1.0 : 0.0;
          pz.grad[i * d.cols + j] += self.grad[0] * (probs[i * d.cols + j] - onehot);
        }
      }
    });
}

Tensor squared_error_sum(const Tensor & pred, std::span<const double> targets)
{
  if (pred.size() != targets.size()) {
    throw std::invalid_argument("squared_error_sum: target count mismatch");
  }
  std::vector<double> t(targets.begin(), targets.end());
  double total = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = pred.values()[i] - t[i];
    total += e * e;
  }
  return Tensor::make_result("squared_error_sum", {1}, {total}, {pred}, [t](detail::Node & self) {
    detail::Node & pp = parent(self, 0);
    for (std::size_t i = 0; i < t.size(); ++i) pp.grad[i] += self.grad[0] * 2.0 * (pp.value[i] - t[i]);
  });
}

Tensor smooth_l1_mean(const Tensor & pred, std::span<const double> targets)
{
  if (pred.size() != targets.size() || pred.size() == 0) {
    throw std::invalid_argument("smooth_l1_mean: target count mismatch");
  }
  std::vector<double> t(targets.begin(), targets.end());
  const double n = static_cast<double>(t.size());
  double total = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = pred.values()[i] - t[i];
    const double a = std::abs(e);
    total += a < 1.0 ? 0.5 * e * e : a - 0.5;
  }
  return Tensor::make_result("smooth_l1_mean", {1}, {total / n}, {pred}, [t, n](detail::Node & self) {
    detail::Node & pp = parent(self, 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = pp.value[i] - t[i];
      const double de = std::abs(e) < 1.0 ? e : (e > 0.0 ? 1.0 : -1.0);
      pp.grad[i] += self.grad[0] * de / n;
    }
  });
}

}  // namespace vocabplan::nn
