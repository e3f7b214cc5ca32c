/* Copyright 2026 The CIP Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Brute-force reference implementations used by the unit and acceptance
// suites. They deliberately take the long way round (enumeration, explicit
// rational sets) and share no code with the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "cip/ratio_planner.hpp"
#include "cip/tensor.hpp"

namespace oracle {

using cip::AspectRatio;
using cip::Dims;

inline std::vector<AspectRatio> all_grids(int budget) {
  std::vector<AspectRatio> out;
  for (int r = 1; r <= budget; ++r)
    for (int c = 1; c <= budget; ++c)
      if (r * c <= budget) out.push_back({r, c});
  return out;
}

struct Rational {
  __int128 num;
  __int128 den;  // > 0
};

inline bool less(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }
inline bool equal(const Rational& a, const Rational& b) { return a.num * b.den == b.num * a.den; }

inline bool better_tie(const AspectRatio& a, const AspectRatio& b) {
  return a.tile_count() > b.tile_count() ||
         (a.tile_count() == b.tile_count() && a.cols > b.cols);
}

// argmin |w/h - cols/rows| with the documented tie-break, exact.
inline AspectRatio closest_exact(Dims target, const std::vector<AspectRatio>& pool) {
  auto dist = [&](const AspectRatio& a) {
    __int128 n = static_cast<__int128>(target.w) * a.rows - static_cast<__int128>(a.cols) * target.h;
    if (n < 0) n = -n;
    return Rational{n, static_cast<__int128>(target.h) * a.rows};
  };
  AspectRatio best = pool.at(0);
  for (const auto& a : pool) {
    if (less(dist(a), dist(best)) || (equal(dist(a), dist(best)) && better_tie(a, best))) best = a;
  }
  return best;
}

inline AspectRatio closest(double target, const std::vector<AspectRatio>& pool) {
  AspectRatio best = pool.at(0);
  for (const auto& a : pool) {
    const double da = std::fabs(target - static_cast<double>(a.cols) / a.rows);
    const double db = std::fabs(target - static_cast<double>(best.cols) / best.rows);
    if (da < db || (da == db && better_tie(a, best))) best = a;
  }
  return best;
}

// Literal reading: drop a candidate if D = k*A on either axis for some k >= 1.
inline std::vector<AspectRatio> filter_by_multiples(const AspectRatio& d,
                                                    const std::vector<AspectRatio>& pool) {
  std::vector<AspectRatio> out;
  for (const auto& a : pool) {
    bool coincident = false;
    for (int k = 1; k <= d.rows; ++k) coincident = coincident || d.rows == k * a.rows;
    for (int k = 1; k <= d.cols; ++k) coincident = coincident || d.cols == k * a.cols;
    if (!coincident) out.push_back(a);
  }
  return out;
}

inline std::set<std::pair<int, int>> interior_lines(int n) {
  std::set<std::pair<int, int>> s;
  for (int i = 1; i < n; ++i) {
    const int g = std::gcd(i, n);
    s.insert({i / g, n / g});
  }
  return s;
}

inline int shared_on_axis(int a, int b) {
  const auto sa = interior_lines(a);
  const auto sb = interior_lines(b);
  int n = 0;
  for (const auto& p : sa) n += sb.count(p) ? 1 : 0;
  return n;
}

inline int shared_lines(const AspectRatio& a, const AspectRatio& b) {
  return shared_on_axis(a.cols, b.cols) + shared_on_axis(a.rows, b.rows);
}

inline bool lines_subset(int a, int b) {
  const auto sa = interior_lines(a);
  const auto sb = interior_lines(b);
  return std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
}

// Tiles inside the canvas, areas sum to the canvas, no overlap of positive area.
inline bool is_partition(const cip::PlanLevel& level) {
  std::int64_t area = 0;
  for (const auto& t : level.tiles) {
    if (t.x < 0 || t.y < 0 || t.x + t.w > level.resized.w || t.y + t.h > level.resized.h)
      return false;
    area += t.w * t.h;
  }
  if (area != static_cast<std::int64_t>(level.resized.w) * level.resized.h) return false;
  for (std::size_t i = 0; i < level.tiles.size(); ++i)
    for (std::size_t j = i + 1; j < level.tiles.size(); ++j) {
      const auto& a = level.tiles[i];
      const auto& b = level.tiles[j];
      const std::int64_t ox = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
      const std::int64_t oy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
      if (ox > 0 && oy > 0) return false;
    }
  return true;
}

// Dense long-double reference: no max subtraction, PE evaluated inline.
inline std::vector<long double> scm_weights(const cip::TokenMatrix& vd, const cip::TokenMatrix& va,
                                            const cip::TokenMatrix& vg, const cip::TokenMatrix& tt,
                                            bool use_pe) {
  const std::size_t C = vd.cols();
  auto pe = [&](std::size_t i, std::size_t c) -> long double {
    if (!use_pe) return 0.0L;
    const long double denom = std::pow(10000.0L, (long double)(c - c % 2) / (long double)C);
    const long double a = (long double)i / denom;
    return c % 2 == 0 ? std::sin(a) : std::cos(a);
  };
  std::vector<std::vector<long double>> q;
  for (const cip::TokenMatrix* m : {&va, &vg, &tt})
    for (std::size_t r = 0; r < m->rows(); ++r) {
      std::vector<long double> row(C);
      for (std::size_t c = 0; c < C; ++c) row[c] = (*m)(r, c);
      q.push_back(row);
    }
  std::vector<long double> w(vd.rows(), 0.0L);
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::vector<long double> e(vd.rows());
    long double z = 0.0L;
    for (std::size_t j = 0; j < vd.rows(); ++j) {
      long double dot = 0.0L;
      for (std::size_t c = 0; c < C; ++c) dot += (q[i][c] + pe(i, c)) * ((long double)vd(j, c) + pe(j, c));
      e[j] = std::exp(dot / std::sqrt((long double)C));
      z += e[j];
    }
    for (std::size_t j = 0; j < vd.rows(); ++j) w[j] += e[j] / z / (long double)q.size();
  }
  return w;
}

inline std::vector<std::size_t> top_k(const std::vector<double>& w, std::size_t k) {
  std::vector<std::size_t> kept;
  std::vector<bool> used(w.size(), false);
  for (std::size_t n = 0; n < k; ++n) {
    std::size_t best = w.size();
    for (std::size_t j = 0; j < w.size(); ++j)
      if (!used[j] && (best == w.size() || w[j] > w[best])) best = j;
    used[best] = true;
    kept.push_back(best);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace oracle
