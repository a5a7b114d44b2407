#include "hmbem/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hmbem/errors.hpp"

namespace hmbem {

GaussRule gauss_legendre(std::size_t order) {
  if (order == 0) throw std::invalid_argument("Gauss rule needs at least one point");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const auto n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (order == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (order == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[order - 1 - i] = 0.5 * w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.5;
  return rule;
}

PanelSamples::PanelSamples(const Panel& p, const GaussRule& rule) {
  const std::size_t n = rule.order();
  const double jac = p.jacobian();
  x.reserve(n * n), y.reserve(n * n), z.reserve(n * n), w.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Point3 pt = p.map(rule.nodes[a], rule.nodes[b]);
      x.push_back(pt.x), y.push_back(pt.y), z.push_back(pt.z);
      w.push_back(rule.weights[a] * rule.weights[b] * jac);
    }
  }
}

double pair_integral_regular(const PanelSamples& p, const PanelSamples& q) {
  const std::size_t m = q.size();
  const double* qx = q.x.data();
  const double* qy = q.y.data();
  const double* qz = q.z.data();
  const double* qw = q.w.data();
  double sum = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    const double px = p.x[a], py = p.y[a], pz = p.z[a];
    double inner = 0.0;
#pragma omp simd reduction(+ : inner)
    for (std::size_t c = 0; c < m; ++c) {
      const double dx = px - qx[c], dy = py - qy[c], dz = pz - qz[c];
      inner += qw[c] / std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    sum += p.w[a] * inner;
  }
  return sum;
}

double pair_integral_regular(const Panel& p, const Panel& q, const GaussRule& rule) {
  return pair_integral_regular(PanelSamples(p, rule), PanelSamples(q, rule));
}

double point_panel_integral(const Panel& p, const Point3& x, const GaussRule& rule) {
  double sum = 0.0;
  for (std::size_t a = 0; a < rule.order(); ++a) {
    for (std::size_t b = 0; b < rule.order(); ++b) {
      sum += rule.weights[a] * rule.weights[b] / distance(x, p.map(rule.nodes[a], rule.nodes[b]));
    }
  }
  return sum * p.jacobian();
}

double point_panel_distance(const Panel& p, const Point3& x) {
  const Point3 d = x - p.origin;
  const double s = std::clamp(dot(d, p.e1) / dot(p.e1, p.e1), 0.0, 1.0);
  const double t = std::clamp(dot(d, p.e2) / dot(p.e2, p.e2), 0.0, 1.0);
  return distance(x, p.map(s, t));
}

namespace {

// Per-axis extent [lo, lo + len] of an axis-aligned rectangle (len == 0 on the
// normal axis).
struct Extent {
  std::array<double, 3> lo{};
  std::array<double, 3> len{};
};

Extent axis_extent(const Panel& p) {
  auto single_axis = [](const Point3& e) {
    int axis = -1;
    for (int a = 0; a < 3; ++a) {
      if (e[a] != 0.0) {
        if (axis >= 0) return -1;
        axis = a;
      }
    }
    return axis;
  };
  const int a1 = single_axis(p.e1), a2 = single_axis(p.e2);
  if (a1 < 0 || a2 < 0 || a1 == a2) {
    throw QuadratureError("near-field rule requires axis-aligned rectangular panels");
  }
  Extent ext;
  for (std::size_t a = 0; a < 3; ++a) {
    const double u = p.origin[a];
    const double v = u + p.e1[a] + p.e2[a];
    ext.lo[a] = std::min(u, v);
    ext.len[a] = std::abs(v - u);
  }
  return ext;
}

// One free axis of the relative coordinate z_k = x_k - y_k.
struct FreeAxis {
  int axis;
  double lo, hi;
  // Weight: overlap length of [a, a+h1] and [b+z, b+z+h2] when both panels
  // extend along the axis, otherwise 1.
  bool convolved;
  double a, h1, b, h2;
  std::vector<double> cuts;

  double weight(double z) const {
    if (!convolved) return 1.0;
    return std::max(0.0, std::min(a + h1, b + h2 + z) - std::max(a, b + z));
  }
};

struct Box {
  std::array<double, 3> lo{}, hi{};
};

class NearIntegrator {
 public:
  NearIntegrator(const Panel& p, const Panel& q, const GaussRule& rule) : rule_(rule) {
    const Extent ep = axis_extent(p), eq = axis_extent(q);
    double scale = 0.0;
    for (int k = 0; k < 3; ++k) scale = std::max({scale, ep.len[k], eq.len[k]});
    snap_ = 1e-12 * scale;

    for (int k = 0; k < 3; ++k) {
      const double a = ep.lo[k], h1 = ep.len[k], b = eq.lo[k], h2 = eq.len[k];
      if (h1 == 0.0 && h2 == 0.0) {
        fixed_r2_ += (a - b) * (a - b);
        continue;
      }
      FreeAxis ax{k, a - b - h2, a + h1 - b, h1 > 0.0 && h2 > 0.0, a, h1, b, h2, {}};
      std::vector<double> cuts{ax.lo, ax.hi, 0.0};
      if (ax.convolved) cuts.insert(cuts.end(), {a - b, a + h1 - b - h2});
      for (double& c : cuts) {
        if (std::abs(c) <= snap_) c = 0.0;
        c = std::clamp(c, ax.lo, ax.hi);
      }
      std::sort(cuts.begin(), cuts.end());
      for (double c : cuts) {
        if (ax.cuts.empty() || c - ax.cuts.back() > snap_) ax.cuts.push_back(c);
      }
      axes_.push_back(std::move(ax));
    }
    if (fixed_r2_ <= snap_ * snap_) fixed_r2_ = 0.0;
  }

  double integrate() const {
    const std::size_t d = axes_.size();
    std::array<std::size_t, 3> pieces{1, 1, 1}, idx{0, 0, 0};
    for (std::size_t k = 0; k < d; ++k) pieces[k] = axes_[k].cuts.size() - 1;
    double sum = 0.0;
    for (idx[0] = 0; idx[0] < pieces[0]; ++idx[0]) {
      for (idx[1] = 0; idx[1] < pieces[1]; ++idx[1]) {
        for (idx[2] = 0; idx[2] < pieces[2]; ++idx[2]) {
          Box box;
          for (std::size_t k = 0; k < d; ++k) {
            box.lo[k] = axes_[k].cuts[idx[k]];
            box.hi[k] = axes_[k].cuts[idx[k] + 1];
          }
          sum += singular_corner(box) ? duffy(box) : graded(box, 0);
        }
      }
    }
    return sum;
  }

 private:
  static constexpr int kMaxDepth = 12;
  // A box is integrated directly once its distance to the singularity is at
  // least this multiple of its diameter.
  static constexpr double kSeparation = 0.5;

  double weight(const std::array<double, 3>& z) const {
    double w = 1.0;
    for (std::size_t k = 0; k < axes_.size(); ++k) w *= axes_[k].weight(z[k]);
    return w;
  }

  bool singular_corner(const Box& box) const {
    if (fixed_r2_ != 0.0) return false;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
      if (box.lo[k] != 0.0 && box.hi[k] != 0.0) return false;
    }
    return true;
  }

  // Box has a corner at z = 0; split into one pyramid per axis, pyramid m
  // being the region where the normalised coordinate t_m is the largest.
  double duffy(const Box& box) const {
    const std::size_t d = axes_.size();
    std::array<double, 3> len{}, dir{};
    double volume = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      len[k] = box.hi[k] - box.lo[k];
      dir[k] = box.lo[k] == 0.0 ? 1.0 : -1.0;
      volume *= len[k];
    }
    const std::size_t n = rule_.order();
    const std::size_t inner = d == 3 ? n * n : n;
    double sum = 0.0;
    for (std::size_t m = 0; m < d; ++m) {
      for (std::size_t iu = 0; iu < n; ++iu) {
        const double u = rule_.nodes[iu];
        for (std::size_t iv = 0; iv < inner; ++iv) {
          std::array<double, 3> t{};
          double wv = 1.0;
          std::size_t code = iv;
          for (std::size_t k = 0; k < d; ++k) {
            if (k == m) {
              t[k] = 1.0;
              continue;
            }
            t[k] = rule_.nodes[code % n];
            wv *= rule_.weights[code % n];
            code /= n;
          }
          // |z| = u * s; the Jacobian u^(d-1) cancels the singular factor.
          double s2 = 0.0;
          std::array<double, 3> z{};
          for (std::size_t k = 0; k < d; ++k) {
            const double zk = len[k] * t[k];
            s2 += zk * zk;
            z[k] = dir[k] * u * zk;
          }
          const double regular = (d == 3 ? u : 1.0) / std::sqrt(s2);
          sum += rule_.weights[iu] * wv * regular * weight(z);
        }
      }
    }
    return sum * volume;
  }

  double graded(const Box& box, int depth) const {
    const std::size_t d = axes_.size();
    double dist2 = fixed_r2_, diam2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double gap = std::max({0.0, box.lo[k], -box.hi[k]});
      dist2 += gap * gap;
      diam2 += (box.hi[k] - box.lo[k]) * (box.hi[k] - box.lo[k]);
    }
    if (depth >= kMaxDepth || dist2 >= kSeparation * kSeparation * diam2) return tensor(box);

    double sum = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
      Box child;
      for (std::size_t k = 0; k < d; ++k) {
        const double mid = 0.5 * (box.lo[k] + box.hi[k]);
        const bool upper = (corner >> k) & 1;
        child.lo[k] = upper ? mid : box.lo[k];
        child.hi[k] = upper ? box.hi[k] : mid;
      }
      sum += graded(child, depth + 1);
    }
    return sum;
  }

  double tensor(const Box& box) const {
    const std::size_t d = axes_.size();
    const std::size_t n = rule_.order();
    std::size_t total = 1;
    double volume = 1.0;
    for (std::size_t k = 0; k < d; ++k) total *= n, volume *= box.hi[k] - box.lo[k];
    double sum = 0.0;
    for (std::size_t code = 0; code < total; ++code) {
      std::array<double, 3> z{};
      double w = 1.0, r2 = fixed_r2_;
      std::size_t c = code;
      for (std::size_t k = 0; k < d; ++k) {
        const std::size_t i = c % n;
        c /= n;
        z[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * rule_.nodes[i];
        w *= rule_.weights[i];
        r2 += z[k] * z[k];
      }
      sum += w * weight(z) / std::sqrt(r2);
    }
    return sum * volume;
  }

  const GaussRule& rule_;
  std::vector<FreeAxis> axes_;
  double fixed_r2_ = 0.0;
  double snap_ = 0.0;
};

}  // namespace

double pair_integral_near(const Panel& p, const Panel& q, const GaussRule& rule) {
  return NearIntegrator(p, q, rule).integrate();
}

}  // namespace hmbem
