#include "curvelab/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

#include "curvelab/io.hpp"
#include "curvelab/kernels.hpp"

namespace curvelab::zoo {

namespace {

using nlohmann::json;

std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n) {
  if (n < 1) throw std::invalid_argument("matrix dimension must be positive");
  if (a.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("matrix size does not match dimension");
  }
  auto at = [&](int r, int c) -> double& { return a[r * n + c]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = at(i, i);
  return eig;
}

std::string fmt(double v) { return io::format_double(v); }

std::string fmt_list(const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += fmt(v[i]);
  }
  return out;
}

json params_json(const std::map<std::string, Vec>& params) {
  json p = json::object();
  for (const auto& [k, v] : params) {
    if (v.size() == 1) {
      p[k] = v[0];
    } else {
      p[k] = v;
    }
  }
  return p;
}

double parse_number(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == nullptr || *end != '\0' || text.empty()) {
    throw std::invalid_argument("malformed number '" + text + "'");
  }
  return v;
}

Vec parse_list(const std::string& text) {
  Vec out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = (comma == std::string::npos) ? text.size() : comma;
    out.push_back(parse_number(text.substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

double max_eigenvalue_sym(std::vector<double> a_rowmajor, int n) {
  const auto eig = jacobi_eigenvalues(std::move(a_rowmajor), n);
  return *std::max_element(eig.begin(), eig.end());
}

ObjectiveFunction quadratic_diag(const Vec& diag, const Vec& b) {
  const std::size_t n = diag.size();
  if (n == 0) throw std::invalid_argument("diagonal must be nonempty");
  if (b.size() != n) throw std::invalid_argument("b dimension mismatch");
  for (double d : diag) {
    if (d < 0.0) throw std::invalid_argument("diagonal quadratic must be PSD");
  }

  ObjectiveFunction f;
  f.name = "quad_d=" + fmt_list(diag) + "_b=" + fmt_list(b);
  f.dimension = static_cast<int>(n);
  f.smoothness_L = *std::max_element(diag.begin(), diag.end());
  if (f.smoothness_L <= 0.0) {
    throw std::invalid_argument("quadratic needs a positive top eigenvalue");
  }
  f.is_convex = true;
  f.params = {{"d", diag}, {"b", b}};
  f.value = [diag, b](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
      acc += 0.5 * diag[i] * x[i] * x[i] + b[i] * x[i];
    }
    return acc;
  };
  f.gradient = [diag, b](std::span<const double> x) {
    Vec g(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) g[i] = diag[i] * x[i] + b[i];
    return g;
  };
  f.hessian_action = [diag](std::span<const double>, std::span<const double> v) {
    Vec out(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) out[i] = diag[i] * v[i];
    return out;
  };
  f.analytic.gd_iterate = [diag, b](const Vec& x0, double eta, long steps) {
    Vec x(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) {
      if (diag[i] > 0.0) {
        const double xstar = -b[i] / diag[i];
        x[i] = xstar + std::pow(1.0 - eta * diag[i], static_cast<double>(steps)) *
                           (x0[i] - xstar);
      } else {
        x[i] = x0[i] - static_cast<double>(steps) * eta * b[i];
      }
    }
    return x;
  };
  f.analytic.flow_state = [diag, b](const Vec& x0, double t) {
    Vec x(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) {
      if (diag[i] > 0.0) {
        const double xstar = -b[i] / diag[i];
        x[i] = xstar + std::exp(-diag[i] * t) * (x0[i] - xstar);
      } else {
        x[i] = x0[i] - t * b[i];
      }
    }
    return x;
  };
  bool bounded = true;
  double min_value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (diag[i] > 0.0) {
      min_value -= b[i] * b[i] / (2.0 * diag[i]);
    } else if (b[i] != 0.0) {
      bounded = false;
    }
  }
  if (bounded) f.analytic.min_value = min_value;
  return f;
}

ObjectiveFunction quadratic(const std::vector<double>& a_rowmajor, const Vec& b) {
  const std::size_t n = b.size();
  if (n == 0) throw std::invalid_argument("b must be nonempty");
  if (a_rowmajor.size() != n * n) {
    throw std::invalid_argument("matrix size does not match b");
  }
  double amax = 0.0;
  for (double v : a_rowmajor) amax = std::max(amax, std::abs(v));
  bool diagonal = true;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double arc = a_rowmajor[r * n + c];
      if (std::abs(arc - a_rowmajor[c * n + r]) > 1e-12 * (1.0 + amax)) {
        throw std::invalid_argument("matrix must be symmetric");
      }
      if (r != c && arc != 0.0) diagonal = false;
    }
  }
  if (diagonal) {
    Vec diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a_rowmajor[i * n + i];
    return quadratic_diag(diag, b);
  }

  const auto eig = jacobi_eigenvalues(a_rowmajor, static_cast<int>(n));
  const double lmax = *std::max_element(eig.begin(), eig.end());
  const double lmin = *std::min_element(eig.begin(), eig.end());
  if (lmin < -1e-10 * std::max(1.0, lmax)) {
    throw std::invalid_argument("matrix must be PSD");
  }
  if (lmax <= 0.0) {
    throw std::invalid_argument("quadratic needs a positive top eigenvalue");
  }

  ObjectiveFunction f;
  f.name = "quad_dense_n=" + std::to_string(n);
  f.dimension = static_cast<int>(n);
  f.smoothness_L = lmax;
  f.is_convex = true;
  const std::vector<double> a = a_rowmajor;
  f.value = [a, b](std::span<const double> x) {
    Vec ax(b.size());
    kernels::symv(a, x, ax);
    return 0.5 * kernels::dot(x, ax) + kernels::dot(b, x);
  };
  f.gradient = [a, b](std::span<const double> x) {
    Vec g(b.size());
    kernels::symv(a, x, g);
    kernels::axpy(g, g, 1.0, b);
    return g;
  };
  f.hessian_action = [a, n](std::span<const double>, std::span<const double> v) {
    Vec out(n);
    kernels::symv(a, v, out);
    return out;
  };
  return f;
}

ObjectiveFunction square() {
  ObjectiveFunction f;
  f.name = "square";
  f.dimension = 1;
  f.smoothness_L = 2.0;
  f.is_convex = true;
  f.value = [](std::span<const double> x) { return x[0] * x[0]; };
  f.gradient = [](std::span<const double> x) { return Vec{2.0 * x[0]}; };
  f.hessian_action = [](std::span<const double>, std::span<const double> v) {
    return Vec{2.0 * v[0]};
  };
  f.analytic.gd_iterate = [](const Vec& x0, double eta, long steps) {
    return Vec{x0[0] * std::pow(1.0 - 2.0 * eta, static_cast<double>(steps))};
  };
  f.analytic.flow_state = [](const Vec& x0, double t) {
    return Vec{x0[0] * std::exp(-2.0 * t)};
  };
  f.analytic.min_value = 0.0;
  return f;
}

ObjectiveFunction huber_counterexample() {
  ObjectiveFunction f;
  f.name = "huber_l=1";
  f.dimension = 1;
  f.smoothness_L = 1.0;
  f.is_convex = true;
  f.params = {{"l", {1.0}}};
  // The breakpoint t = 1 belongs to the quadratic branch; both branches
  // agree there in value and derivative.
  f.value = [](std::span<const double> x) {
    const double t = x[0];
    return t <= 1.0 ? 0.5 * t * t : t - 0.5;
  };
  f.gradient = [](std::span<const double> x) {
    const double t = x[0];
    return Vec{t <= 1.0 ? t : 1.0};
  };
  return f;
}

ObjectiveFunction abs_plus_relu() {
  ObjectiveFunction f;
  f.name = "absrelu";
  f.dimension = 1;
  f.smoothness_L = kUnboundedSmoothness;
  f.is_convex = true;
  f.kinks = {0.0};
  f.value = [](std::span<const double> x) {
    return std::abs(x[0]) + std::max(0.0, x[0]);
  };
  f.gradient = [](std::span<const double> x) {
    const double t = x[0];
    if (t < 0.0) return Vec{-1.0};
    if (t > 0.0) return Vec{2.0};
    return Vec{0.0};  // subgradient choice at the kink
  };
  f.analytic.min_value = 0.0;
  return f;
}

ObjectiveFunction log_sum_exp(const std::vector<Vec>& rows, const Vec& offsets) {
  const std::size_t m = rows.size();
  if (m == 0) throw std::invalid_argument("log_sum_exp needs at least one row");
  const std::size_t n = rows[0].size();
  if (n == 0) throw std::invalid_argument("rows must be nonempty");
  for (const Vec& r : rows) {
    if (r.size() != n) throw std::invalid_argument("row dimension mismatch");
  }
  if (offsets.size() != m) throw std::invalid_argument("offsets size mismatch");

  std::vector<double> gram(n * n, 0.0);
  for (const Vec& r : rows) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gram[i * n + j] += r[i] * r[j];
  }
  const double lmax = max_eigenvalue_sym(gram, static_cast<int>(n));

  auto softmax = [rows, offsets](std::span<const double> x) {
    Vec z(rows.size());
    double zmax = -kUnboundedSmoothness;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      z[i] = kernels::dot(rows[i], x) + offsets[i];
      zmax = std::max(zmax, z[i]);
    }
    double total = 0.0;
    for (double& zi : z) {
      zi = std::exp(zi - zmax);
      total += zi;
    }
    for (double& zi : z) zi /= total;
    return std::pair<Vec, double>{std::move(z), zmax + std::log(total)};
  };

  ObjectiveFunction f;
  f.name = "lse_m=" + std::to_string(m) + "_n=" + std::to_string(n);
  f.dimension = static_cast<int>(n);
  f.smoothness_L = lmax;
  f.is_convex = true;
  f.value = [softmax](std::span<const double> x) { return softmax(x).second; };
  f.gradient = [softmax, rows, n](std::span<const double> x) {
    const Vec p = softmax(x).first;
    Vec g(n, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) g[j] += p[i] * rows[i][j];
    }
    return g;
  };
  f.hessian_action = [softmax, rows, n](std::span<const double> x,
                                        std::span<const double> v) {
    const Vec p = softmax(x).first;
    Vec s(rows.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      s[i] = kernels::dot(rows[i], v);
      mean += p[i] * s[i];
    }
    Vec out(n, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double w = p[i] * (s[i] - mean);
      for (std::size_t j = 0; j < n; ++j) out[j] += w * rows[i][j];
    }
    return out;
  };
  return f;
}

ObjectiveFunction log_sum_exp() {
  ObjectiveFunction f = log_sum_exp(
      {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}, {0.6, 0.8}},
      Vec(5, 0.0));
  f.name = "lse";
  return f;
}

ObjectiveFunction random_convex_1d(std::uint64_t seed, int pieces) {
  if (pieces < 2) throw std::invalid_argument("pieces must be at least 2");
  const std::size_t k = static_cast<std::size_t>(pieces);

  Rng rng(seed);
  Vec knots(k), slopes(k);
  double lmax = 0.0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (double& v : knots) v = rng.uniform(-5.0, 5.0);
    std::sort(knots.begin(), knots.end());
    bool spaced = true;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      if (knots[j + 1] - knots[j] < 1e-6) spaced = false;
    }
    if (!spaced) continue;
    for (double& v : slopes) v = rng.uniform(-10.0, 10.0);
    std::sort(slopes.begin(), slopes.end());
    lmax = 0.0;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      lmax = std::max(lmax, (slopes[j + 1] - slopes[j]) / (knots[j + 1] - knots[j]));
    }
    if (lmax > 1e-9) break;
  }
  if (lmax <= 1e-9) throw std::runtime_error("degenerate random objective");

  // Antiderivative of the piecewise-linear slope function, anchored so the
  // value at 0 is 0. Exact per segment (trapezoid of a linear function).
  Vec cumulative(k, 0.0);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    cumulative[j + 1] = cumulative[j] + 0.5 * (slopes[j] + slopes[j + 1]) *
                                            (knots[j + 1] - knots[j]);
  }
  auto antiderivative = [knots, slopes, cumulative](double x) {
    if (x <= knots.front()) {
      return cumulative.front() + slopes.front() * (x - knots.front());
    }
    if (x >= knots.back()) {
      return cumulative.back() + slopes.back() * (x - knots.back());
    }
    const std::size_t j =
        static_cast<std::size_t>(
            std::upper_bound(knots.begin(), knots.end(), x) - knots.begin()) -
        1;
    const double m = (slopes[j + 1] - slopes[j]) / (knots[j + 1] - knots[j]);
    const double dx = x - knots[j];
    return cumulative[j] + slopes[j] * dx + 0.5 * m * dx * dx;
  };
  const double anchor = antiderivative(0.0);

  ObjectiveFunction f;
  f.name = "random1d_seed=" + std::to_string(seed) +
           "_pieces=" + std::to_string(pieces);
  f.dimension = 1;
  f.smoothness_L = lmax;
  f.is_convex = true;
  f.params = {{"pieces", {static_cast<double>(pieces)}}};
  f.value = [antiderivative, anchor](std::span<const double> x) {
    return antiderivative(x[0]) - anchor;
  };
  f.gradient = [knots, slopes](std::span<const double> x) {
    const double t = x[0];
    if (t <= knots.front()) return Vec{slopes.front()};
    if (t >= knots.back()) return Vec{slopes.back()};
    const std::size_t j =
        static_cast<std::size_t>(
            std::upper_bound(knots.begin(), knots.end(), t) - knots.begin()) -
        1;
    const double w = (t - knots[j]) / (knots[j + 1] - knots[j]);
    return Vec{slopes[j] + w * (slopes[j + 1] - slopes[j])};
  };
  return f;
}

ObjectiveFunction rescale(const ObjectiveFunction& f, double new_smoothness) {
  if (!f.has_finite_smoothness()) {
    throw std::domain_error("cannot rescale an objective without finite smoothness");
  }
  if (new_smoothness <= 0.0) {
    throw std::invalid_argument("target smoothness must be positive");
  }
  const double scale = std::sqrt(new_smoothness / f.smoothness_L);
  ObjectiveFunction g = f;
  g.smoothness_L = new_smoothness;
  if (scale == 1.0) return g;

  g.name = "rescale(" + f.name + ",L=" + fmt(new_smoothness) + ")";
  const int dim = f.dimension;
  auto scaled = [scale, dim](std::span<const double> x) {
    Vec y(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) y[i] = scale * x[i];
    return y;
  };
  g.value = [base = f.value, scaled](std::span<const double> x) {
    return base(scaled(x));
  };
  g.gradient = [base = f.gradient, scaled, scale](std::span<const double> x) {
    Vec grad = base(scaled(x));
    for (double& v : grad) v *= scale;
    return grad;
  };
  if (f.has_hessian_action()) {
    g.hessian_action = [base = f.hessian_action, scaled,
                        scale](std::span<const double> x,
                               std::span<const double> v) {
      Vec out = base(scaled(x), v);
      for (double& w : out) w *= scale * scale;
      return out;
    };
  }
  g.kinks.clear();
  for (double kink : f.kinks) g.kinks.push_back(kink / scale);
  const double eta_ratio = new_smoothness / f.smoothness_L;
  if (f.analytic.has_gd()) {
    g.analytic.gd_iterate = [base = f.analytic.gd_iterate, scale, eta_ratio,
                             dim](const Vec& x0, double eta, long steps) {
      Vec y0(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) y0[i] = scale * x0[i];
      Vec yn = base(y0, eta * eta_ratio, steps);
      for (double& v : yn) v /= scale;
      return yn;
    };
  }
  if (f.analytic.has_flow()) {
    g.analytic.flow_state = [base = f.analytic.flow_state, scale, eta_ratio,
                             dim](const Vec& x0, double t) {
      Vec y0(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) y0[i] = scale * x0[i];
      Vec yt = base(y0, t * eta_ratio);
      for (double& v : yt) v /= scale;
      return yt;
    };
  }
  return g;
}

ObjectiveFunction make_counterexample(double smoothness) {
  if (smoothness <= 0.0) {
    throw std::invalid_argument("smoothness must be positive");
  }
  ObjectiveFunction base = huber_counterexample();
  if (smoothness == 1.0) return base;
  ObjectiveFunction g = rescale(base, smoothness);
  g.name = "huber_l=" + fmt(smoothness);
  g.params = {{"l", {smoothness}}};
  return g;
}

bool gradient_check(const ObjectiveFunction& f, const std::vector<Vec>& points,
                    double tol) {
  if (points.empty()) throw std::invalid_argument("no points to check");
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  for (const Vec& p : points) {
    if (p.size() != static_cast<std::size_t>(f.dimension)) {
      throw std::invalid_argument("point dimension mismatch");
    }
    const double h = 1e-5 * (1.0 + kernels::norm(p));
    bool near_kink = false;
    if (f.dimension == 1) {
      for (double kink : f.kinks) {
        if (std::abs(p[0] - kink) <= h) near_kink = true;
      }
    }
    if (near_kink) continue;
    const Vec g = f.gradient(p);
    Vec fd(p.size());
    Vec xp = p, xm = p;
    for (std::size_t i = 0; i < p.size(); ++i) {
      xp[i] = p[i] + h;
      xm[i] = p[i] - h;
      fd[i] = (f.value(xp) - f.value(xm)) / (2.0 * h);
      xp[i] = p[i];
      xm[i] = p[i];
    }
    Vec diff(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) diff[i] = fd[i] - g[i];
    if (kernels::norm(diff) > tol * (1.0 + kernels::norm(g))) return false;
  }
  return true;
}

ObjectiveFunction from_id(const std::string& id) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= id.size()) {
    const std::size_t us = id.find('_', start);
    const std::size_t end = (us == std::string::npos) ? id.size() : us;
    tokens.push_back(id.substr(start, end - start));
    if (us == std::string::npos) break;
    start = us + 1;
  }
  if (tokens.empty() || tokens[0].empty()) {
    throw std::invalid_argument("empty function id");
  }
  const std::string& base = tokens[0];
  std::map<std::string, std::string> kv;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::size_t eq = tokens[i].find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("malformed parameter '" + tokens[i] + "'");
    }
    kv[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  auto reject_unknown = [&kv, &base](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : kv) {
      if (std::find_if(allowed.begin(), allowed.end(), [&k](const char* a) {
            return k == a;
          }) == allowed.end()) {
        throw std::invalid_argument("unknown parameter '" + k + "' for '" +
                                    base + "'");
      }
    }
  };

  if (base == "square") {
    reject_unknown({});
    return square();
  }
  if (base == "huber") {
    reject_unknown({"l"});
    const double l = kv.count("l") ? parse_number(kv.at("l")) : 1.0;
    return make_counterexample(l);
  }
  if (base == "absrelu") {
    reject_unknown({});
    return abs_plus_relu();
  }
  if (base == "lse") {
    reject_unknown({});
    return log_sum_exp();
  }
  if (base == "quad") {
    reject_unknown({"d", "b"});
    if (!kv.count("d")) throw std::invalid_argument("quad requires d=...");
    const Vec d = parse_list(kv.at("d"));
    const Vec b = kv.count("b") ? parse_list(kv.at("b")) : Vec(d.size(), 0.0);
    return quadratic_diag(d, b);
  }
  if (base == "random1d") {
    reject_unknown({"seed", "pieces"});
    std::uint64_t seed = 1;
    if (kv.count("seed")) seed = std::stoull(kv.at("seed"));
    int pieces = 8;
    if (kv.count("pieces")) pieces = static_cast<int>(std::stol(kv.at("pieces")));
    return random_convex_1d(seed, pieces);
  }
  throw std::invalid_argument("unknown function id '" + id + "'");
}

std::string describe(const ObjectiveFunction& f) {
  json j;
  j["name"] = f.name;
  j["dimension"] = f.dimension;
  if (f.has_finite_smoothness()) {
    j["L"] = f.smoothness_L;
  } else {
    j["L"] = nullptr;
  }
  j["params"] = params_json(f.params);
  return j.dump();
}

}  // namespace curvelab::zoo
