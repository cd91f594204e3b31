#include "stpp/secorder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "stpp/kvfile.hpp"

namespace stpp {

namespace {

constexpr std::array<std::pair<EdgeCorrection, const char*>, 5> kCorrections{{
    {EdgeCorrection::None, "none"},
    {EdgeCorrection::Isotropic, "isotropic"},
    {EdgeCorrection::Border, "border"},
    {EdgeCorrection::ModifiedBorder, "modified_border"},
    {EdgeCorrection::Translation, "translation"},
}};

bool border_family(EdgeCorrection c) { return c == EdgeCorrection::Border || c == EdgeCorrection::ModifiedBorder; }

// Calls visit(i, candidates) for every event with the indices j != i that
// may lie within reach_s in space, in ascending order. Candidates are a
// superset of the true neighbours; callers apply the exact distance test.
template <class Visit>
void for_each_neighbourhood(const PointPattern& p, double reach_s, bool brute, Visit&& visit) {
  const std::size_t n = p.size();
  std::vector<std::size_t> cand;
  cand.reserve(n);
  if (brute || n < 2) {
    for (std::size_t i = 0; i < n; ++i) {
      cand.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) cand.push_back(j);
      }
      visit(i, cand);
    }
    return;
  }

  const STWindow& w = p.window();
  auto bins_for = [&](double len) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::min(len / reach_s, 1024.0)));
  };
  const std::size_t nbx = bins_for(w.x().length()), nby = bins_for(w.y().length());
  const double cx = w.x().length() / static_cast<double>(nbx), cy = w.y().length() / static_cast<double>(nby);
  auto bin_x = [&](double x) {
    return std::min(nbx - 1, static_cast<std::size_t>(std::max(0.0, (x - w.x().lo) / cx)));
  };
  auto bin_y = [&](double y) {
    return std::min(nby - 1, static_cast<std::size_t>(std::max(0.0, (y - w.y().lo) / cy)));
  };

  std::vector<std::size_t> start(nbx * nby + 1, 0), order(n), bin(n);
  for (std::size_t i = 0; i < n; ++i) {
    bin[i] = bin_x(p[i].sx) * nby + bin_y(p[i].sy);
    ++start[bin[i] + 1];
  }
  for (std::size_t b = 1; b < start.size(); ++b) start[b] += start[b - 1];
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (std::size_t i = 0; i < n; ++i) order[fill[bin[i]]++] = i;

  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    const auto bx = static_cast<long>(bin_x(p[i].sx)), by = static_cast<long>(bin_y(p[i].sy));
    for (long x = bx - 1; x <= bx + 1; ++x) {
      if (x < 0 || x >= static_cast<long>(nbx)) continue;
      for (long y = by - 1; y <= by + 1; ++y) {
        if (y < 0 || y >= static_cast<long>(nby)) continue;
        const std::size_t b = static_cast<std::size_t>(x) * nby + static_cast<std::size_t>(y);
        for (std::size_t k = start[b]; k < start[b + 1]; ++k) {
          if (order[k] != i) cand.push_back(order[k]);
        }
      }
    }
    std::sort(cand.begin(), cand.end());
    visit(i, cand);
  }
}

// Shared state of both estimators.
struct Setup {
  const PointPattern& p;
  std::span<const double> lambda;
  EdgeCorrection corr;
  const EvalGrid& grid;
  // Border families: event i is eligible at (k, l) iff k < elig_u[i] and l < elig_v[i].
  std::vector<std::size_t> elig_u, elig_v;

  Setup(const PointPattern& pat, std::span<const double> lam, EdgeCorrection c, const EvalGrid& g)
      : p(pat), lambda(lam), corr(c), grid(g) {
    if (lam.size() != pat.size()) throw std::invalid_argument("one intensity value per event is required");
    for (std::size_t i = 0; i < lam.size(); ++i) {
      if (!(lam[i] > 0.0) || !std::isfinite(lam[i])) {
        throw std::invalid_argument("intensity at event " + std::to_string(i) + " is not strictly positive");
      }
    }
    if (border_family(c)) {
      elig_u.resize(pat.size());
      elig_v.resize(pat.size());
      for (std::size_t i = 0; i < pat.size(); ++i) {
        const double ds = boundary_dist_spatial(pat[i], pat.window());
        const double dt = boundary_dist_temporal(pat[i].t, pat.window());
        elig_u[i] = static_cast<std::size_t>(std::lower_bound(g.u().begin(), g.u().end(), ds) - g.u().begin());
        elig_v[i] = static_cast<std::size_t>(std::lower_bound(g.v().begin(), g.v().end(), dt) - g.v().begin());
      }
    }
  }

  bool eligible(std::size_t i, std::size_t k, std::size_t l) const { return k < elig_u[i] && l < elig_v[i]; }

  // 1 / w_ij for the (u, v)-free weights; 1 for the border families, whose
  // weight is applied per cell afterwards.
  double inverse_weight(std::size_t i, std::size_t j, double d) const {
    const STWindow& w = p.window();
    switch (corr) {
      case EdgeCorrection::None: return 1.0 / w.volume();
      case EdgeCorrection::Isotropic: {
        const double ws = circle_proportion_inside(p[i].sx, p[i].sy, d, w);
        if (!(ws > 0.0)) return 0.0;
        return 1.0 / (w.volume() * temporal_weight(p[i].t, p[j].t, w.t()) * ws);
      }
      case EdgeCorrection::Translation: {
        const auto o = translation_overlap(w, p[i].sx - p[j].sx, p[i].sy - p[j].sy, p[i].t - p[j].t);
        const double wt = o.area * o.duration;
        return wt > 0.0 ? 1.0 / wt : 0.0;
      }
      case EdgeCorrection::Border:
      case EdgeCorrection::ModifiedBorder: return 1.0;
    }
    return 1.0;
  }

  // Divides the raw double sums by the per-cell border weights.
  void finish_border(Matrix& m) const {
    const std::size_t nu = grid.nu(), nv = grid.nv();
    if (corr == EdgeCorrection::Border) {
      Matrix denom(nu, nv, 0.0);
      std::vector<std::size_t> count(nu * nv, 0);
      for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t k = 0; k < elig_u[i]; ++k) {
          for (std::size_t l = 0; l < elig_v[i]; ++l) {
            denom(k, l) += 1.0 / lambda[i];
            ++count[k * nv + l];
          }
        }
      }
      for (std::size_t k = 0; k < nu; ++k) {
        for (std::size_t l = 0; l < nv; ++l) m(k, l) = count[k * nv + l] ? m(k, l) / denom(k, l) : kMissing;
      }
    } else if (corr == EdgeCorrection::ModifiedBorder) {
      for (std::size_t k = 0; k < nu; ++k) {
        for (std::size_t l = 0; l < nv; ++l) {
          const auto e = erode(p.window(), grid.u()[k], grid.v()[l]);
          m(k, l) = e ? m(k, l) / e->volume() : kMissing;
        }
      }
    }
  }
};

}  // namespace

std::string correction_name(EdgeCorrection c) {
  for (const auto& [k, name] : kCorrections) {
    if (k == c) return name;
  }
  return "?";
}

std::optional<EdgeCorrection> parse_correction(const std::string& s) {
  for (const auto& [k, name] : kCorrections) {
    if (s == name) return k;
  }
  return std::nullopt;
}

const std::vector<EdgeCorrection>& all_corrections() {
  static const std::vector<EdgeCorrection> all{EdgeCorrection::Isotropic, EdgeCorrection::Border,
                                               EdgeCorrection::ModifiedBorder, EdgeCorrection::Translation,
                                               EdgeCorrection::None};
  return all;
}

std::vector<std::string> correction_names() {
  std::vector<std::string> out;
  for (auto c : all_corrections()) out.push_back(correction_name(c));
  return out;
}

std::string statistic_name(Statistic s) { return s == Statistic::K ? "k" : "g"; }

std::optional<Statistic> parse_statistic(const std::string& s) {
  if (s == "k" || s == "K") return Statistic::K;
  if (s == "g" || s == "G") return Statistic::G;
  return std::nullopt;
}

std::vector<double> intensity_at_events(const PointPattern& p, const IntensityModel& intensity) {
  std::vector<double> lam(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    lam[i] = intensity(p[i]);
    if (!(lam[i] > 0.0) || !std::isfinite(lam[i])) {
      throw std::invalid_argument("intensity at event " + std::to_string(i) + " is not strictly positive");
    }
  }
  return lam;
}

double pair_weight(const STPoint& xi, const STPoint& xj, const STWindow& w, EdgeCorrection corr, double u,
                   double v, const PointPattern& pattern, const IntensityModel& intensity) {
  auto eligible = [&](const STPoint& x) {
    return boundary_dist_spatial(x, w) > u && boundary_dist_temporal(x.t, w) > v;
  };
  switch (corr) {
    case EdgeCorrection::None: return w.volume();
    case EdgeCorrection::Isotropic: {
      const double d = std::hypot(xi.sx - xj.sx, xi.sy - xj.sy);
      return w.volume() * temporal_weight(xi.t, xj.t, w.t()) * circle_proportion_inside(xi.sx, xi.sy, d, w);
    }
    case EdgeCorrection::Translation: {
      const auto o = translation_overlap(w, xi.sx - xj.sx, xi.sy - xj.sy, xi.t - xj.t);
      return o.area * o.duration;
    }
    case EdgeCorrection::Border: {
      double sum = 0.0;
      bool any = false;
      for (const auto& x : pattern.points()) {
        if (eligible(x)) {
          sum += 1.0 / intensity(x);
          any = true;
        }
      }
      if (!any) return kMissing;
      return eligible(xi) ? sum : std::numeric_limits<double>::infinity();
    }
    case EdgeCorrection::ModifiedBorder: {
      const auto e = erode(w, u, v);
      if (!e) return kMissing;
      return eligible(xi) ? e->volume() : std::numeric_limits<double>::infinity();
    }
  }
  return kMissing;
}

Surface k_hat(const PointPattern& p, std::span<const double> lambda, EdgeCorrection corr, const EvalGrid& grid,
              const std::string& intensity_source, EstimatorOptions opt) {
  const Setup s(p, lambda, corr, grid);
  const std::size_t nu = grid.nu(), nv = grid.nv();
  const double umax = grid.u().back(), vmax = grid.v().back();
  const bool border = border_family(corr);
  Matrix total(nu, nv, 0.0), local(nu, nv, 0.0);

  for_each_neighbourhood(p, umax, opt.brute_force, [&](std::size_t i, const std::vector<std::size_t>& cand) {
    bool touched = false;
    for (std::size_t j : cand) {
      const double d = std::hypot(p[i].sx - p[j].sx, p[i].sy - p[j].sy);
      const double dt = std::abs(p[i].t - p[j].t);
      if (d > umax || dt > vmax) continue;
      const auto a = static_cast<std::size_t>(std::lower_bound(grid.u().begin(), grid.u().end(), d) - grid.u().begin());
      const auto b = static_cast<std::size_t>(std::lower_bound(grid.v().begin(), grid.v().end(), dt) - grid.v().begin());
      local(a, b) += s.inverse_weight(i, j, d) / (lambda[i] * lambda[j]);
      touched = true;
    }
    if (!touched) return;
    // Cumulative sums turn the pair histogram into indicator sums.
    for (std::size_t k = 0; k < nu; ++k) {
      for (std::size_t l = 1; l < nv; ++l) local(k, l) += local(k, l - 1);
    }
    for (std::size_t k = 1; k < nu; ++k) {
      for (std::size_t l = 0; l < nv; ++l) local(k, l) += local(k - 1, l);
    }
    for (std::size_t k = 0; k < nu; ++k) {
      for (std::size_t l = 0; l < nv; ++l) {
        if (!border || s.eligible(i, k, l)) total(k, l) += local(k, l);
      }
    }
    std::fill(local.data().begin(), local.data().end(), 0.0);
  });

  s.finish_border(total);
  return Surface{Statistic::K, grid, std::move(total), corr, intensity_source};
}

Surface k_hat(const PointPattern& p, const IntensityModel& intensity, EdgeCorrection corr, const EvalGrid& grid,
              const std::string& intensity_source, EstimatorOptions opt) {
  const auto lam = intensity_at_events(p, intensity);
  return k_hat(p, lam, corr, grid, intensity_source, opt);
}

Surface g_hat(const PointPattern& p, std::span<const double> lambda, EdgeCorrection corr, const EvalGrid& grid,
              double hs, double ht, const std::string& intensity_source, EstimatorOptions opt) {
  if (!(hs > 0.0) || !(ht > 0.0)) throw std::invalid_argument("g-hat kernel bandwidths must be positive");
  const Setup s(p, lambda, corr, grid);
  const std::size_t nu = grid.nu(), nv = grid.nv();
  const auto& U = grid.u();
  const auto& V = grid.v();
  const double reach_s = U.back() + hs, reach_t = V.back() + ht;
  const double box = 1.0 / (4.0 * hs * ht);
  const bool border = border_family(corr);
  Matrix total(nu, nv, 0.0);

  for_each_neighbourhood(p, reach_s, opt.brute_force, [&](std::size_t i, const std::vector<std::size_t>& cand) {
    for (std::size_t j : cand) {
      const double d = std::hypot(p[i].sx - p[j].sx, p[i].sy - p[j].sy);
      const double dt = std::abs(p[i].t - p[j].t);
      if (d > reach_s || dt > reach_t) continue;
      double c = -1.0;
      for (std::size_t k = 0; k < nu; ++k) {
        if (U[k] - hs > d) break;
        if (std::abs(U[k] - d) > hs) continue;
        for (std::size_t l = 0; l < nv; ++l) {
          if (V[l] - ht > dt) break;
          if (std::abs(V[l] - dt) > ht) continue;
          if (border && !s.eligible(i, k, l)) continue;
          if (c < 0.0) c = s.inverse_weight(i, j, d) * box / (lambda[i] * lambda[j]);
          total(k, l) += c;
        }
      }
    }
  });

  for (std::size_t k = 0; k < nu; ++k) {
    for (std::size_t l = 0; l < nv; ++l) total(k, l) /= 4.0 * std::numbers::pi * U[k];
  }
  s.finish_border(total);
  for (std::size_t k = 0; k < nu; ++k) {
    if (U[k] < hs) {
      for (std::size_t l = 0; l < nv; ++l) total(k, l) = kMissing;
    }
  }
  return Surface{Statistic::G, grid, std::move(total), corr, intensity_source};
}

Surface g_hat(const PointPattern& p, const IntensityModel& intensity, EdgeCorrection corr, const EvalGrid& grid,
              double hs, double ht, const std::string& intensity_source, EstimatorOptions opt) {
  const auto lam = intensity_at_events(p, intensity);
  return g_hat(p, lam, corr, grid, hs, ht, intensity_source, opt);
}

Surface k_from_g(const Surface& g) {
  if (g.statistic != Statistic::G) throw std::invalid_argument("k_from_g expects a g surface");
  const auto& U = g.grid.u();
  const auto& V = g.grid.v();
  const std::size_t nu = U.size(), nv = V.size();
  // inner(k, l) = int_0^{u_k} g(u', v_l) u' du'
  Matrix inner(nu, nv, 0.0);
  for (std::size_t l = 0; l < nv; ++l) {
    double acc = 0.5 * U[0] * (g.values(0, l) * U[0]);
    inner(0, l) = acc;
    for (std::size_t k = 1; k < nu; ++k) {
      acc += 0.5 * (U[k] - U[k - 1]) * (g.values(k, l) * U[k] + g.values(k - 1, l) * U[k - 1]);
      inner(k, l) = acc;
    }
  }
  Matrix out(nu, nv, 0.0);
  for (std::size_t k = 0; k < nu; ++k) {
    double acc = V[0] * inner(k, 0);
    out(k, 0) = 4.0 * std::numbers::pi * acc;
    for (std::size_t l = 1; l < nv; ++l) {
      acc += 0.5 * (V[l] - V[l - 1]) * (inner(k, l) + inner(k, l - 1));
      out(k, l) = 4.0 * std::numbers::pi * acc;
    }
  }
  return Surface{Statistic::K, g.grid, std::move(out), g.correction, g.intensity_source};
}

void write_surface_csv(std::ostream& out, const Surface& s, bool header) {
  if (header) out << "u,v,value,statistic,correction,intensity_source\n";
  const std::string stat = statistic_name(s.statistic), corr = correction_name(s.correction);
  // The source tag may contain commas only in theory; quote when needed.
  std::string src = s.intensity_source;
  if (src.find_first_of(",\"") != std::string::npos) {
    std::string q = "\"";
    for (char c : src) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    src = q + "\"";
  }
  for (std::size_t k = 0; k < s.grid.nu(); ++k) {
    for (std::size_t l = 0; l < s.grid.nv(); ++l) {
      out << format_double(s.grid.u()[k]) << ',' << format_double(s.grid.v()[l]) << ','
          << format_double(s.values(k, l)) << ',' << stat << ',' << corr << ',' << src << '\n';
    }
  }
}

}  // namespace stpp
