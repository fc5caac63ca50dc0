#include "jigglekit/perturbation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "jigglekit/error.hpp"
#include "jigglekit/shape.hpp"
#include "jigglekit/transversality.hpp"

namespace jigglekit {

namespace {

constexpr std::array<int, 12> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

struct PreparedFlat {
  int quotient;
  Eigen::VectorXd base;
  Matrix basis;
};

struct Scorer {
  std::vector<Matrix> proj;  // (n-k) x n per quotient
  std::vector<PreparedFlat> flats;
  Point center;
  double eps;

  double flat_margin(const Point& x) const {
    double best = std::numeric_limits<double>::infinity();
    std::vector<Eigen::VectorXd> px(proj.size());
    for (size_t u = 0; u < proj.size(); ++u) px[u] = proj[u] * x;
    for (const auto& f : flats) {
      Eigen::VectorXd r = px[f.quotient] - f.base;
      if (f.basis.cols() > 0) r -= f.basis * (f.basis.transpose() * r);
      best = std::min(best, r.norm());
    }
    return best;
  }
  double score(const Point& x) const {
    return std::min(eps - (x - center).norm(), flat_margin(x));
  }
};

}  // namespace

AvoidResult avoid_flats(const Point& p, double eps, const std::vector<QuotientFlats>& quotients,
                        const std::optional<AffineFlat>& h, std::uint64_t seed, int samples,
                        double max_shift) {
  const int n = static_cast<int>(p.size());
  if (max_shift <= 0.0) max_shift = eps;
  max_shift = std::min(max_shift, eps);
  Matrix dirs = h ? h->direction.basis() : Matrix(Matrix::Identity(n, n));
  const int dim = static_cast<int>(dirs.cols());

  Scorer sc;
  sc.center = p;
  sc.eps = eps;
  for (size_t u = 0; u < quotients.size(); ++u) {
    const auto& q = quotients[u];
    const Matrix proj = q.v.complement().transpose();
    const int domain_dim = numerical_rank(proj * dirs);
    for (const auto& f : q.flats) {
      if (f.direction.rank() >= domain_dim)
        throw Error(ErrorCode::InfeasibleDimensions,
                    "flat dimension not below the projected search dimension");
      sc.flats.push_back({static_cast<int>(u), f.base, f.direction.basis()});
    }
    sc.proj.push_back(proj);
  }
  AvoidResult best{p, sc.score(p)};
  if (sc.flats.empty()) return {p, eps};

  auto consider = [&](const Point& x) {
    if ((x - p).norm() > max_shift) return;
    const double s = sc.score(x);
    if (s > best.delta) best = {x, s};
  };

  // seeded low-discrepancy candidates in the admissible ball
  std::uint64_t state = seed;
  std::vector<double> shift(static_cast<size_t>(dim));
  for (auto& s : shift) s = unit_double(state);
  int accepted = 0;
  for (std::uint64_t i = 1; accepted < samples && i < static_cast<std::uint64_t>(samples) * 64; ++i) {
    Eigen::VectorXd c(dim);
    for (int j = 0; j < dim; ++j) {
      double u = radical_inverse(i, kPrimes[static_cast<size_t>(j) % kPrimes.size()]) + shift[static_cast<size_t>(j)];
      u -= std::floor(u);
      c(j) = 2.0 * u - 1.0;
    }
    if (c.norm() > 1.0) continue;
    ++accepted;
    consider(p + max_shift * (dirs * c));
  }

  // coordinate refinement, three rounds with shrinking step
  double step = max_shift / 8.0;
  for (int round = 0; round < 3; ++round, step /= 8.0) {
    for (int sweep = 0; sweep < 64; ++sweep) {
      bool improved = false;
      for (int j = 0; j < dim; ++j)
        for (double sgn : {1.0, -1.0}) {
          const Point x = best.p + sgn * step * dirs.col(j);
          const double before = best.delta;
          consider(x);
          improved = improved || best.delta > before;
        }
      if (!improved) break;
    }
  }
  best.delta = std::max(0.0, std::min(best.delta, eps - (best.p - p).norm()));
  return best;
}

PerturbationResult perturb_vertex(const PerturbationRequest& req) {
  const int n = static_cast<int>(req.p.size());
  if (!(req.budget > 0.0)) throw Error(ErrorCode::PreconditionViolated, "budget must be positive");
  const size_t nf = req.foliations.size();
  const size_t ns = req.star_simplices.size();
  std::vector<std::vector<int>> pairing = req.pairing;
  if (pairing.empty()) {
    pairing.assign(nf, {});
    for (size_t u = 0; u < nf; ++u)
      for (size_t s = 0; s < ns; ++s) pairing[u].push_back(static_cast<int>(s));
  }
  if (pairing.size() != nf)
    throw Error(ErrorCode::PreconditionViolated, "pairing must list every foliation");

  const int hdim = req.constraint ? req.constraint->direction.rank() : n;
  if (req.constraint) {
    if (point_flat_distance(req.p, *req.constraint) > 1e-12 * std::max(1.0, req.p.norm()))
      throw Error(ErrorCode::PreconditionViolated, "p must lie on the constraint flat");
    for (const auto& v : req.foliations)
      if (!is_transverse_planes(req.constraint->direction, v))
        throw Error(ErrorCode::PreconditionViolated, "constraint flat not transverse");
  }

  // admitted join dimensions per foliation
  std::vector<int> dmax(nf);
  int stages = 0;
  for (size_t u = 0; u < nf; ++u) {
    const int codim = n - req.foliations[u].rank();
    dmax[u] = (req.constraint && hdim <= codim) ? hdim : codim;
    stages = std::max(stages, dmax[u]);
  }
  struct Pair {
    int simplex, foliation, dim;
  };
  std::vector<Pair> pairs;
  for (size_t u = 0; u < nf; ++u)
    for (int s : pairing[u]) {
      const auto& simp = req.star_simplices[static_cast<size_t>(s)];
      const int d = static_cast<int>(simp.size());  // join dimension
      if (d > dmax[u]) continue;
      if (simp.size() > 1 && !simplex_transverse(simp, req.foliations[u]))
        throw Error(ErrorCode::StarNotTransverse, "star simplex not transverse to foliation");
      pairs.push_back({s, static_cast<int>(u), d});
    }

  auto certificate_at = [&](const Point& x, double* min_margin) {
    std::vector<CertificateEntry> cert;
    double m = std::numeric_limits<double>::infinity();
    for (const auto& pr : pairs) {
      const double d = semitrans_margin(x, req.star_simplices[static_cast<size_t>(pr.simplex)],
                                        req.foliations[static_cast<size_t>(pr.foliation)]);
      cert.push_back({pr.simplex, pr.foliation, d});
      m = std::min(m, d);
    }
    *min_margin = m;
    return cert;
  };

  PerturbationResult res;
  double inc_margin = 0.0;
  auto inc_cert = certificate_at(req.p, &inc_margin);
  if (req.accept_incumbent_above >= 0.0 && inc_margin > 0.0 &&
      inc_margin >= req.accept_incumbent_above) {
    res.p = req.p;
    res.kept_incumbent = true;
    res.achieved_delta = std::min(req.budget, inc_margin);
    res.certificate = std::move(inc_cert);
    double r = req.budget;
    for (int d = 1; d <= stages; ++d) {
      for (const auto& c : res.certificate)
        if (pairs[&c - res.certificate.data()].dim == d) r = std::min(r, c.margin);
      res.per_dimension.push_back(r);
    }
    return res;
  }

  Point center = req.p;
  double radius = req.budget;
  for (int d = 1; d <= stages; ++d) {
    std::vector<QuotientFlats> quotients;
    for (size_t u = 0; u < nf; ++u) {
      QuotientFlats q{req.foliations[u], {}};
      for (const auto& pr : pairs) {
        if (pr.foliation != static_cast<int>(u) || pr.dim != d) continue;
        const auto& simp = req.star_simplices[static_cast<size_t>(pr.simplex)];
        const auto proj = project_along(q.v, simp);
        Matrix e(proj[0].size(), static_cast<Eigen::Index>(proj.size()) - 1);
        for (size_t i = 1; i < proj.size(); ++i)
          e.col(static_cast<Eigen::Index>(i) - 1) = proj[i] - proj[0];
        const int m = static_cast<int>(e.rows());
        q.flats.push_back({proj[0], e.cols() ? plane_span(e) : Plane(m, Matrix(m, 0))});
      }
      if (!q.flats.empty()) quotients.push_back(std::move(q));
    }
    if (!quotients.empty() && radius > 0.0) {
      const auto r = avoid_flats(center, radius, quotients, req.constraint,
                                 req.seed * 1000003ULL + static_cast<std::uint64_t>(d), req.samples,
                                 radius / 2.0);
      center = r.p;
      radius = r.delta;
    }
    res.per_dimension.push_back(radius);
  }
  res.p = center;
  double final_margin = 0.0;
  res.certificate = certificate_at(center, &final_margin);
  res.achieved_delta = std::max(
      0.0, std::min({radius, final_margin, req.budget - (center - req.p).norm()}));
  return res;
}

}  // namespace jigglekit
