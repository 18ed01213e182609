#include "entroad/convex.hpp"

#include <sstream>

#include "entroad/errors.hpp"
#include "entroad/random.hpp"

namespace entroad {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::size_t compute_dim(const ConvexSpace::Variant& v) {
  return std::visit(overloaded{
                        [](const ConvexSpace::Polyhedron& p) { return p.dim; },
                        [](const ConvexSpace::Simplex& s) { return s.n + 1; },
                        [](const ConvexSpace::Orthant& o) { return o.n; },
                        [](const ConvexSpace::RealLine& r) { return r.n; },
                        [](const ConvexSpace::Singleton&) { return std::size_t{0}; },
                        [](const ConvexSpace::Product& p) { return p.left->dim() + p.right->dim(); },
                    },
                    v);
}

// Flattened canonical atom list used by same_space().
struct Atom {
  enum Kind { poly, simplex, orthant, real } kind;
  std::size_t n = 0;
  const ConvexSpace::Polyhedron* poly_data = nullptr;

  bool operator==(const Atom& o) const {
    if (kind != o.kind || n != o.n) return false;
    if (kind == poly) return *poly_data == *o.poly_data;
    return true;
  }
};

void flatten(const ConvexSpace& s, std::vector<Atom>& out) {
  std::visit(overloaded{
                 [&](const ConvexSpace::Polyhedron& p) { out.push_back({Atom::poly, p.dim, &p}); },
                 [&](const ConvexSpace::Simplex& p) { out.push_back({Atom::simplex, p.n, nullptr}); },
                 [&](const ConvexSpace::Orthant& p) {
                   for (std::size_t i = 0; i < p.n; ++i) out.push_back({Atom::orthant, 1, nullptr});
                 },
                 [&](const ConvexSpace::RealLine& p) {
                   for (std::size_t i = 0; i < p.n; ++i) out.push_back({Atom::real, 1, nullptr});
                 },
                 [&](const ConvexSpace::Singleton&) {},
                 [&](const ConvexSpace::Product& p) {
                   flatten(*p.left, out);
                   flatten(*p.right, out);
                 },
             },
             s.variant());
}

void check_dim(const ConvexSpace& s, const State& x, const char* who) {
  if (static_cast<std::size_t>(x.size()) != s.dim()) {
    std::ostringstream msg;
    msg << who << ": state has " << x.size() << " coordinates, space " << s.describe() << " has " << s.dim();
    throw DomainError(msg.str());
  }
}

void collect_labels(const ConvexSpace& s, std::vector<std::string>& out, const std::string& prefix) {
  if (!s.labels().empty()) {
    out.insert(out.end(), s.labels().begin(), s.labels().end());
    return;
  }
  if (const auto* p = std::get_if<ConvexSpace::Product>(&s.variant())) {
    collect_labels(*p->left, out, prefix);
    collect_labels(*p->right, out, prefix);
    return;
  }
  for (std::size_t i = 0; i < s.dim(); ++i) out.push_back(prefix + std::to_string(out.size()));
}

// One member of s inside [lo, hi] (coordinates offset..offset+dim), or false.
bool sample_one(const ConvexSpace& s, const BoundingBox& box, Eigen::Index offset, Rng& rng, State& out) {
  const auto d = static_cast<Eigen::Index>(s.dim());
  if (const auto* p = std::get_if<ConvexSpace::Product>(&s.variant())) {
    const auto dl = static_cast<Eigen::Index>(p->left->dim());
    State l, r;
    if (!sample_one(*p->left, box, offset, rng, l) || !sample_one(*p->right, box, offset + dl, rng, r)) return false;
    out.resize(d);
    out << l, r;
    return true;
  }

  State x(d);
  if (std::holds_alternative<ConvexSpace::Simplex>(s.variant())) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) total += (x[i] = rng.exponential());
    x /= total;
  } else {
    for (Eigen::Index i = 0; i < d; ++i) x[i] = rng.uniform(box.lo[offset + i], box.hi[offset + i]);
    if (const auto* poly = std::get_if<ConvexSpace::Polyhedron>(&s.variant()); poly && !poly->eq.empty()) {
      Matrix a(static_cast<Eigen::Index>(poly->eq.size()), d);
      Vector b(a.rows());
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < d; ++c) a(r, c) = poly->eq[static_cast<std::size_t>(r)].a[static_cast<std::size_t>(c)];
        b[r] = poly->eq[static_cast<std::size_t>(r)].rhs;
      }
      x -= a.completeOrthogonalDecomposition().solve(a * x - b);
    }
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (x[i] < box.lo[offset + i] || x[i] > box.hi[offset + i]) return false;
  }
  if (!contains(s, x)) return false;
  out = std::move(x);
  return true;
}

}  // namespace

ConvexSpace::ConvexSpace(Variant v) : v_(std::move(v)) { dim_ = compute_dim(v_); }

ConvexSpace ConvexSpace::polyhedron(std::size_t dim, std::vector<Hyperplane> eq, std::vector<HalfSpace> ineq) {
  for (const auto& h : eq) {
    if (h.a.size() != dim) throw DomainError("polyhedron: equality coefficient vector length != dim");
  }
  for (const auto& h : ineq) {
    if (h.a.size() != dim) throw DomainError("polyhedron: inequality coefficient vector length != dim");
  }
  return ConvexSpace(Polyhedron{dim, std::move(eq), std::move(ineq)});
}

ConvexSpace ConvexSpace::with_labels(std::vector<std::string> labels) const {
  if (!labels.empty() && labels.size() != dim_) throw DomainError("with_labels: label count != dimension");
  ConvexSpace s = *this;
  s.labels_ = std::move(labels);
  return s;
}

void ConvexSpace::lower(LinearSystem& sys, std::size_t first) const {
  std::visit(overloaded{
                 [&](const Polyhedron& p) {
                   for (const auto& h : p.eq) {
                     LinearRow row{{}, h.rhs, Sense::eq};
                     for (std::size_t i = 0; i < p.dim; ++i)
                       if (h.a[i] != 0.0) row.terms.emplace_back(first + i, h.a[i]);
                     sys.add_row(std::move(row));
                   }
                   for (const auto& h : p.ineq) {
                     LinearRow row{{}, h.rhs, h.strict ? Sense::lt : Sense::le};
                     for (std::size_t i = 0; i < p.dim; ++i)
                       if (h.a[i] != 0.0) row.terms.emplace_back(first + i, h.a[i]);
                     sys.add_row(std::move(row));
                   }
                 },
                 [&](const Simplex& s) {
                   LinearRow total{{}, 1.0, Sense::eq};
                   for (std::size_t i = 0; i <= s.n; ++i) total.terms.emplace_back(first + i, 1.0);
                   sys.add_row(std::move(total));
                   for (std::size_t i = 0; i <= s.n; ++i) sys.add_row({{{first + i, -1.0}}, 0.0, Sense::le});
                 },
                 [&](const Orthant& o) {
                   for (std::size_t i = 0; i < o.n; ++i) sys.add_row({{{first + i, -1.0}}, 0.0, Sense::lt});
                 },
                 [](const RealLine&) {},
                 [](const Singleton&) {},
                 [&](const Product& p) {
                   p.left->lower(sys, first);
                   p.right->lower(sys, first + p.left->dim());
                 },
             },
             v_);
}

std::string ConvexSpace::describe() const {
  return std::visit(overloaded{
                        [](const Polyhedron& p) {
                          return "polyhedron(dim=" + std::to_string(p.dim) + ", eq=" + std::to_string(p.eq.size()) +
                                 ", ineq=" + std::to_string(p.ineq.size()) + ")";
                        },
                        [](const Simplex& s) { return "simplex(" + std::to_string(s.n) + ")"; },
                        [](const Orthant& o) { return "orthant(" + std::to_string(o.n) + ")"; },
                        [](const RealLine& r) { return "real(" + std::to_string(r.n) + ")"; },
                        [](const Singleton&) { return std::string("point"); },
                        [](const Product& p) { return "(" + p.left->describe() + " x " + p.right->describe() + ")"; },
                    },
                    v_);
}

ConvexSpace product(const ConvexSpace& a, const ConvexSpace& b) {
  return ConvexSpace(
      ConvexSpace::Product{std::make_shared<const ConvexSpace>(a), std::make_shared<const ConvexSpace>(b)});
}

ConvexSpace product(const std::vector<ConvexSpace>& factors) {
  if (factors.empty()) return ConvexSpace::point();
  ConvexSpace acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = product(acc, factors[i]);
  return acc;
}

bool same_space(const ConvexSpace& a, const ConvexSpace& b) {
  std::vector<Atom> fa, fb;
  flatten(a, fa);
  flatten(b, fb);
  return fa == fb;
}

std::vector<std::string> coordinate_labels(const ConvexSpace& s, const std::string& prefix) {
  std::vector<std::string> out;
  collect_labels(s, out, prefix);
  return out;
}

bool contains(const ConvexSpace& s, const State& x, double tol) {
  check_dim(s, x, "contains");
  LinearSystem sys;
  sys.add_vars(s.dim());
  s.lower(sys, 0);
  return sys.satisfied_by(x, tol);
}

State combine(const ConvexSpace& s, double lambda, const State& x, const State& y) {
  check_dim(s, x, "combine");
  check_dim(s, y, "combine");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("combine: lambda outside [0, 1]");
  if (!contains(s, x) || !contains(s, y)) throw DomainError("combine: operand outside " + s.describe());
  if (lambda == 1.0) return x;
  if (lambda == 0.0 || x == y) return y;
  return lambda * x + (1.0 - lambda) * y;
}

BoundingBox BoundingBox::uniform(std::size_t dim, double lo, double hi) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {Vector::Constant(d, lo), Vector::Constant(d, hi)};
}

std::vector<State> sample(const ConvexSpace& s, const BoundingBox& region, std::uint64_t seed, std::size_t count) {
  const auto d = static_cast<Eigen::Index>(s.dim());
  if (region.lo.size() != d || region.hi.size() != d) throw DomainError("sample: region dimension mismatch");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!std::isfinite(region.lo[i]) || !std::isfinite(region.hi[i]) || region.lo[i] > region.hi[i])
      throw DomainError("sample: region must be a finite box");
  }
  Rng rng(seed);
  std::vector<State> out;
  out.reserve(count);
  while (out.size() < count) {
    State x;
    bool ok = false;
    for (int attempt = 0; attempt < kSampleRetryCap && !ok; ++attempt) ok = sample_one(s, region, 0, rng, x);
    if (!ok) {
      throw SamplingError("sample: no member of " + s.describe() + " found in region after " +
                          std::to_string(kSampleRetryCap) + " attempts");
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace entroad
