#pragma once

// Finite-dimensional convex state spaces. Every variant is polyhedral and
// lowers to a LinearSystem; Simplex stays a distinct variant so closed-form
// ensemble code can recognise it.

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "entroad/linear_system.hpp"

namespace entroad {

using State = Vector;

inline State make_state(std::initializer_list<double> xs) {
  State s(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) s[i++] = x;
  return s;
}

inline constexpr double kTolMembership = 1e-9;
inline constexpr double kTolStrict = 1e-9;

/// a . x = rhs
struct Hyperplane {
  std::vector<double> a;
  double rhs = 0.0;
  bool operator==(const Hyperplane&) const = default;
};

/// a . x <= rhs, or a . x < rhs when strict.
struct HalfSpace {
  std::vector<double> a;
  double rhs = 0.0;
  bool strict = false;
  bool operator==(const HalfSpace&) const = default;
};

class ConvexSpace {
 public:
  struct Polyhedron {
    std::size_t dim = 0;
    std::vector<Hyperplane> eq;
    std::vector<HalfSpace> ineq;
    bool operator==(const Polyhedron&) const = default;
  };
  /// Probability distributions on {0..n}; ambient dimension n+1.
  struct Simplex {
    std::size_t n = 0;
  };
  /// Strictly positive coordinates.
  struct Orthant {
    std::size_t n = 0;
  };
  struct RealLine {
    std::size_t n = 0;
  };
  struct Singleton {};
  struct Product {
    std::shared_ptr<const ConvexSpace> left;
    std::shared_ptr<const ConvexSpace> right;
  };
  using Variant = std::variant<Polyhedron, Simplex, Orthant, RealLine, Singleton, Product>;

  ConvexSpace() : v_(Singleton{}) {}

  static ConvexSpace polyhedron(std::size_t dim, std::vector<Hyperplane> eq, std::vector<HalfSpace> ineq);
  static ConvexSpace simplex(std::size_t n) { return ConvexSpace(Simplex{n}); }
  static ConvexSpace orthant(std::size_t n) { return ConvexSpace(Orthant{n}); }
  static ConvexSpace real_line(std::size_t n) { return ConvexSpace(RealLine{n}); }
  static ConvexSpace point() { return ConvexSpace(Singleton{}); }

  const Variant& variant() const { return v_; }
  std::size_t dim() const { return dim_; }

  /// Optional coordinate names, echoed in output. Empty or dim() long.
  const std::vector<std::string>& labels() const { return labels_; }
  ConvexSpace with_labels(std::vector<std::string> labels) const;

  /// Appends this space's defining constraints on variables [first, first+dim()).
  void lower(LinearSystem& sys, std::size_t first) const;

  /// Human-readable structural description, e.g. "orthant(3) x real(1)".
  std::string describe() const;

  friend ConvexSpace product(const ConvexSpace& a, const ConvexSpace& b);

 private:
  explicit ConvexSpace(Variant v);
  Variant v_;
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
};

/// Left-nested binary product; ambient dimensions add.
ConvexSpace product(const ConvexSpace& a, const ConvexSpace& b);

/// Left-nested product of a list; the empty product is the point.
ConvexSpace product(const std::vector<ConvexSpace>& factors);

/// Structural equality up to the canonical identifications: products are
/// flattened, point factors dropped, and orthant/real-line blocks split into
/// unit factors. Labels are ignored.
bool same_space(const ConvexSpace& a, const ConvexSpace& b);

/// Coordinate labels after flattening; unnamed coordinates get prefix + index.
std::vector<std::string> coordinate_labels(const ConvexSpace& s, const std::string& prefix);

/// Membership within kTolMembership per constraint (strict rows exact).
/// Throws DomainError on a coordinate-count mismatch.
bool contains(const ConvexSpace& s, const State& x, double tol = kTolMembership);

/// lambda*x + (1-lambda)*y; projections at lambda in {0, 1}.
State combine(const ConvexSpace& s, double lambda, const State& x, const State& y);

struct BoundingBox {
  Vector lo;
  Vector hi;
  static BoundingBox uniform(std::size_t dim, double lo, double hi);
};

/// Attempts per returned point before sample() gives up.
inline constexpr int kSampleRetryCap = 10000;

/// Deterministic pseudo-random members of s inside region. Simplex factors
/// draw from the flat Dirichlet; factors with equalities project box draws
/// onto their affine hull. Throws SamplingError when retries run out.
std::vector<State> sample(const ConvexSpace& s, const BoundingBox& region, std::uint64_t seed,
                          std::size_t count);

}  // namespace entroad
