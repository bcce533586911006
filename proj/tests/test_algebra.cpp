#include <gtest/gtest.h>

#include <random>

#include "tpval/algebra/extensions.hpp"

using namespace tpval;

namespace {

QPoly expand(const std::vector<QFactor>& fs) {
  QPoly r{Rational(1)};
  for (auto& f : fs)
    for (int i = 0; i < f.multiplicity; ++i) r = poly::mul(QQ, r, f.factor);
  return r;
}

// Irreducibility oracle for degree <= 3: no rational roots (rational root test).
bool has_rational_root(const QPoly& f) {
  auto [z, c] = primitive_part(f);
  Integer a0 = abs(z[0]), an = abs(z.back());
  if (a0 == 0) return true;
  for (Integer p = 1; p <= a0; ++p) {
    if (a0 % p != 0) continue;
    for (Integer q = 1; q <= an; ++q) {
      if (an % q != 0) continue;
      for (int s : {1, -1}) {
        Rational r = make_rational(s * p, q);
        if (poly::eval(QQ, f, r) == 0) return true;
      }
    }
  }
  return false;
}

}  // namespace

TEST(FactorOverQ, SmallCases) {
  auto f1 = factor_over_Q(qpoly({-1, 0, 1}));
  ASSERT_EQ(f1.size(), 2u);
  EXPECT_EQ(f1[0].factor, qpoly({-1, 1}));
  EXPECT_EQ(f1[1].factor, qpoly({1, 1}));

  auto f2 = factor_over_Q(qpoly({1, 0, 1}));
  ASSERT_EQ(f2.size(), 1u);
  EXPECT_EQ(f2[0].factor, qpoly({1, 0, 1}));

  auto f3 = factor_over_Q(qpoly({-4, 0, 0, 0, 1}));
  ASSERT_EQ(f3.size(), 2u);
  EXPECT_EQ(expand(f3), qpoly({-4, 0, 0, 0, 1}));
  for (auto& f : f3) EXPECT_FALSE(has_rational_root(f.factor));
  EXPECT_EQ(f3[0].factor, qpoly({-2, 0, 1}));
  EXPECT_EQ(f3[1].factor, qpoly({2, 0, 1}));

  EXPECT_THROW(factor_over_Q({}), PreconditionError);
}

TEST(FactorOverQ, ExpansionPropertyOnProducts) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 40; ++trial) {
    QPoly f{Rational(3)};
    int nf = 1 + trial % 3;
    for (int j = 0; j < nf; ++j) {
      QPoly g;
      int d = 1 + (trial + j) % 3;
      for (int i = 0; i < d; ++i) g.emplace_back(coef(rng));
      g.emplace_back(1);
      f = poly::mul(QQ, f, g);
    }
    auto fs = factor_over_Q(f);
    EXPECT_EQ(poly::scale(QQ, expand(fs), f.back()), f);
    for (auto& fac : fs) {
      EXPECT_EQ(fac.factor.back(), 1);
      int d = poly::degree<RationalField>(fac.factor);
      if (d > 1 && d <= 3) {
        EXPECT_FALSE(has_rational_root(fac.factor));
      }
    }
  }
}

TEST(FactorOverQ, CyclotomicAndSwinnertonDyer) {
  // x^8 - 1 = (x-1)(x+1)(x^2+1)(x^4+1)
  auto fs = factor_over_Q(qpoly({-1, 0, 0, 0, 0, 0, 0, 0, 1}));
  EXPECT_EQ(fs.size(), 4u);
  // x^4 - 10x^2 + 1 is irreducible but splits mod every prime.
  EXPECT_TRUE(is_irreducible_over_Q(qpoly({1, 0, -10, 0, 1})));
  // (x^2 - 2)^2 (x + 3)
  auto g = poly::mul(QQ, poly::mul(QQ, qpoly({-2, 0, 1}), qpoly({-2, 0, 1})), qpoly({3, 1}));
  auto gs = factor_over_Q(g);
  ASSERT_EQ(gs.size(), 2u);
  EXPECT_EQ(gs[0].multiplicity, 1);
  EXPECT_EQ(gs[1].multiplicity, 2);
}

TEST(FiniteFields, CanonicalModulusAndFactoring) {
  EXPECT_EQ(canonical_modulus(5, 2), (FpPoly{2, 0, 1}));  // x^2 + 2: first non-square shift
  GaloisField f25(5, 2);
  // t^2 - 2 splits over F_25 (2 is a non-square mod 5).
  auto roots = roots_finite(f25, lift_to_gf(f25, FpPoly{3, 0, 1}));
  EXPECT_EQ(roots.size(), 2u);
  PrimeField f5(5);
  EXPECT_TRUE(is_irreducible_finite(f5, FpPoly{3, 0, 1}));
  GaloisField f4(2, 2);
  auto r4 = roots_finite(f4, lift_to_gf(f4, FpPoly{1, 1, 1}));
  EXPECT_EQ(r4.size(), 2u);
  // Inseparable input over F_2: (x+1)^4.
  PrimeField f2(2);
  auto fac = factor_finite(f2, FpPoly{1, 0, 0, 0, 1});
  ASSERT_EQ(fac.size(), 1u);
  EXPECT_EQ(fac[0].multiplicity, 4);
}

TEST(NumberFields, ConstructionAndMinimalPolynomial) {
  EXPECT_THROW(NumberField(qpoly({-1, 0, 1}), "bad"), PreconditionError);
  NumberField qi(qpoly({1, 0, 1}), "Q(i)");
  EXPECT_EQ(qi.minimal_polynomial(qi.generator()), qpoly({1, 0, 1}));
  EXPECT_EQ(qi.minimal_polynomial(qi.from_rational(Rational(3, 2))), (QPoly{Rational(-3, 2), Rational(1)}));
  NumberField bq(qpoly({1, 0, -10, 0, 1}), "Q(sqrt2,sqrt3)");
  EXPECT_EQ(bq.minimal_polynomial(bq.generator()), qpoly({1, 0, -10, 0, 1}));
  // sqrt2 = (a^3 - 9a)/2 has minpoly x^2 - 2
  QPoly sqrt2{Rational(0), Rational(-9, 2), Rational(0), Rational(1, 2)};
  EXPECT_EQ(bq.minimal_polynomial(sqrt2), qpoly({-2, 0, 1}));
}

TEST(NumberFields, FieldAxiomsOnRandomElements) {
  NumberField k(qpoly({1, 1, 1, 1, 1}), "Q(zeta5)");
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-4, 4);
  auto rnd = [&] {
    QPoly a;
    for (int i = 0; i < 4; ++i) a.push_back(make_rational(c(rng), 1 + (c(rng) + 4) % 3));
    poly::trim(QQ, a);
    return a;
  };
  for (int t = 0; t < 30; ++t) {
    auto a = rnd(), b = rnd(), d = rnd();
    EXPECT_EQ(k.mul(k.mul(a, b), d), k.mul(a, k.mul(b, d)));
    EXPECT_EQ(k.mul(a, k.add(b, d)), k.add(k.mul(a, b), k.mul(a, d)));
    if (!a.empty()) {
      EXPECT_EQ(k.mul(a, k.inv(a)), k.one());
    }
  }
}

TEST(SplittingFields, QuadraticsAndBiquadratic) {
  auto s1 = splitting_field(qpoly({1, 0, 1}));
  EXPECT_EQ(s1.field.degree(), 2);
  ASSERT_EQ(s1.roots.size(), 2u);
  auto s2 = splitting_field(qpoly({-2, 0, 1}));
  EXPECT_EQ(s2.field.degree(), 2);
  auto f = poly::mul(QQ, qpoly({-2, 0, 1}), qpoly({-3, 0, 1}));
  auto s3 = splitting_field(f);
  EXPECT_EQ(s3.field.minpoly(), qpoly({1, 0, -10, 0, 1}));
  ASSERT_EQ(s3.roots.size(), 4u);
  // prod (x - r) equals f in the splitting field.
  auto prod = poly::from_roots(s3.field, s3.roots);
  EXPECT_EQ(prod, to_kpoly(s3.field, f));
}

TEST(SplittingFields, NonAbelianCubicAndDegreeBound) {
  auto s = splitting_field(qpoly({-2, 0, 0, 1}));
  EXPECT_EQ(s.field.degree(), 6);
  EXPECT_EQ(s.roots.size(), 3u);
  EXPECT_EQ(poly::from_roots(s.field, s.roots), to_kpoly(s.field, qpoly({-2, 0, 0, 1})));
  EXPECT_EQ(automorphisms(s.field).size(), 6u);
  EXPECT_THROW(splitting_field(qpoly({1, 0, 0, 0, 0, 0, 0, 1})), ResourceError);
}

TEST(Automorphisms, GroupStructure) {
  NumberField qi(qpoly({1, 0, 1}), "Q(i)");
  auto ai = automorphisms(qi);
  ASSERT_EQ(ai.size(), 2u);
  EXPECT_EQ(ai[1].image_of_generator(), qi.neg(qi.generator()));

  NumberField bq(qpoly({1, 0, -10, 0, 1}), "Q(sqrt2,sqrt3)");
  auto g = automorphisms(bq);
  ASSERT_EQ(g.size(), 4u);
  for (auto& s : g) {
    EXPECT_EQ(s.after(s), FieldEmbedding::identity(bq));  // Klein four-group
    for (auto& t : g) {
      auto st = s.after(t);
      EXPECT_TRUE(std::find(g.begin(), g.end(), st) != g.end());
      EXPECT_EQ(st, t.after(s));
    }
    // minimal polynomials are Galois-invariant
    QPoly x{Rational(1), Rational(2), Rational(0), Rational(-1, 3)};
    EXPECT_EQ(bq.minimal_polynomial(s.apply(x)), bq.minimal_polynomial(x));
  }
  EXPECT_EQ(automorphisms(NumberField::rationals()).size(), 1u);
  NumberField cube(qpoly({-2, 0, 0, 1}), "Q(cbrt2)");
  EXPECT_THROW(automorphisms(cube), PreconditionError);
}

TEST(Automorphisms, Relative) {
  NumberField bq(qpoly({1, 0, -10, 0, 1}), "Q(sqrt2,sqrt3)");
  NumberField q2(qpoly({-2, 0, 1}), "Q(sqrt2)");
  auto emb = find_embedding(q2, bq);
  ASSERT_TRUE(emb);
  auto rel = relative_automorphisms(bq, *emb);
  EXPECT_EQ(rel.size(), 2u);
  EXPECT_EQ(relative_automorphisms(bq, FieldEmbedding::identity(bq)).size(), 1u);
  auto q_in = *find_embedding(NumberField::rationals(), bq);
  EXPECT_EQ(relative_automorphisms(bq, q_in).size(), 4u);
}

TEST(FactorOverField, TragerOverQuadratic) {
  NumberField q2(qpoly({-2, 0, 1}), "Q(sqrt2)");
  // x^4 - 4 = (x - s)(x + s)(x^2 + 2) over Q(sqrt2)
  auto fs = factor_over_field(q2, to_kpoly(q2, qpoly({-4, 0, 0, 0, 1})));
  EXPECT_EQ(fs.size(), 3u);
  EXPECT_TRUE(is_irreducible_over(q2, to_kpoly(q2, qpoly({-3, 0, 1}))));
}
