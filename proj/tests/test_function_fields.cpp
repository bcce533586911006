#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "tpval/function_fields/handles.hpp"

using namespace tpval;

namespace {

NumberField field(std::initializer_list<long> c, const std::string& label) { return NumberField(qpoly(c), label); }

const NumberField Q = NumberField::rationals();
const NumberField Qi = field({1, 0, 1}, "Q(i)");
const NumberField Qr2 = field({-2, 0, 1}, "Q(sqrt2)");
const NumberField Qz8 = field({1, 0, 0, 0, 1}, "Q(zeta8)");
const NumberField Qz7p = field({-1, -2, 1, 1}, "Q(zeta7)+");

FFElem rat(const NumberField& k, std::initializer_list<long> num, std::initializer_list<long> den = {1}) {
  FunctionField f(k);
  return f.make(to_kpoly(k, qpoly(num)), to_kpoly(k, qpoly(den)));
}

ResiduePlace fp_place(std::int64_t p, std::initializer_list<long> c) {
  GaloisField k(p, 1);
  Poly<GaloisField> g;
  for (long x : c) g.push_back(k.from_int(x));
  return ResiduePlace::finite(g);
}

FFHandle gauss_p(std::int64_t p) { return FFHandle::gauss(rational_padic(p)); }

// Independent arithmetic mod p on integer coefficient vectors.
using Vec = std::vector<long>;
long md(long a, long p) { return ((a % p) + p) % p; }
void strip(Vec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
long inv_mod(long a, long p) {
  for (long x = 1; x < p; ++x)
    if (md(a * x, p) == 1) return x;
  return 0;
}
bool divmod_p(Vec& a, const Vec& b, long p) {
  Vec q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0), r = a;
  long li = inv_mod(b.back(), p);
  while (r.size() >= b.size()) {
    long c = md(r.back() * li, p);
    std::size_t s = r.size() - b.size();
    q[s] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[s + i] = md(r[s + i] - c * b[i], p);
    strip(r);
  }
  if (!r.empty()) return false;
  strip(q);
  a = q;
  return true;
}
int mult_p(Vec a, const Vec& g, long p) {
  int m = 0;
  while (divmod_p(a, g, p)) ++m;
  return m;
}
long vp_long(long c, long p) {
  long v = 0;
  while (c % p == 0) c /= p, ++v;
  return v;
}
// (min v_p of coefficients, reduction of the poly divided by p^min).
std::pair<long, Vec> normalize(const Vec& a, long p) {
  long m = 1000;
  for (long c : a)
    if (c) m = std::min(m, vp_long(c, p));
  Vec r;
  for (long c : a) {
    long x = c;
    for (long i = 0; i < m; ++i) x /= p;
    r.push_back(md(x, p));
  }
  strip(r);
  return {m, r};
}

Membership oracle_membership(const Vec& num, const Vec& den, long p, const Vec& g, bool infinite) {
  auto [vn, rn] = normalize(num, p);
  auto [vd, rd] = normalize(den, p);
  long v = vn - vd;
  if (v != 0) return v > 0 ? Membership::InMaximalIdeal : Membership::OutsideRing;
  long o = infinite ? static_cast<long>(rd.size()) - static_cast<long>(rn.size())
                    : mult_p(rn, g, p) - mult_p(rd, g, p);
  return o > 0 ? Membership::InMaximalIdeal : (o == 0 ? Membership::Unit : Membership::OutsideRing);
}

FFElem from_vecs(const Vec& num, const Vec& den) {
  QPoly n, d;
  for (long c : num) n.emplace_back(c);
  for (long c : den) d.emplace_back(c);
  poly::trim(QQ, n);
  poly::trim(QQ, d);
  return FunctionField(Q).make(to_kpoly(Q, n), to_kpoly(Q, d));
}

Vec random_vec(std::mt19937_64& rng, int deg, long p) {
  std::uniform_int_distribution<long> c(-30, 30), e(0, 2);
  Vec r;
  for (int i = 0; i <= deg; ++i) {
    long x = c(rng);
    for (long j = e(rng); j > 0; --j) x *= p;
    r.push_back(x);
  }
  if (r.back() == 0) r.back() = 1;
  return r;
}

// Random monic irreducible polynomials over F_q of the given degree.
Poly<GaloisField> random_irreducible(const GaloisField& k, int deg, std::mt19937_64& rng) {
  while (true) {
    Poly<GaloisField> g;
    for (int i = 0; i < deg; ++i) g.push_back(k.random(rng));
    g.push_back(k.one());
    if (is_irreducible_finite(k, g)) return g;
  }
}

}  // namespace

TEST(FunctionFields, RationalFunctionArithmetic) {
  FunctionField f(Qi);
  auto x = rat(Qi, {1, 1}, {-1, 0, 1});  // (t+1)/(t^2-1) = 1/(t-1)
  EXPECT_EQ(x, rat(Qi, {1}, {-1, 1}));
  auto y = f.add(x, f.neg(x));
  EXPECT_TRUE(f.is_zero(y));
  auto z = f.mul(rat(Qi, {0, 2}), f.inv(rat(Qi, {0, 4})));
  EXPECT_EQ(z, f.constant(Qi.from_rational(Rational(1, 2))));
  EXPECT_EQ(format_rational_function(f, x), "(1)/(t - 1)");
  EXPECT_EQ(format_rational_function(f, rat(Qi, {-2, 0, 1})), "t^2 - 2");
  EXPECT_THROW(f.inv(f.zero()), PreconditionError);
}

TEST(FunctionFields, GaussExtendCounts) {
  FieldEmbedding q_qi(Q, Qi, {});
  EXPECT_EQ(gauss_extend(gauss_p(5), q_qi).size(), 2u);
  EXPECT_EQ(gauss_extend(gauss_p(2), q_qi).size(), 1u);
  EXPECT_EQ(gauss_extend(FFHandle::trivial(Q), q_qi).size(), 1u);
  // A non-normal constant extension is rejected.
  NumberField cubic = field({-2, 0, 0, 1}, "Q(2^(1/3))");
  EXPECT_THROW(gauss_extend(gauss_p(5), FieldEmbedding(Q, cubic, {})), PreconditionError);
  EXPECT_THROW(gauss_extend(FFHandle::composed(rational_padic(5), fp_place(5, {0, 1})), q_qi), PreconditionError);
}

TEST(FunctionFields, GaussExtendSumEF) {
  // sum of e*f over the extensions equals the degree of the constant extension.
  std::vector<std::pair<NumberField, long>> cases = {{Qi, 2}, {Qi, 3}, {Qi, 5}, {Qr2, 2}, {Qr2, 7},
                                                      {Qz8, 3}, {Qz8, 17}, {Qz7p, 2}, {Qz7p, 7}, {Qz7p, 13}};
  for (auto& [l, p] : cases) {
    auto exts = gauss_extend(gauss_p(p), FieldEmbedding(Q, l, {}));
    int total = 0;
    for (auto& h : exts) total += h.base().e() * h.base().f();
    EXPECT_EQ(total, l.degree()) << l.label() << " p=" << p;
  }
}

TEST(FunctionFields, MembershipExamples) {
  auto g5 = gauss_p(5);
  EXPECT_EQ(g5.membership(rat(Q, {1, 5})), Membership::Unit);
  EXPECT_EQ(g5.gauss_value(rat(Q, {1, 5})), ValueVec::of(Rational(0)));
  auto r = std::get<0>(g5.residue(rat(Q, {1, 5})));
  EXPECT_EQ(r, ResidueFunctionField(GaloisField(5, 1)).one());
  EXPECT_EQ(g5.membership(rat(Q, {25, 5}, {1, 0, 1})), Membership::InMaximalIdeal);
  EXPECT_EQ(g5.membership(rat(Q, {1}, {5})), Membership::OutsideRing);

  auto ct = FFHandle::composed(rational_padic(5), fp_place(5, {0, 1}));
  EXPECT_EQ(ct.membership(rat(Q, {0, 1})), Membership::InMaximalIdeal);
  EXPECT_EQ(ct.membership(rat(Q, {1}, {0, 1})), Membership::OutsideRing);
  EXPECT_EQ(ct.membership(rat(Q, {5}, {0, 1})), Membership::InMaximalIdeal);  // coarse value decides
  EXPECT_EQ(ct.membership(rat(Q, {1, 1})), Membership::Unit);
  EXPECT_EQ(ct.value(rat(Q, {0, 0, 25})), ValueVec::of({Rational(2), Rational(2)}));

  auto cinf = FFHandle::composed(rational_padic(5), ResiduePlace::infinity());
  EXPECT_EQ(cinf.membership(rat(Q, {0, 1})), Membership::OutsideRing);
  EXPECT_EQ(cinf.membership(rat(Q, {1}, {0, 1})), Membership::InMaximalIdeal);
  EXPECT_EQ(cinf.membership(rat(Q, {1, 1}, {2, 1})), Membership::Unit);

  // Over a trivial base the composed ring is the g-adic ring of F[t].
  auto gadic = FFHandle::composed(ValuationHandle::trivial(Qi), ResiduePlace::number(to_kpoly(Qi, qpoly({-2, 0, 1}))));
  EXPECT_EQ(gadic.membership(rat(Qi, {-2, 0, 1})), Membership::InMaximalIdeal);
  EXPECT_EQ(gadic.membership(rat(Qi, {5})), Membership::Unit);
  EXPECT_EQ(gadic.membership(rat(Qi, {1}, {-2, 0, 1})), Membership::OutsideRing);
  EXPECT_EQ(gadic.rank(), 1);
}

TEST(FunctionFields, ComposedMembershipMatchesOracle) {
  std::mt19937_64 rng(11);
  struct Case {
    long p;
    Vec g;
    bool inf;
  };
  std::vector<Case> cases = {{5, {0, 1}, false}, {5, {3, 0, 1}, false}, {5, {}, true},
                             {3, {1, 1}, false}, {3, {1, 0, 1}, false}, {2, {1, 1, 1}, false}};
  for (auto& c : cases) {
    ResiduePlace pl = ResiduePlace::infinity();
    if (!c.inf) {
      GaloisField k(c.p, 1);
      Poly<GaloisField> g;
      for (long x : c.g) g.push_back(k.from_int(x));
      pl = ResiduePlace::finite(g);
    }
    auto h = FFHandle::composed(rational_padic(c.p), pl);
    for (int it = 0; it < 60; ++it) {
      std::uniform_int_distribution<int> deg(0, 3);
      Vec num = random_vec(rng, deg(rng), c.p), den = random_vec(rng, deg(rng), c.p);
      if (it % 5 == 0 && !c.inf) {
        // Plant a factor of g so the fine order is exercised.
        Vec prod(num.size() + c.g.size() - 1, 0);
        for (std::size_t i = 0; i < num.size(); ++i)
          for (std::size_t j = 0; j < c.g.size(); ++j) prod[i + j] += num[i] * c.g[j];
        num = prod;
      }
      auto x = from_vecs(num, den);
      // The oracle works on the unreduced fraction, which has the same class.
      EXPECT_EQ(h.membership(x), oracle_membership(num, den, c.p, c.g, c.inf)) << h.serialize() << " it=" << it;
    }
  }
}

TEST(FunctionFields, GaussAndComposedAxioms) {
  std::mt19937_64 rng(5);
  FunctionField f(Qi);
  auto w = padic_valuations(Qi, 5)[1];
  GaloisField k5(5, 1);
  std::vector<FFHandle> hs = {FFHandle::gauss(w), FFHandle::composed(w, fp_place(5, {2, 0, 1})),
                              FFHandle::composed(w, ResiduePlace::infinity()),
                              FFHandle::composed(padic_valuations(Qi, 3)[0],
                                                 ResiduePlace::finite({GaloisField(3, 2).element(4), GaloisField(3, 2).one()}))};
  std::uniform_int_distribution<long> c(-12, 12);
  auto rand_elem = [&]() {
    KPoly n, d;
    for (int i = 0; i < 3; ++i) n.push_back(Qi.reduce(QPoly{Rational(c(rng) * (i == 1 ? 5 : 1)), Rational(c(rng))}));
    for (int i = 0; i < 2; ++i) d.push_back(Qi.reduce(QPoly{Rational(c(rng)), Rational(c(rng) * 3)}));
    d.push_back(Qi.one());
    poly::trim(Qi, n);
    return f.make(n, d);
  };
  for (auto& h : hs) {
    for (int it = 0; it < 40; ++it) {
      auto x = rand_elem(), y = rand_elem();
      if (f.is_zero(x) || f.is_zero(y)) continue;
      EXPECT_EQ(h.value(f.mul(x, y)), h.value(x) + h.value(y)) << h.serialize();
      EXPECT_GE(h.value(f.add(x, y)), std::min(h.value(x), h.value(y))) << h.serialize();
      if (h.is_gauss() && h.gauss_value(x).sign() == 0 && h.gauss_value(y).sign() == 0) {
        ResidueFunctionField rf(*h.residue_constants());
        EXPECT_EQ(std::get<0>(h.residue(f.mul(x, y))),
                  rf.mul(std::get<0>(h.residue(x)), std::get<0>(h.residue(y))));
        if (h.gauss_value(f.add(x, y)).sign() == 0)
          EXPECT_EQ(std::get<0>(h.residue(f.add(x, y))),
                    rf.add(std::get<0>(h.residue(x)), std::get<0>(h.residue(y))));
      }
    }
  }
}

TEST(FunctionFields, DivValuationExamplesAndBijection) {
  auto g5 = gauss_p(5);
  auto ct = FFHandle::composed(rational_padic(5), fp_place(5, {0, 1}));
  EXPECT_EQ(div_valuation(ct).describe(), "(t)-adic on F_5(t)");
  auto c2 = FFHandle::composed(rational_padic(5), fp_place(5, {-2, 0, 1}));
  EXPECT_EQ(div_valuation(c2).describe(), "(t^2 + 3)-adic on F_5(t)");
  EXPECT_EQ(div_valuation(g5).describe(), "trivial on F_5(t)");
  EXPECT_FALSE(div_valuation(g5).place.has_value());

  // Every supported place of res O round-trips: all monic irreducibles of
  // degree <= 2 over F_5, and infinity.
  GaloisField k(5, 1);
  std::vector<ResiduePlace> places{ResiduePlace::infinity()};
  for (long a = 0; a < 5; ++a) places.push_back(fp_place(5, {a, 1}));
  for (long a = 0; a < 5; ++a)
    for (long b = 0; b < 5; ++b) {
      Poly<GaloisField> g{k.from_int(a), k.from_int(b), k.one()};
      if (is_irreducible_finite(k, g)) places.push_back(ResiduePlace::finite(g));
    }
  EXPECT_EQ(places.size(), 1u + 5u + 10u);
  std::vector<FFHandle> handles;
  for (auto& pl : places) {
    auto h = compose({g5, pl});
    EXPECT_EQ(div_valuation(h).place, std::optional<ResiduePlace>(pl));
    EXPECT_EQ(compose(div_valuation(h)), h);
    handles.push_back(h);
  }
  for (std::size_t i = 0; i < handles.size(); ++i)
    for (std::size_t j = i + 1; j < handles.size(); ++j) EXPECT_NE(handles[i], handles[j]);
  EXPECT_EQ(compose(div_valuation(g5)), g5);

  // Composing the quotient with the coarse ring reproduces the fine ring.
  std::mt19937_64 rng(3);
  for (auto& h : handles) {
    auto r = div_valuation(h);
    for (int it = 0; it < 25; ++it) {
      auto x = from_vecs(random_vec(rng, 2, 5), random_vec(rng, 2, 5));
      auto v = h.gauss_value(x);
      Membership expect = v.sign() != 0 ? membership_of(v) : r.membership(h.residue(x));
      EXPECT_EQ(h.membership(x), expect);
    }
  }
}

TEST(FunctionFields, CountFineExtensionsExamples) {
  FieldEmbedding q_r2(Q, Qr2, {});  // 5 is inert in Q(sqrt2): residue field F_25
  auto coarse = gauss_extend(gauss_p(5), q_r2);
  ASSERT_EQ(coarse.size(), 1u);
  ASSERT_EQ(coarse[0].base().f(), 2);
  auto ct = FFHandle::composed(rational_padic(5), fp_place(5, {0, 1}));
  auto c2 = FFHandle::composed(rational_padic(5), fp_place(5, {-2, 0, 1}));
  EXPECT_EQ(count_fine_extensions(ct, q_r2, coarse[0]), 1u);
  EXPECT_EQ(count_fine_extensions(c2, q_r2, coarse[0]), 2u);
  EXPECT_EQ(count_fine_extensions(gauss_p(5), q_r2, coarse[0]), 1u);

  // Over Q(i) the prime 5 splits with f = 1, so t^2 - 2 stays irreducible:
  // one fine extension above each of the two coarse ones, two in total.
  FieldEmbedding q_qi(Q, Qi, {});
  auto ci = gauss_extend(gauss_p(5), q_qi);
  ASSERT_EQ(ci.size(), 2u);
  for (auto& c : ci) EXPECT_EQ(count_fine_extensions(c2, q_qi, c), 1u);
  EXPECT_EQ(extend_ff(c2, q_qi).size(), 2u);

  EXPECT_THROW(count_fine_extensions(c2, q_qi, gauss_extend(gauss_p(3), q_qi)[0]), PreconditionError);
  EXPECT_THROW(count_fine_extensions(c2, q_qi, extend_ff(c2, q_qi)[0]), PreconditionError);
}

TEST(FunctionFields, CountFineMatchesGcdOracle) {
  // Over F_q, an irreducible g of degree d splits over F_{q^m} into gcd(d, m)
  // factors; the count must not depend on the coarse extension chosen.
  std::mt19937_64 rng(21);
  struct Case {
    NumberField base;
    NumberField top;
    long p;
  };
  std::vector<Case> cases = {{Q, Qi, 3}, {Q, Qi, 5}, {Q, Qr2, 5}, {Q, Qr2, 7}, {Q, Qz8, 3}, {Q, Qz8, 5},
                             {Q, Qz8, 17}, {Q, Qz7p, 2}, {Q, Qz7p, 13}, {Qi, Qz8, 3}, {Qi, Qz8, 5}};
  for (auto& c : cases) {
    auto emb = *find_embedding(c.base, c.top);
    for (auto& w : padic_valuations(c.base, c.p)) {
      GaloisField k = w.residue_field().finite();
      auto coarse = gauss_extend(FFHandle::gauss(w), emb);
      for (int d = 1; d <= 4; ++d) {
        auto fine = FFHandle::composed(w, ResiduePlace::finite(random_irreducible(k, d, rng)));
        std::size_t total = 0;
        for (auto& ch : coarse) {
          int m = ch.base().f() / w.f();
          auto n = count_fine_extensions(fine, emb, ch);
          EXPECT_EQ(n, static_cast<std::size_t>(std::gcd(d, m)))
              << c.top.label() << " p=" << c.p << " d=" << d << " " << fine.serialize();
          total += n;
        }
        auto all = extend_ff(fine, emb);
        EXPECT_EQ(all.size(), total);
        for (auto& h : all) EXPECT_EQ(restrict_ff(h, emb), fine) << h.serialize();
      }
      auto inf = FFHandle::composed(w, ResiduePlace::infinity());
      for (auto& ch : coarse) EXPECT_EQ(count_fine_extensions(inf, emb, ch), 1u);
    }
  }
}

TEST(FunctionFields, TrivialBaseCounts) {
  auto place = [](const NumberField& k, std::initializer_list<long> g) {
    return FFHandle::composed(ValuationHandle::trivial(k), ResiduePlace::number(to_kpoly(k, qpoly(g))));
  };
  auto count = [](const FFHandle& fine, const NumberField& l) {
    auto emb = *find_embedding(fine.constants(), l);
    return count_fine_extensions(fine, emb, FFHandle::trivial(l));
  };
  EXPECT_EQ(count(place(Q, {-2, 0, 1}), Qr2), 2u);
  EXPECT_EQ(count(place(Q, {1, 0, 1}), Qr2), 1u);
  EXPECT_EQ(count(place(Q, {-2, 0, 1}), Qi), 1u);
  EXPECT_EQ(count(place(Q, {1, 0, 0, 0, 1}), Qi), 2u);
  EXPECT_EQ(count(place(Q, {1, 0, 0, 0, 1}), Qr2), 2u);
  EXPECT_EQ(count(place(Q, {1, 0, 0, 0, 1}), Qz8), 4u);
  EXPECT_EQ(count(place(Q, {0, 1}), Qz8), 1u);
  EXPECT_THROW(place(Q, {-1, 0, 1}), PreconditionError);  // t^2 - 1 is reducible

  auto fine = place(Q, {1, 0, 0, 0, 1});
  FieldEmbedding emb(Q, Qz8, {});
  auto exts = extend_ff(fine, emb);
  EXPECT_EQ(exts.size(), 4u);
  for (auto& h : exts) EXPECT_EQ(restrict_ff(h, emb), fine);
  // t - z8 lies over t^4 + 1 and is a zero of it in Q(zeta8)(t).
  auto lin = FFHandle::composed(ValuationHandle::trivial(Qz8),
                                ResiduePlace::number(KPoly{Qz8.neg(Qz8.generator()), Qz8.one()}));
  EXPECT_EQ(lin.membership(rat(Qz8, {1, 0, 0, 0, 1})), Membership::InMaximalIdeal);
}

TEST(FunctionFields, JoinAndContainment) {
  auto g5 = gauss_p(5);
  auto ct = FFHandle::composed(rational_padic(5), fp_place(5, {0, 1}));
  auto ct1 = FFHandle::composed(rational_padic(5), fp_place(5, {1, 1}));
  auto triv = FFHandle::trivial(Q);
  EXPECT_EQ(join(ct, g5), g5);
  EXPECT_EQ(join(g5, ct), g5);
  EXPECT_EQ(join(ct, ct), ct);
  EXPECT_EQ(join(ct, ct1), g5);
  EXPECT_EQ(join(g5, gauss_p(13)), triv);
  EXPECT_EQ(join(ct, FFHandle::composed(rational_padic(13), fp_place(13, {0, 1}))), triv);
  EXPECT_TRUE(contains(g5, ct));
  EXPECT_FALSE(contains(ct, g5));
  EXPECT_TRUE(contains(triv, ct));
  EXPECT_FALSE(contains(ct1, ct));
  EXPECT_THROW(join(g5, FFHandle::trivial(Qi)), PreconditionError);
  auto gi = FFHandle::composed(ValuationHandle::trivial(Q), ResiduePlace::number(to_kpoly(Q, qpoly({0, 1}))));
  EXPECT_EQ(join(gi, ct), triv);
  EXPECT_TRUE(contains(triv, gi));
}

TEST(FunctionFields, SerializationRoundTrip) {
  std::vector<FFHandle> hs = {FFHandle::trivial(Qi), FFHandle::gauss(padic_valuations(Qi, 5)[0]),
                              FFHandle::composed(padic_valuations(Qi, 3)[0], ResiduePlace::infinity()),
                              FFHandle::composed(padic_valuations(Qi, 3)[0],
                                                 ResiduePlace::finite({GaloisField(3, 2).element(4), GaloisField(3, 2).one()})),
                              FFHandle::composed(ValuationHandle::trivial(Qi),
                                                 ResiduePlace::number(KPoly{Qi.from_rational(Rational(-3, 2)), Qi.one()})),
                              FFHandle::composed(ValuationHandle::trivial(Qi),
                                                 ResiduePlace::number(KPoly{QPoly{Rational(0), Rational(1)}, {}, Qi.one()}))};
  for (auto& h : hs) EXPECT_EQ(parse_ff_handle(Qi, h.serialize()), h) << h.serialize();
  EXPECT_EQ(parse_ff_handle(Q, "composed coarse=gauss base=padic p=5 place=[3,0,1]"),
            FFHandle::composed(rational_padic(5), fp_place(5, {-2, 0, 1})));
  EXPECT_EQ(parse_ff_handle(Q, "trivial"), FFHandle::trivial(Q));
  EXPECT_THROW(parse_ff_handle(Q, "composed coarse=gauss base=padic p=5 place=[1,0,1]"), ParseError);
  EXPECT_THROW(parse_ff_handle(Q, "composed coarse=gauss base=padic p=5"), ParseError);
  EXPECT_THROW(parse_ff_handle(Q, "gauss base=padic p=5 place=x"), ParseError);
  EXPECT_THROW(parse_ff_handle(Q, "fancy"), ParseError);
}
