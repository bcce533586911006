#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "tpval/algebra/extensions.hpp"
#include "tpval/algebra/finite_field.hpp"
#include "tpval/algebra/hensel.hpp"
#include "tpval/valuation/p_maximal.hpp"
#include "tpval/valuation/value.hpp"

// Primes of a number field above a rational prime p.
//
// Each prime P is found through an integral generator beta whose
// characteristic polynomial chi satisfies Dedekind's criterion at one of its
// irreducible factors psi mod p. Then Z_p[beta] is maximal at psi, the block
// of chi belonging to psi^m is irreducible over Q_p, and the completion at P
// is Q_p[Y]/(G) with G the Hensel lift of psi^m. Everything about P (values,
// residues, local characteristic polynomials) is computed from G.

namespace tpval::padic {

inline Integer pk(std::int64_t p, long k) { return ipow(Integer(static_cast<long>(p)), static_cast<unsigned long>(k)); }

inline ZPoly to_zpoly_mod(const QPoly& f, const Integer& m) {
  ZPoly out;
  for (auto& c : f) out.push_back(rational_mod(c, m));
  trim(out);
  return out;
}

inline bool p_integral(const QPoly& f, std::int64_t p) {
  for (auto& c : f)
    if (vp(Integer(c.get_den()), static_cast<unsigned long>(p)) > 0) return false;
  return true;
}

struct LocalPrime {
  std::int64_t p = 0;
  int e = 0;
  int f = 0;
  NumberField field;
  QPoly beta;                       // certifying generator, field coordinates
  QPoly chi;                        // its characteristic polynomial
  std::vector<FpPoly> blocks;       // coprime factors psi_i^{m_i} of chi mod p
  std::size_t block = 0;            // this prime's block
  FpPoly psi;
  std::vector<std::vector<Rational>> to_beta;  // field coordinates -> beta coordinates
  GaloisField residue_field{2, 1};
  GaloisField::Elem rho;            // image of res(beta) in the canonical F_q
  long pin_k = 0;
  ZPoly pin;                        // local charpoly of the integral generator, mod p^pin_k
  std::string fingerprint;          // residue of the integral generator

  mutable std::mutex mu;
  mutable std::map<long, ZPoly> lifts;

  int degree() const { return e * f; }

  /// The Q_p-factor G of chi for this prime, modulo p^k.
  ZPoly local_factor(long k) const {
    std::lock_guard<std::mutex> lock(mu);
    auto it = lifts.lower_bound(k);
    if (it != lifts.end()) return zmod::reduce(it->second, pk(p, k));
    auto lifted = hensel_lift(to_zpoly_mod(chi, pk(p, k)), blocks, p, k);
    lifts[k] = lifted[block];
    return lifted[block];
  }

  QPoly beta_coords(const QPoly& x) const {
    QPoly r(to_beta.size(), Rational(0));
    for (std::size_t i = 0; i < to_beta.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) r[i] += to_beta[i][j] * x[j];
    poly::trim(QQ, r);
    return r;
  }

  struct IntegralRep {
    ZPoly num;
    long vd;       // v_p of the common denominator
    Integer unit;  // the denominator with its p-part removed
  };

  IntegralRep integral_rep(const QPoly& x) const {
    QPoly r = beta_coords(x);
    Integer d = 1;
    for (auto& c : r) d = lcm(d, c.get_den());
    ZPoly num;
    for (auto& c : r) num.push_back(Integer(c * d));
    trim(num);
    long v = vp(d, static_cast<unsigned long>(p));
    Integer u = d / pk(p, v);
    return {num, v, u};
  }

  static constexpr long kMaxPrecision = 4096;

  Rational value(const QPoly& x, long start) const {
    if (x.empty()) throw PreconditionError("value of zero is infinite");
    auto rep = integral_rep(x);
    for (long k = std::max<long>(start, 2); k <= kMaxPrecision; k *= 2) {
      ZPoly g = local_factor(k);
      Rational res = resultant(to_qpoly(g), to_qpoly(rep.num));
      if (res == 0) continue;
      long v = vp(Integer(res.get_num()), static_cast<unsigned long>(p));
      if (v < k) return make_rational(v, degree()) - rep.vd;
    }
    throw ResourceError("p-adic value needs more than " + std::to_string(kMaxPrecision) + " digits");
  }

  /// Residue of an element of the valuation ring.
  GaloisField::Elem residue(const QPoly& x, long start) const {
    const GaloisField& gf = residue_field;
    if (x.empty()) return gf.zero();
    auto rep = integral_rep(x);
    long k = std::max(start, rep.vd + 1);
    ZPoly g = local_factor(k);
    ZPoly c = zmod::rem_monic(zmod::reduce(rep.num, pk(p, k)), g);
    Integer pv = pk(p, rep.vd), P(static_cast<long>(p));
    PrimeField fp(p);
    std::int64_t uinv = fp.inv(fp.from_integer(rep.unit));
    FpPoly r;
    for (auto& ci : c) {
      Integer q = pmod(ci, pk(p, k));
      if (!mpz_divisible_p(q.get_mpz_t(), pv.get_mpz_t()))
        throw PreconditionError("residue: element is not in the valuation ring");
      r.push_back(fp.mul(fp.from_integer(q / pv), uinv));
    }
    poly::trim(fp, r);
    return poly::eval(gf, lift_to_gf(gf, r), rho);
  }

  /// Some element of the valuation ring with residue c.
  QPoly lift(const GaloisField::Elem& c) const {
    const GaloisField& gf = residue_field;
    PrimeField fp(p);
    // Solve sum h_i rho^i = c over F_p.
    linalg::Matrix<PrimeField> a(static_cast<std::size_t>(f), std::vector<std::int64_t>(f, 0));
    GaloisField::Elem pw = gf.one();
    for (int j = 0; j < f; ++j) {
      for (int i = 0; i < f; ++i) a[i][j] = pw[i];
      pw = gf.mul(pw, rho);
    }
    auto h = linalg::solve(fp, a, std::vector<std::int64_t>(c.begin(), c.end()));
    if (!h) throw InvariantViolation("residue generator does not span the residue field");
    QPoly acc;
    for (int i = f; i-- > 0;) acc = field.add(field.mul(acc, beta), field.from_int((*h)[i]));
    return acc;
  }

  /// Characteristic polynomial of y over Q_p on the completion, mod p^k.
  ZPoly local_charpoly(const QPoly& y, long k) const {
    auto rep = integral_rep(y);
    long kw = k + rep.vd;
    ZPoly g = local_factor(kw);
    Integer M = pk(p, k), pv = pk(p, rep.vd);
    ZPoly c = zmod::rem_monic(zmod::reduce(rep.num, pk(p, kw)), g);
    Integer uinv;
    mpz_invert(uinv.get_mpz_t(), rep.unit.get_mpz_t(), M.get_mpz_t());
    ZPoly t;
    for (auto& ci : c) {
      Integer q = pmod(ci, pk(p, kw));
      if (!mpz_divisible_p(q.get_mpz_t(), pv.get_mpz_t()))
        throw PreconditionError("local charpoly: element is not integral");
      t.push_back(pmod((q / pv) * uinv, M));
    }
    trim(t);
    QPoly gq = to_qpoly(zmod::reduce(g, M)), tq = to_qpoly(t);
    std::vector<Rational> xs, ys;
    for (int i = 0; i <= degree(); ++i) {
      xs.emplace_back(i);
      ys.push_back(resultant(gq, poly::sub(QQ, poly::constant(QQ, Rational(i)), tq)));
    }
    QPoly cp = interpolate(xs, ys);
    ZPoly out;
    for (auto& cc : cp) {
      if (cc.get_den() != 1) throw InvariantViolation("local charpoly not integral");
      out.push_back(pmod(Integer(cc), M));
    }
    return out;
  }

  /// True when y is integral here and res(y) is a root of psi_other.
  bool residue_is_root(const QPoly& y, const FpPoly& psi_other, long start) const {
    auto r = residue(y, start);
    return residue_field.is_zero(poly::eval(residue_field, lift_to_gf(residue_field, psi_other), r));
  }
};

using PrimePtr = std::shared_ptr<const LocalPrime>;

namespace detail {

inline std::string hex_pin(const ZPoly& pin) {
  std::string s;
  for (std::size_t i = 0; i < pin.size(); ++i) {
    if (i) s += ':';
    s += pin[i].get_str(16);
  }
  return s;
}

inline bool zpoly_less(const ZPoly& a, const ZPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

// Dedekind: with chi = prod psi_i^{m_i} mod p, write chi = g*h + p*u where
// g = prod psi_i and h = prod psi_i^{m_i-1}. Z_p[beta] is maximal at psi_i iff
// m_i = 1 or psi_i does not divide u mod p.
inline std::vector<bool> dedekind_maximal(const QPoly& chi, const std::vector<FiniteFactor<PrimeField>>& fac,
                                          std::int64_t p) {
  PrimeField fp(p);
  Integer P(static_cast<long>(p)), P2 = P * P;
  ZPoly g{1}, h{1};
  for (auto& ff : fac) {
    g = zmod::mul(g, zmod::from_fp(ff.factor));
    for (int j = 1; j < ff.multiplicity; ++j) h = zmod::mul(h, zmod::from_fp(ff.factor));
  }
  ZPoly diff = zmod::reduce(zmod::sub(to_zpoly_mod(chi, P2), zmod::mul(g, h)), P2);
  FpPoly u;
  for (auto& c : diff) {
    if (!mpz_divisible_p(c.get_mpz_t(), P.get_mpz_t())) throw InvariantViolation("Dedekind: chi != g*h mod p");
    u.push_back(fp.from_integer(c / P));
  }
  poly::trim(fp, u);
  std::vector<bool> out;
  for (auto& ff : fac) out.push_back(ff.multiplicity == 1 || !poly::divides(fp, ff.factor, u));
  return out;
}

// Inverse of the matrix whose columns are beta^j in field coordinates.
inline std::optional<std::vector<std::vector<Rational>>> beta_basis_inverse(const NumberField& k, const QPoly& beta) {
  std::size_t n = static_cast<std::size_t>(k.degree());
  linalg::Matrix<RationalField> b(n, std::vector<Rational>(n, Rational(0)));
  QPoly pw = k.one();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < pw.size(); ++i) b[i][j] = pw[i];
    pw = k.mul(pw, beta);
  }
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<Rational> e(n, Rational(0));
    e[c] = 1;
    auto sol = linalg::solve(QQ, b, e);
    if (!sol) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) inv[i][c] = (*sol)[i];
  }
  // Check invertibility: solve succeeds on singular systems with a consistent rhs.
  if (linalg::rank(QQ, b) != n) return std::nullopt;
  return inv;
}

// Candidate generators in a fixed order independent of the primes sought:
// the integral generator, small {-1,0,1}-combinations of its powers, then
// (only when Z[alpha] may fail to be p-maximal) the basis of the p-maximal
// order followed by pseudo-random combinations of it.
class CandidateStream {
 public:
  CandidateStream(const NumberField& k, std::int64_t p, bool may_be_nonmaximal)
      : k_(k), p_(p), n_(k.degree()), nonmaximal_(may_be_nonmaximal), rng_(0x5eed) {
    alpha_ = k.reduce(QPoly{Rational(0), Rational(k.integral_scale())});
    powers_.push_back(k.one());
    for (int i = 1; i < n_; ++i) powers_.push_back(k.mul(powers_.back(), alpha_));
  }

  static constexpr long kSmallCombos = 300;
  static constexpr long kMixes = 6000;

  std::optional<QPoly> next() {
    if (phase_ == 0) {
      phase_ = 1;
      return alpha_;
    }
    if (phase_ == 1) {
      long total = 1;
      for (int i = 1; i < n_ && total <= kSmallCombos; ++i) total *= 3;
      while (++counter_ < std::min(total, kSmallCombos)) {
        QPoly g;
        long c = counter_;
        for (int i = 1; i < n_; ++i) {
          long digit = c % 3 - 1;
          c /= 3;
          if (digit != 0) g = k_.add(g, poly::scale(QQ, powers_[i], Rational(digit)));
        }
        if (g.empty() || g == alpha_) continue;
        return g;
      }
      if (!nonmaximal_) return std::nullopt;
      phase_ = 2;
      counter_ = 0;
      maximal_ = p_maximal_basis(k_, alpha_, p_);
    }
    if (counter_ < static_cast<long>(maximal_.size())) return maximal_[static_cast<std::size_t>(counter_++)];
    while (counter_++ < kMixes + static_cast<long>(maximal_.size())) {
      QPoly g;
      for (std::size_t i = 0; i < maximal_.size(); ++i) {
        long c = static_cast<long>(rng_() % static_cast<std::uint64_t>(std::min<std::int64_t>(p_, 7)));
        if (c != 0) g = k_.add(g, poly::scale(QQ, maximal_[i], Rational(c)));
      }
      if (!g.empty()) return g;
    }
    return std::nullopt;
  }

  const QPoly& integral_generator() const { return alpha_; }

 private:
  NumberField k_;
  std::int64_t p_;
  int n_;
  bool nonmaximal_;
  std::mt19937_64 rng_;
  QPoly alpha_;
  std::vector<QPoly> powers_;
  std::vector<QPoly> maximal_;
  int phase_ = 0;
  long counter_ = 0;
};

inline std::vector<PrimePtr> compute_primes(const NumberField& k, std::int64_t p, long precision) {
  if (!is_prime(p)) throw PreconditionError("p-adic: " + std::to_string(p) + " is not prime");
  const int n = k.degree();
  PrimeField fp(p);
  const QPoly alpha = k.reduce(QPoly{Rational(0), Rational(k.integral_scale())});
  QPoly alpha_charpoly = k.charpoly(alpha);
  long dv = vp(Integer(discriminant(alpha_charpoly).get_num()), static_cast<unsigned long>(p));
  CandidateStream stream(k, p, dv >= 2);
  long pin_k = std::max(precision, dv / 2 + 1);

  std::vector<std::shared_ptr<LocalPrime>> found;
  int total = 0;
  while (total < n) {
    auto cand = stream.next();
    if (!cand) break;
    const QPoly& beta = *cand;
    if (!p_integral(poly::constant(QQ, k.norm(beta)), p)) continue;
    QPoly chi = k.charpoly(beta);
    if (!p_integral(chi, p)) continue;
    if (poly::degree<RationalField>(poly::gcd(QQ, chi, poly::derivative(QQ, chi))) > 0) continue;
    FpPoly chibar;
    for (auto& c : chi) chibar.push_back(fp.from_integer(rational_mod(c, Integer(static_cast<long>(p)))));
    auto fac = factor_finite(fp, chibar);
    auto maximal = dedekind_maximal(chi, fac, p);
    std::vector<FpPoly> blocks;
    for (auto& ff : fac) blocks.push_back(poly::pow(fp, ff.factor, static_cast<unsigned>(ff.multiplicity)));
    std::optional<std::vector<std::vector<Rational>>> to_beta;
    for (std::size_t i = 0; i < fac.size(); ++i) {
      if (!maximal[i]) continue;
      bool known = false;
      for (auto& q : found)
        if (q->residue_is_root(beta, fac[i].factor, precision)) {
          if (q->e != fac[i].multiplicity || q->f != poly::degree<PrimeField>(fac[i].factor))
            throw InvariantViolation("p-adic: inconsistent certificates for one prime");
          known = true;
          break;
        }
      if (known) continue;
      if (!to_beta) to_beta = beta_basis_inverse(k, beta);
      if (!to_beta) throw InvariantViolation("p-adic: squarefree charpoly but beta not primitive");
      auto lp = std::make_shared<LocalPrime>();
      lp->p = p;
      lp->e = fac[i].multiplicity;
      lp->f = poly::degree<PrimeField>(fac[i].factor);
      lp->field = k;
      lp->beta = beta;
      lp->chi = chi;
      lp->blocks = blocks;
      lp->block = i;
      lp->psi = fac[i].factor;
      lp->to_beta = *to_beta;
      lp->residue_field = GaloisField(p, lp->f);
      // Embedding of F_p[Y]/psi into the canonical F_q: the one giving the
      // least residue of the integral generator, then the least res(beta).
      auto roots = roots_finite(lp->residue_field, lift_to_gf(lp->residue_field, lp->psi));
      std::optional<std::pair<GaloisField::Elem, GaloisField::Elem>> best;
      for (auto& r : roots) {
        lp->rho = r;
        auto ra = lp->residue(alpha, precision);
        const auto& gf = lp->residue_field;
        if (!best || gf.less(ra, best->first) || (ra == best->first && gf.less(r, best->second)))
          best = std::make_pair(ra, r);
      }
      lp->rho = best->second;
      lp->fingerprint = lp->residue_field.format(best->first);
      lp->pin_k = pin_k;
      lp->pin = lp->local_charpoly(alpha, pin_k);
      total += lp->degree();
      found.push_back(lp);
    }
    if (total > n) throw InvariantViolation("p-adic: sum of e*f exceeds the field degree");
  }
  if (total < n)
    throw ResourceError("p-adic: could not certify all primes above " + std::to_string(p) + " in " + k.label() +
                        " within the generator search budget");
  std::vector<PrimePtr> out(found.begin(), found.end());
  std::sort(out.begin(), out.end(), [](const PrimePtr& a, const PrimePtr& b) {
    if (a->e != b->e) return a->e < b->e;
    if (a->f != b->f) return a->f < b->f;
    if (a->fingerprint != b->fingerprint) return a->fingerprint < b->fingerprint;
    return zpoly_less(a->pin, b->pin);
  });
  return out;
}

}  // namespace detail

/// All primes above p, canonically ordered; cached per (field, p, precision).
inline std::vector<PrimePtr> primes_above(const NumberField& k, std::int64_t p, long precision = 20) {
  static std::mutex mu;
  static std::map<std::tuple<std::string, std::int64_t, long>, std::vector<PrimePtr>> cache;
  auto key = std::make_tuple(format_qpoly(k.minpoly()), p, precision);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto primes = detail::compute_primes(k, p, precision);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, primes);
  return primes;
}

}  // namespace tpval::padic
