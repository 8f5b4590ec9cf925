// Copyright 2026 The votepower Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Univariate polynomials with exact rational coefficients.
//!
//! A `RationalPoly` is the carrier for voting structures (probability
//! generating functions over the number of votes cast), for truncated
//! products of other players' structures, and for influence polynomials.
//! Storage is sparse; multiplication scales both operands to integer
//! numerators over a common denominator and convolves into a dense
//! accumulator, so only one gcd per output coefficient is paid.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_fraction_string, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalPoly {
    coeffs: BTreeMap<usize, Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    /// `c * x^degree`.
    pub fn monomial(degree: usize, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(degree, c);
        }
        Self { coeffs }
    }

    /// Builds a polynomial from `(degree, coefficient)` pairs. Repeated
    /// degrees are summed; zero results are dropped.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (d, c) in terms {
            *coeffs.entry(d).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { coeffs }
    }

    /// Dense constructor: `coeffs[j]` is the coefficient of `x^j`.
    pub fn from_dense(coeffs: Vec<Rational>) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest degree with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, degree: usize) -> Rational {
        self.coeffs
            .get(&degree)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coeff_ref(&self, degree: usize) -> Option<&Rational> {
        self.coeffs.get(&degree)
    }

    /// Nonzero terms in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients `0..=degree` including zeros. Empty for the zero polynomial.
    pub fn to_dense(&self) -> Vec<Rational> {
        match self.degree() {
            None => Vec::new(),
            Some(deg) => (0..=deg).map(|d| self.coeff(d)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(d, v)| (*d, v * c)).collect(),
        }
    }

    /// Keeps the terms with `lo <= degree <= hi`; `hi = None` means no upper
    /// bound.
    pub fn extract(&self, lo: usize, hi: Option<usize>) -> Result<Self> {
        if let Some(hi) = hi {
            if lo > hi {
                return Err(Error::InvalidRange { lo, hi });
            }
        }
        let coeffs = match hi {
            Some(hi) => self.coeffs.range(lo..=hi),
            None => self.coeffs.range(lo..),
        }
        .map(|(d, c)| (*d, c.clone()))
        .collect();
        Ok(Self { coeffs })
    }

    /// Terms of degree at most `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        Self {
            coeffs: self
                .coeffs
                .range(..=max_degree)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
        }
    }

    /// Sum of products of coefficients of equal degree.
    pub fn dot(&self, other: &Self) -> Rational {
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .coeffs
            .iter()
            .filter_map(|(d, c)| large.coeffs.get(d).map(|o| c * o))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// Horner evaluation at `v`.
    pub fn eval(&self, v: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut prev: Option<usize> = None;
        for (d, c) in self.coeffs.iter().rev() {
            if let Some(p) = prev {
                acc *= pow_rational(v, p - d);
            }
            acc += c;
            prev = Some(*d);
        }
        match prev {
            Some(p) if p > 0 => acc * pow_rational(v, p),
            _ => acc,
        }
    }

    /// Sum of coefficients, i.e. evaluation at `x = 1`.
    pub fn sum_coeffs(&self) -> Rational {
        self.coeffs
            .values()
            .fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Exact product.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_impl(other, None)
    }

    /// Exact product with every term above `max_degree` discarded. Equal to
    /// `self.mul(other).truncate(max_degree)` but never materializes the
    /// discarded terms.
    pub fn mul_truncated(&self, other: &Self, max_degree: usize) -> Self {
        self.mul_impl(other, Some(max_degree))
    }

    fn mul_impl(&self, other: &Self, cap: Option<usize>) -> Self {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Self::zero();
        };
        let mut top = da + db;
        if let Some(cap) = cap {
            top = top.min(cap);
        }
        if let Some(product) = self.mul_small(other, top) {
            return product;
        }
        let (an, ad) = self.integer_form();
        let (bn, bd) = other.integer_form();
        let mut acc = vec![BigInt::zero(); top + 1];
        for (i, a) in &an {
            if *i > top {
                break;
            }
            for (j, b) in &bn {
                let k = i + j;
                if k > top {
                    break;
                }
                acc[k] += a * b;
            }
        }
        let den = ad * bd;
        let coeffs = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, Rational::new(c, den.clone())))
            .collect();
        Self { coeffs }
    }

    /// Same product in `i128` arithmetic; `None` if any intermediate value
    /// would overflow, in which case the caller falls back to `BigInt`.
    fn mul_small(&self, other: &Self, top: usize) -> Option<Self> {
        let (an, ad) = self.small_integer_form()?;
        let (bn, bd) = other.small_integer_form()?;
        let mut acc = vec![0i128; top + 1];
        for &(i, a) in &an {
            if i > top {
                break;
            }
            for &(j, b) in &bn {
                let k = i + j;
                if k > top {
                    break;
                }
                acc[k] = acc[k].checked_add(a.checked_mul(b)?)?;
            }
        }
        let den = ad.checked_mul(bd)?;
        let coeffs = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(k, c)| {
                let g = c.gcd(&den);
                (
                    k,
                    Rational::new_raw(BigInt::from(c / g), BigInt::from(den / g)),
                )
            })
            .collect();
        Some(Self { coeffs })
    }

    fn small_integer_form(&self) -> Option<(Vec<(usize, i128)>, i128)> {
        // Operands are kept well below i128::MAX so products of two scaled
        // numerators can be detected as overflow rather than wrapping.
        const LIMIT: i128 = 1 << 60;
        let mut lcm: i128 = 1;
        for c in self.coeffs.values() {
            let d = i128::try_from(c.denom()).ok()?;
            lcm = lcm.lcm(&d);
            if lcm > LIMIT {
                return None;
            }
        }
        let mut nums = Vec::with_capacity(self.coeffs.len());
        for (deg, c) in &self.coeffs {
            let n = i128::try_from(c.numer()).ok()?;
            let d = i128::try_from(c.denom()).ok()?;
            let scaled = n.checked_mul(lcm / d)?;
            if scaled.abs() > LIMIT {
                return None;
            }
            nums.push((*deg, scaled));
        }
        Some((nums, lcm))
    }

    /// Integer numerators over the least common denominator.
    fn integer_form(&self) -> (Vec<(usize, BigInt)>, BigInt) {
        let lcm = self
            .coeffs
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .coeffs
            .iter()
            .map(|(d, c)| (*d, c.numer() * (&lcm / c.denom())))
            .collect();
        (nums, lcm)
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut result = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Product of all factors; the empty product is `1`.
    pub fn product<'a, I>(factors: I) -> Self
    where
        I: IntoIterator<Item = &'a RationalPoly>,
    {
        factors
            .into_iter()
            .fold(Self::one(), |acc, f| acc.mul(f))
    }

    pub fn has_negative_coeff(&self) -> bool {
        self.coeffs.values().any(Signed::is_negative)
    }
}

fn pow_rational(v: &Rational, n: usize) -> Rational {
    num_traits::pow(v.clone(), n)
}

impl Add for &RationalPoly {
    type Output = RationalPoly;

    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        RationalPoly::from_terms(
            self.terms()
                .chain(rhs.terms())
                .map(|(d, c)| (d, c.clone())),
        )
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;

    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        self + &(-rhs)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;

    fn neg(self) -> RationalPoly {
        RationalPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;

    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        RationalPoly::mul(self, rhs)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.terms().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let coeff = to_fraction_string(&mag);
            match d {
                0 => f.write_str(&coeff)?,
                1 if mag.is_one() => f.write_str("x")?,
                1 => write!(f, "{coeff}*x")?,
                _ if mag.is_one() => write!(f, "x^{d}")?,
                _ => write!(f, "{coeff}*x^{d}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn half_plus_half_x(w: usize) -> RationalPoly {
        RationalPoly::from_terms([(0, ratio(1, 2)), (w, ratio(1, 2))])
    }

    fn poly(terms: &[(usize, i64, i64)]) -> RationalPoly {
        RationalPoly::from_terms(terms.iter().map(|&(d, n, m)| (d, ratio(n, m))))
    }

    #[test]
    fn product_of_three_random_structures() {
        let p = half_plus_half_x(3)
            .mul(&half_plus_half_x(2))
            .mul(&half_plus_half_x(1));
        let expected = poly(&[
            (6, 1, 8),
            (5, 1, 8),
            (4, 1, 8),
            (3, 2, 8),
            (2, 1, 8),
            (1, 1, 8),
            (0, 1, 8),
        ]);
        assert_eq!(p, expected);
    }

    #[test]
    fn multiplicative_identity_and_zero() {
        let p = poly(&[(0, 1, 3), (4, -2, 7)]);
        assert_eq!(p.mul(&RationalPoly::one()), p);
        assert!(p.mul(&RationalPoly::zero()).is_zero());
    }

    #[test]
    fn product_matches_pairwise_enumeration() {
        let a = RationalPoly::from_terms([(0, ratio(1, 2)), (4, ratio(1, 2))]);
        let b = half_plus_half_x(3);
        let mut by_total: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, x) in a.terms() {
            for (j, y) in b.terms() {
                *by_total.entry(i + j).or_insert_with(Rational::zero) += x * y;
            }
        }
        assert_eq!(a.mul(&b), RationalPoly::from_terms(by_total));
    }

    #[test]
    fn extract_losing_coalitions() {
        let full = half_plus_half_x(3)
            .mul(&half_plus_half_x(2))
            .mul(&half_plus_half_x(1));
        let losing = full.extract(0, Some(5)).unwrap();
        let expected = poly(&[
            (5, 1, 8),
            (4, 1, 8),
            (3, 2, 8),
            (2, 1, 8),
            (1, 1, 8),
            (0, 1, 8),
        ]);
        assert_eq!(losing, expected);
        assert_eq!(full.extract(0, full.degree()).unwrap(), full);
    }

    #[test]
    fn extract_unbounded_tail() {
        let p = poly(&[(9, 1, 16), (8, 1, 16), (7, 2, 16), (6, 1, 16)]);
        assert_eq!(p.extract(6, None).unwrap(), p);
        assert!(p.extract(10, None).unwrap().is_zero());
    }

    #[test]
    fn extract_rejects_inverted_range() {
        let p = half_plus_half_x(2);
        assert_eq!(
            p.extract(4, Some(3)),
            Err(Error::InvalidRange { lo: 4, hi: 3 })
        );
    }

    #[test]
    fn dot_of_influence_and_losing_tail() {
        let influence = poly(&[(2, 1, 2), (3, 1, 2), (4, 1, 2), (5, 1, 2)]);
        let losing = half_plus_half_x(3)
            .mul(&half_plus_half_x(2))
            .mul(&half_plus_half_x(1))
            .extract(0, Some(5))
            .unwrap();
        assert_eq!(influence.dot(&losing), ratio(5, 16));
        assert_eq!(influence.dot(&RationalPoly::zero()), int(0));
        let x2 = RationalPoly::monomial(2, int(1));
        let x3 = RationalPoly::monomial(3, int(1));
        assert_eq!(x2.dot(&x3), int(0));
    }

    #[test]
    fn evaluation() {
        assert_eq!(half_plus_half_x(4).eval(&int(1)), int(1));
        let p = poly(&[(0, 3, 7), (2, 1, 1)]);
        assert_eq!(p.eval(&int(0)), ratio(3, 7));
        let tail = poly(&[(9, 1, 16), (8, 1, 16), (7, 2, 16), (6, 1, 16)]);
        assert_eq!(tail.eval(&int(1)), ratio(5, 16));
        // 3/7 + (1/2)^2
        assert_eq!(p.eval(&ratio(1, 2)), ratio(3, 7) + ratio(1, 4));
        assert_eq!(RationalPoly::monomial(3, int(2)).eval(&int(3)), int(54));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let base = poly(&[(0, 3, 10), (1, 7, 10)]);
        let mut expected = RationalPoly::one();
        for _ in 0..7 {
            expected = expected.mul(&base);
        }
        assert_eq!(base.pow(7), expected);
        assert_eq!(base.pow(0), RationalPoly::one());
    }

    #[test]
    fn truncated_product() {
        let a = half_plus_half_x(4);
        let b = half_plus_half_x(3);
        assert_eq!(a.mul_truncated(&b, 5), a.mul(&b).truncate(5));
        assert_eq!(a.mul_truncated(&b, 0), RationalPoly::constant(ratio(1, 4)));
    }

    #[test]
    fn display() {
        let p = poly(&[(0, 1, 2), (1, 1, 1), (3, -2, 5)]);
        assert_eq!(p.to_string(), "1/2 + x - 2/5*x^3");
        assert_eq!(RationalPoly::zero().to_string(), "0");
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
    }

    fn arb_poly() -> impl Strategy<Value = RationalPoly> {
        prop::collection::vec(arb_rational(), 0..=9).prop_map(RationalPoly::from_dense)
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(factors in prop::collection::vec(arb_poly(), 1..=6)) {
            let forward = RationalPoly::product(factors.iter());
            let backward = RationalPoly::product(factors.iter().rev());
            prop_assert_eq!(&forward, &backward);
            if factors.len() >= 3 {
                let left = factors[0].mul(&factors[1]).mul(&factors[2]);
                let right = factors[0].mul(&factors[1].mul(&factors[2]));
                prop_assert_eq!(left, right);
            }
        }

        #[test]
        fn mul_degree_is_additive(p in arb_poly(), q in arb_poly()) {
            let r = p.mul(&q);
            match (p.degree(), q.degree()) {
                (Some(a), Some(b)) => prop_assert_eq!(r.degree(), Some(a + b)),
                _ => prop_assert!(r.is_zero()),
            }
        }

        #[test]
        fn extract_splits_additively(p in arb_poly(), a in 0usize..4, gap in 0usize..4, span in 1usize..5) {
            let b = a + gap;
            let c = b + span;
            let lower = p.extract(a, Some(b)).unwrap();
            let upper = p.extract(b + 1, Some(c)).unwrap();
            prop_assert_eq!(&lower + &upper, p.extract(a, Some(c)).unwrap());
        }

        #[test]
        fn dot_is_symmetric_and_bilinear(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(p.dot(&q), q.dot(&p));
            prop_assert_eq!(p.dot(&(&q + &r)), p.dot(&q) + p.dot(&r));
        }

        #[test]
        fn eval_is_multiplicative(p in arb_poly(), q in arb_poly(), v in arb_rational()) {
            prop_assert_eq!(p.mul(&q).eval(&v), p.eval(&v) * q.eval(&v));
        }
    }
}
