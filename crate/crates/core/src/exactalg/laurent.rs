use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;

/// Finitely supported Laurent polynomial `sum_k c_k z^k` with exact
/// rational coefficients.
///
/// The stored coefficient vector never has zero entries at either end, so
/// structural equality is mathematical equality. The zero polynomial has an
/// empty vector and offset 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    offset: i64,
    coeffs: Vec<Rational>,
}

impl LaurentPoly {
    pub fn new(offset: i64, coeffs: Vec<Rational>) -> Self {
        let mut p = LaurentPoly { offset, coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        LaurentPoly {
            offset: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, exp: i64) -> Self {
        Self::new(exp, vec![c])
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs;
    /// repeated exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let terms: Vec<(i64, Rational)> = terms.into_iter().collect();
        let (Some(lo), Some(hi)) = (terms.iter().map(|t| t.0).min(), terms.iter().map(|t| t.0).max()) else {
            return Self::zero();
        };
        let mut coeffs = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::new(lo, coeffs)
    }

    fn normalize(&mut self) {
        let Some(first) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            self.coeffs.clear();
            self.offset = 0;
            return;
        };
        let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        self.coeffs.truncate(last + 1);
        self.coeffs.drain(..first);
        self.offset += first as i64;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.offset)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.offset + self.coeffs.len() as i64 - 1)
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Dense coefficients from `offset()` upward.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        let i = exp - self.offset;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Rational::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.offset + i as i64, c))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.offset, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            offset: self.offset + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `p(z^k)` for `k >= 1`.
    pub fn compose_power(&self, k: u32) -> Self {
        assert!(k >= 1, "compose_power needs a positive power");
        let k = k as i64;
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c.clone())))
    }

    /// `p(1)`, the coefficient sum.
    pub fn eval_at_one(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    /// `p'(1) = sum_k k p_k`.
    pub fn derivative_at_one(&self) -> Rational {
        self.terms().map(|(e, c)| c * Rational::from_integer(e.into())).sum()
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`
    /// in the ring of Laurent polynomials.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Both sides are z^offset times an ordinary polynomial with nonzero
        // constant term; divide those from the top degree down.
        let n = self.coeffs.len();
        let d = divisor.coeffs.len();
        if n < d {
            return None;
        }
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); n - d + 1];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + d - 1] / lead;
            if !q.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * dc;
                }
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.offset - divisor.offset, quot))
    }

    /// Coefficients reversed: `z^(lo+hi) p(1/z)`.
    pub fn mirrored(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        LaurentPoly {
            offset: self.offset,
            coeffs: c,
        }
    }
}

impl Default for LaurentPoly {
    fn default() -> Self {
        Self::zero()
    }
}

fn add_impl(p: &LaurentPoly, q: &LaurentPoly, sign: bool) -> LaurentPoly {
    if q.is_zero() {
        return p.clone();
    }
    if p.is_zero() {
        return if sign { q.clone() } else { -q };
    }
    let lo = p.offset.min(q.offset);
    let hi = p.high_degree().unwrap().max(q.high_degree().unwrap());
    let mut out = vec![Rational::zero(); (hi - lo + 1) as usize];
    for (i, c) in p.coeffs.iter().enumerate() {
        out[(p.offset - lo) as usize + i] += c;
    }
    for (i, c) in q.coeffs.iter().enumerate() {
        let slot = &mut out[(q.offset - lo) as usize + i];
        if sign {
            *slot += c;
        } else {
            *slot -= c;
        }
    }
    LaurentPoly::new(lo, out)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        add_impl(self, rhs, true)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        add_impl(self, rhs, false)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.offset + rhs.offset, out)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use proptest::prelude::*;

    fn poly(offset: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::new(offset, c.iter().map(|&x| rat(x, 1)).collect())
    }

    /// Direct convolution of coefficient lists, kept apart from `Mul`.
    fn convolve(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for i in 0..a.len() {
            for j in 0..b.len() {
                out[i + j] += &a[i] * &b[j];
            }
        }
        out
    }

    #[test]
    fn normalization_trims_both_ends() {
        let p = LaurentPoly::new(-3, vec![rat(0, 1), rat(2, 1), rat(0, 1), rat(1, 1), rat(0, 1)]);
        assert_eq!(p.low_degree(), Some(-2));
        assert_eq!(p.high_degree(), Some(0));
        assert!(LaurentPoly::new(5, vec![rat(0, 1); 3]).is_zero());
        assert_eq!(LaurentPoly::new(5, vec![rat(0, 1)]), LaurentPoly::zero());
    }

    #[test]
    fn identity_product() {
        let p = poly(-2, &[1, -3, 4]);
        assert_eq!(&LaurentPoly::one() * &p, p);
    }

    #[test]
    fn ternary_smoothing_factor_fourth_power() {
        let third: Vec<Rational> = vec![rat(1, 3); 3];
        let mut oracle = vec![rat(1, 1)];
        for _ in 0..4 {
            oracle = convolve(&oracle, &third);
        }
        assert_eq!(oracle[0], rat(1, 81));
        assert_eq!(oracle[4], rat(19, 81));

        let s = LaurentPoly::new(0, third);
        let p4 = &(&s * &s) * &(&s * &s);
        assert_eq!(p4.coeff(0), rat(1, 81));
        assert_eq!(p4.coeff(4), rat(19, 81));
        assert_eq!(p4.coeffs(), oracle.as_slice());
    }

    #[test]
    fn derivative_at_one() {
        assert_eq!(LaurentPoly::zero().derivative_at_one(), rat(0, 1));
        // Cantor symbol: (1/6)z^-1 + 1/3 + (1/3)z + (1/6)z^2
        let cantor = LaurentPoly::new(-1, vec![rat(1, 6), rat(1, 3), rat(1, 3), rat(1, 6)]);
        assert_eq!(cantor.derivative_at_one(), rat(1, 2));
    }

    #[test]
    fn division() {
        let s = poly(0, &[1, 1, 1]);
        let q = poly(-4, &[2, 0, -1, 7]);
        let prod = &s * &q;
        assert_eq!(prod.div_exact(&s), Some(q));
        assert_eq!(poly(0, &[1, 1]).div_exact(&s), None);
        assert_eq!(poly(0, &[1, 2, 2, 1]).div_exact(&s), Some(poly(0, &[1, 1])));
        assert_eq!(poly(0, &[1, 2, 2, 2]).div_exact(&s), None);
    }

    #[test]
    fn compose_power_spreads_exponents() {
        let p = poly(-1, &[1, 2, 3]);
        let q = p.compose_power(3);
        assert_eq!(q.coeff(-3), rat(1, 1));
        assert_eq!(q.coeff(0), rat(2, 1));
        assert_eq!(q.coeff(3), rat(3, 1));
        assert_eq!(q.coeff(1), rat(0, 1));
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        (-6i64..6, prop::collection::vec((-20i64..20, 1i64..9), 0..7))
            .prop_map(|(o, c)| LaurentPoly::new(o, c.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn product_commutes_and_degrees_add(p in arb_poly(), q in arb_poly()) {
            let pq = &p * &q;
            prop_assert_eq!(&pq, &(&q * &p));
            if !p.is_zero() && !q.is_zero() {
                prop_assert_eq!(pq.low_degree().unwrap(), p.low_degree().unwrap() + q.low_degree().unwrap());
                prop_assert_eq!(pq.high_degree().unwrap(), p.high_degree().unwrap() + q.high_degree().unwrap());
            }
        }

        #[test]
        fn division_inverts_product(p in arb_poly(), q in arb_poly()) {
            prop_assume!(!q.is_zero());
            prop_assert_eq!((&p * &q).div_exact(&q), Some(p));
        }
    }
}
