//! Masks, symbols, sub-symbols and shift classification.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{floor_div, rat, serde_rational_vec, LaurentPoly, Rational};

/// A stationary `m`-ary subdivision mask `{a_k}` for `k` in
/// `[first_index, last_index]`.
///
/// The first and last stored coefficients are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MaskRepr", into = "MaskRepr")]
pub struct Mask {
    arity: u32,
    offset: i64,
    coeffs: Vec<Rational>,
}

/// Wire form of a mask; not normalized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaskRepr {
    pub arity: u32,
    pub offset: i64,
    #[serde(with = "serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl TryFrom<MaskRepr> for Mask {
    type Error = Error;
    fn try_from(r: MaskRepr) -> Result<Mask> {
        Mask::new(r.arity, r.offset, r.coeffs)
    }
}

impl From<Mask> for MaskRepr {
    fn from(m: Mask) -> MaskRepr {
        MaskRepr {
            arity: m.arity,
            offset: m.offset,
            coeffs: m.coeffs,
        }
    }
}

impl Mask {
    /// Zero coefficients at either end are dropped (and `offset` moved).
    pub fn new(arity: u32, offset: i64, coeffs: Vec<Rational>) -> Result<Mask> {
        if arity < 2 {
            return Err(Error::InvalidArity(arity));
        }
        let poly = LaurentPoly::new(offset, coeffs);
        if poly.is_zero() {
            return Err(Error::EmptyMask);
        }
        Ok(Mask {
            arity,
            offset: poly.offset(),
            coeffs: poly.coeffs().to_vec(),
        })
    }

    /// Convenience for integer-over-integer literals.
    pub fn from_fractions(arity: u32, offset: i64, coeffs: &[(i64, i64)]) -> Result<Mask> {
        Mask::new(arity, offset, coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// `k_l`, index of the first nonzero coefficient.
    pub fn first_index(&self) -> i64 {
        self.offset
    }

    /// `k_r`, index of the last nonzero coefficient.
    pub fn last_index(&self) -> i64 {
        self.offset + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Rational {
        let i = k - self.offset;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Rational::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// `(k, a_k)` over the stored window.
    pub fn indexed(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.offset + i as i64, c))
    }

    fn m_rat(&self) -> Rational {
        Rational::from_integer(self.arity.into())
    }

    /// `A(z) = (1/m) sum_k a_k z^k`.
    pub fn symbol(&self) -> LaurentPoly {
        LaurentPoly::new(self.offset, self.coeffs.clone()).scale(&self.m_rat().recip())
    }

    /// Sub-symbol `A_n(z) = (1/m) sum_k a_{mk+n} z^{mk+n}` for any integer
    /// `n`; `A_{n+m} = A_n`.
    pub fn sub_symbol(&self, n: i64) -> LaurentPoly {
        let m = self.arity as i64;
        let inv_m = self.m_rat().recip();
        let lo = floor_div(self.first_index() - n, m);
        let hi = floor_div(self.last_index() - n, m);
        LaurentPoly::from_terms((lo..=hi).map(|k| {
            let e = m * k + n;
            (e, self.coeff(e) * &inv_m)
        }))
    }

    /// `[A_0, ..., A_{m-1}]`.
    pub fn sub_symbols(&self) -> Vec<LaurentPoly> {
        (0..self.arity as i64).map(|n| self.sub_symbol(n)).collect()
    }

    /// Shift parameter `tau = A'(1)`, always derived from the coefficients.
    pub fn tau(&self) -> Rational {
        self.symbol().derivative_at_one()
    }

    fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn classify(&self) -> SchemeDescriptor {
        classify_symmetry(self)
    }

    /// `B(z)` with `A(z) = ((1+...+z^{m-1})/m)^d B(z)`, or `None` when that
    /// factorization does not exist.
    pub fn factor_smoothing(&self, d: u32) -> Option<LaurentPoly> {
        let factor = smoothing_factor(self.arity);
        let mut b = self.symbol();
        for _ in 0..d {
            b = b.div_exact(&factor)?;
        }
        Some(b)
    }

    /// Largest `d` for which [`Mask::factor_smoothing`] succeeds.
    pub fn smoothing_order(&self) -> u32 {
        let factor = smoothing_factor(self.arity);
        let mut b = self.symbol();
        let mut d = 0;
        while let Some(q) = b.div_exact(&factor) {
            b = q;
            d += 1;
        }
        d
    }

    /// Every coefficient multiplied by `s`.
    pub fn scaled(&self, s: &Rational) -> Result<Mask> {
        Mask::new(self.arity, self.offset, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(crate::to_f64).collect()
    }
}

/// Symmetry class of a mask's support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// `tau = 0`, `k_l = -k_r`, palindromic coefficients.
    PrimalSymmetric,
    /// `tau = 1/2`, `k_l = 1 - k_r`, palindromic coefficients.
    DualSymmetric,
    Asymmetric,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeDescriptor {
    pub mask: Mask,
    pub tau: Rational,
    pub symmetry: Symmetry,
    /// Largest verified order of the smoothing factor in the symbol.
    pub smoothing_order: u32,
}

pub fn classify_symmetry(mask: &Mask) -> SchemeDescriptor {
    let tau = mask.tau();
    let (kl, kr) = (mask.first_index(), mask.last_index());
    let pal = mask.is_palindromic();
    let symmetry = if pal && kl == -kr && tau.is_zero() {
        Symmetry::PrimalSymmetric
    } else if pal && kl == 1 - kr && tau == rat(1, 2) {
        Symmetry::DualSymmetric
    } else {
        Symmetry::Asymmetric
    };
    SchemeDescriptor {
        mask: mask.clone(),
        tau,
        symmetry,
        smoothing_order: mask.smoothing_order(),
    }
}

/// `(1 + z + ... + z^{m-1}) / m`.
pub fn smoothing_factor(m: u32) -> LaurentPoly {
    LaurentPoly::new(0, vec![rat(1, m as i64); m as usize])
}

/// Support `[(1-2k*)/(2(m-1)), (2k*-1)/(2(m-1))]` of the basic limit
/// function of a dual mask supported on `{1-k*, ..., k*}`.
pub fn support_interval(m: u32, k_star: i64) -> (Rational, Rational) {
    assert!(m >= 2 && k_star >= 1);
    let hi = rat(2 * k_star - 1, 2 * (m as i64 - 1));
    (-hi.clone(), hi)
}

/// `true` when `x` is an integer.
pub(crate) fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}
