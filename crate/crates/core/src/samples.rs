//! Prescribed values of a limit function on a lattice `Z/T`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{ceil_div, floor_div, rat, serde_rational_vec, LaurentPoly, Rational};

/// Values `phi((offset + i) / T)`; zero everywhere else.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SampleRepr", into = "SampleRepr")]
pub struct SampleSet {
    density: u32,
    offset: i64,
    values: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRepr {
    #[serde(rename = "T")]
    pub density: u32,
    pub offset: i64,
    #[serde(with = "serde_rational_vec")]
    pub values: Vec<Rational>,
}

impl TryFrom<SampleRepr> for SampleSet {
    type Error = Error;
    fn try_from(r: SampleRepr) -> Result<SampleSet> {
        SampleSet::new(r.density, r.offset, r.values)
    }
}

impl From<SampleSet> for SampleRepr {
    fn from(s: SampleSet) -> SampleRepr {
        SampleRepr {
            density: s.density,
            offset: s.offset,
            values: s.values,
        }
    }
}

impl SampleSet {
    pub fn new(density: u32, offset: i64, values: Vec<Rational>) -> Result<SampleSet> {
        if density == 0 {
            return Err(Error::InvalidDensity);
        }
        let p = LaurentPoly::new(offset, values);
        Ok(SampleSet {
            density,
            offset: p.offset(),
            values: p.coeffs().to_vec(),
        })
    }

    pub fn from_fractions(density: u32, offset: i64, values: &[(i64, i64)]) -> Result<SampleSet> {
        SampleSet::new(density, offset, values.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    /// `phi = delta` on `Z`, sampled on `Z/T`.
    pub fn delta(density: u32) -> Result<SampleSet> {
        SampleSet::new(density, 0, vec![Rational::one()])
    }

    /// Lattice density `T`.
    pub fn density(&self) -> u32 {
        self.density
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Lattice indices `j` with a stored value, i.e. points `j/T`.
    pub fn index_range(&self) -> (i64, i64) {
        (self.offset, self.offset + self.values.len() as i64 - 1)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `phi(j / T)`.
    pub fn at(&self, j: i64) -> Rational {
        let i = j - self.offset;
        if i < 0 || i >= self.values.len() as i64 {
            Rational::zero()
        } else {
            self.values[i as usize].clone()
        }
    }

    /// `phi(x)`; `x` must lie on the lattice.
    pub fn at_point(&self, x: &Rational) -> Result<Rational> {
        let scaled = x * Rational::from_integer(self.density.into());
        if !scaled.denom().is_one() {
            return Err(Error::LatticeMismatch {
                expected: self.density,
                found: 0,
            });
        }
        let j: i64 = scaled
            .numer()
            .try_into()
            .map_err(|_| Error::Parse(format!("lattice index {scaled}")))?;
        Ok(self.at(j))
    }

    /// Nonzero `(j, phi(j/T))` pairs.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(i, v)| (self.offset + i as i64, v))
    }

    /// Values at the integers are `delta_{0,n}`.
    pub fn is_interpolatory(&self) -> bool {
        let t = self.density as i64;
        let (lo, hi) = self.index_range();
        if self.is_empty() {
            return false;
        }
        (ceil_div(lo, t)..=floor_div(hi, t)).all(|n| {
            let expect = if n == 0 { Rational::one() } else { Rational::zero() };
            self.at(n * t) == expect
        }) && self.at(0).is_one()
    }

    /// `phi(x) = phi(-x)` on the lattice.
    pub fn is_symmetric(&self) -> bool {
        let (lo, hi) = self.index_range();
        lo == -hi && self.values.iter().eq(self.values.iter().rev())
    }

    /// Largest `|x|` with `phi(x) != 0`.
    pub fn support_radius(&self) -> Rational {
        self.nonzero()
            .map(|(j, _)| rat(j.abs(), self.density as i64))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Samples on the coarser lattice `Z/coarse`, which must divide `T`.
    pub fn restrict(&self, coarse: u32) -> Result<SampleSet> {
        if coarse == 0 || !self.density.is_multiple_of(coarse) {
            return Err(Error::LatticeMismatch {
                expected: coarse,
                found: self.density,
            });
        }
        if coarse == self.density {
            return Ok(self.clone());
        }
        let step = (self.density / coarse) as i64;
        let (lo, hi) = self.index_range();
        let (clo, chi) = (ceil_div(lo, step), floor_div(hi, step));
        if clo > chi {
            return SampleSet::new(coarse, 0, vec![]);
        }
        SampleSet::new(coarse, clo, (clo..=chi).map(|j| self.at(j * step)).collect())
    }

    /// `Phi_{T,n}(z) = (1/T) sum_k phi(mk + n/T) z^{mTk + n}`.
    ///
    /// Depends on `n` only modulo `mT`.
    pub fn phi_poly(&self, m: u32, n: i64) -> LaurentPoly {
        let period = m as i64 * self.density as i64;
        let scale = rat(1, self.density as i64);
        LaurentPoly::from_terms(
            self.nonzero()
                .filter(|(j, _)| (j - n).rem_euclid(period) == 0)
                .map(|(j, v)| (j, v * &scale)),
        )
    }
}

/// Half-integer values of the Dubuc-Deslauriers `2n`-point limit function,
/// together with `delta` on the integers, on `Z/2`.
///
/// `phi(k + 1/2)` is the weight of the node `-k` in the Lagrange interpolant
/// through the `2n` integers nearest to `1/2`, evaluated at `1/2`.
pub fn dd_samples(n: u32) -> SampleSet {
    assert!(n >= 1, "Dubuc-Deslauriers order must be positive");
    let n = n as i64;
    let half = rat(1, 2);
    let nodes: Vec<i64> = (1 - n..=n).collect();
    let mut values = vec![Rational::zero(); (4 * n - 1) as usize];
    let offset = 1 - 2 * n;
    for &j in &nodes {
        let w: Rational = nodes
            .iter()
            .filter(|&&i| i != j)
            .map(|&i| (&half - Rational::from_integer(i.into())) / Rational::from_integer((j - i).into()))
            .product();
        // phi(1/2 - j) sits at lattice index 1 - 2j.
        values[(1 - 2 * j - offset) as usize] = w;
    }
    values[(-offset) as usize] = Rational::one();
    SampleSet::new(2, offset, values).expect("density 2")
}

/// `(1 - w) s1 + w s2`, entrywise over the union of supports.
pub fn mix_samples(s1: &SampleSet, s2: &SampleSet, w: &Rational) -> Result<SampleSet> {
    if s1.density != s2.density {
        return Err(Error::LatticeMismatch {
            expected: s1.density,
            found: s2.density,
        });
    }
    let (a, b) = (s1.index_range(), s2.index_range());
    let lo = a.0.min(b.0);
    let hi = a.1.max(b.1);
    let one_minus = Rational::one() - w;
    SampleSet::new(
        s1.density,
        lo,
        (lo..=hi).map(|j| &one_minus * s1.at(j) + w * s2.at(j)).collect(),
    )
}

/// Samples of the limit function of the ternary Cantor-type scheme on `Z/2`:
/// `delta` on the integers and `1/2` at `+-1/2`.
pub fn cantor_samples() -> SampleSet {
    SampleSet::from_fractions(2, -1, &[(1, 2), (1, 1), (1, 2)]).expect("density 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn four_point_values() {
        let s = dd_samples(2);
        assert_eq!(s.index_range(), (-3, 3));
        let expect: Vec<Rational> = [-1, 0, 9, 16, 9, 0, -1].iter().map(|&v| rat(v, 16)).collect();
        assert_eq!(s.values(), expect.as_slice());
    }

    #[test]
    fn six_point_values() {
        // Lagrange weights at 1/2 over nodes -2..=3, computed by hand:
        // l_j(1/2) = prod_{i != j} (1/2 - i) / (j - i).
        let s = dd_samples(3);
        let half: Vec<Rational> = (0..3).map(|k| s.at(2 * k + 1)).collect();
        assert_eq!(half, vec![rat(75, 128), rat(-25, 256), rat(3, 256)]);
        assert!(s.is_symmetric());
    }

    #[test]
    fn two_point_is_linear_interpolation() {
        let s = dd_samples(1);
        assert_eq!(s.at(1), rat(1, 2));
        assert_eq!(s.at(-1), rat(1, 2));
        assert_eq!(s.nonzero().count(), 3);
    }

    #[test]
    fn mixing() {
        let (dd4, dd6) = (dd_samples(2), dd_samples(3));
        assert_eq!(mix_samples(&dd4, &dd6, &rat(0, 1)).unwrap(), dd4);
        assert_eq!(mix_samples(&dd4, &dd6, &rat(1, 1)).unwrap(), dd6);
        let half = mix_samples(&dd4, &dd6, &rat(1, 2)).unwrap();
        assert_eq!(half.at(5), rat(3, 512));
        assert_eq!(half.at(-3), rat(-41, 512));
        assert_eq!(half.at(1), rat(147, 256));
        let odd = SampleSet::delta(3).unwrap();
        assert!(mix_samples(&dd4, &odd, &rat(1, 2)).is_err());
    }

    #[test]
    fn interpolatory_phi_polys() {
        let s = SampleSet::delta(2).unwrap();
        assert_eq!(s.phi_poly(3, 0), LaurentPoly::constant(rat(1, 2)));
        for gamma in 1..3 {
            assert!(s.phi_poly(3, 2 * gamma).is_zero());
        }
    }

    #[test]
    fn phi_poly_from_four_point_samples() {
        // m = 3, n = 1 collects j = 1 mod 6 from {-3, -1, 1, 3}: j = 1 only.
        let s = dd_samples(2);
        assert_eq!(s.phi_poly(3, 1), LaurentPoly::monomial(rat(9, 32), 1));
        // n = 3 collects j = 3 and j = -3.
        let p3 = s.phi_poly(3, 3);
        assert_eq!(p3, LaurentPoly::from_terms([(3, rat(-1, 32)), (-3, rat(-1, 32))]));
        assert_eq!(s.phi_poly(3, 3 + 6), p3);
        assert_eq!(s.phi_poly(3, 3 - 12), p3);
    }

    #[test]
    fn restriction() {
        let s = dd_samples(2);
        assert_eq!(s.restrict(1).unwrap(), SampleSet::delta(1).unwrap());
        assert!(s.restrict(4).is_err());
        assert!(!s.restrict(1).unwrap().is_empty());
    }

    #[test]
    fn interpolatory_check() {
        assert!(dd_samples(2).is_interpolatory());
        assert!(cantor_samples().is_interpolatory());
        let bad = SampleSet::from_fractions(2, 0, &[(1, 1), (0, 1), (1, 100)]).unwrap();
        assert!(!bad.is_interpolatory());
    }

    #[test]
    fn json_shape() {
        let s = cantor_samples();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"T":2,"offset":-1,"values":["1/2","1","1/2"]}"#);
        assert_eq!(serde_json::from_str::<SampleSet>(&j).unwrap(), s);
    }

    proptest! {
        #[test]
        fn residues_partition_samples(n in 1u32..5, m in 2u32..6) {
            let s = dd_samples(n);
            let t = s.density() as i64;
            let total = (0..(m as i64 * t))
                .map(|r| s.phi_poly(m, r))
                .fold(LaurentPoly::zero(), |acc, p| &acc + &p);
            let direct = LaurentPoly::from_terms(s.nonzero().map(|(j, v)| (j, v * rat(1, t))));
            prop_assert_eq!(total, direct);
        }

        #[test]
        fn dd_symmetric_and_partition_of_unity(n in 1u32..7) {
            let s = dd_samples(n);
            prop_assert!(s.is_symmetric());
            let sum: Rational = s.nonzero().filter(|(j, _)| j.rem_euclid(2) == 1).map(|(_, v)| v.clone()).sum();
            prop_assert_eq!(sum, rat(1, 1));
        }

        #[test]
        fn dd_lagrange_exactness(n in 1u32..6, coeffs in prop::collection::vec(-5i64..6, 1..12)) {
            // sum_k pi(k) phi(1/2 - k) = pi(1/2) for deg pi <= 2n - 1.
            let s = dd_samples(n);
            let deg = (2 * n as usize).min(coeffs.len());
            let pi = |x: &Rational| -> Rational {
                coeffs[..deg].iter().rev().fold(Rational::zero(), |acc, &c| acc * x + rat(c, 1))
            };
            let half = rat(1, 2);
            let lhs: Rational = (-(n as i64) - 1..=n as i64 + 1)
                .map(|k| pi(&rat(k, 1)) * s.at(1 - 2 * k))
                .sum();
            prop_assert_eq!(lhs, pi(&half));
        }
    }
}
