use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::construct::AffineLine;
use crate::error::{Error, Result};
use crate::exactalg::{serde_rational_vec, LaurentPoly, Rational};
use crate::scheme::{smoothing_factor, Mask};
use crate::to_f64;

/// Mask of the `k`-th difference scheme, with symbol
/// `m^k (1-z)^k (1-z^m)^{-k} A(z)`.
pub fn difference_scheme(mask: &Mask, k: u32) -> Result<Mask> {
    let b = mask.factor_smoothing(k).ok_or(Error::NotDivisible { order: k })?;
    let m = Rational::from_integer(mask.arity().into());
    Mask::new(mask.arity(), b.offset(), b.coeffs().iter().map(|c| c * &m).collect())
}

/// The scheme whose contractivity certifies `C^k`: symbol
/// `A(z) / ((1 + ... + z^{m-1})/m)^{k+1}`, i.e. the `(k+1)`-st difference
/// scheme scaled by `1/m`.
fn contraction_symbol(mask: &Mask, k: u32) -> Result<LaurentPoly> {
    mask.factor_smoothing(k + 1).ok_or(Error::NotDivisible { order: k + 1 })
}

/// `b(z) b(z^m) ... b(z^{m^{L-1}})`.
fn iterate_symbol(b: &LaurentPoly, m: u32, levels: u32) -> LaurentPoly {
    let mut out = b.clone();
    let mut power = 1u32;
    for _ in 1..levels {
        power *= m;
        out = &out * &b.compose_power(power);
    }
    out
}

/// `||S_b^L||_inf` for `L = 1..=levels`: largest absolute coefficient sum
/// over the residue classes mod `m^L` of the iterated symbol.
pub fn level_norms(b: &LaurentPoly, m: u32, levels: u32) -> Vec<Rational> {
    (1..=levels)
        .map(|l| {
            let it = iterate_symbol(b, m, l);
            let period = (m as i64).pow(l);
            let mut sums = vec![Rational::zero(); period as usize];
            for (e, c) in it.terms() {
                sums[e.rem_euclid(period) as usize] += c.abs();
            }
            sums.into_iter().max().unwrap_or_else(Rational::zero)
        })
        .collect()
}

fn level_norms_f64(b: &[f64], offset: i64, m: u32, levels: u32) -> Vec<f64> {
    let mut it = b.to_vec();
    let mut it_off = offset;
    let mut power = 1usize;
    let mut out = Vec::with_capacity(levels as usize);
    for l in 1..=levels {
        if l > 1 {
            power *= m as usize;
            let mut next = vec![0.0; it.len() + (b.len() - 1) * power];
            for (i, x) in it.iter().enumerate() {
                if *x == 0.0 {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    next[i + j * power] += x * y;
                }
            }
            it = next;
            it_off += offset * power as i64;
        }
        let period = (m as i64).pow(l);
        let mut sums = vec![0.0; period as usize];
        for (i, x) in it.iter().enumerate() {
            sums[(it_off + i as i64).rem_euclid(period) as usize] += x.abs();
        }
        out.push(sums.into_iter().fold(0.0, f64::max));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub order: u32,
    pub levels: u32,
    /// `||S^L||^{1/L}` for `L = 1..=levels`.
    pub bounds: Vec<f64>,
    #[serde(with = "serde_rational_vec")]
    pub norms: Vec<Rational>,
    pub contractive: bool,
    /// `k - log_m(min bound)` when contractive.
    pub holder_lower_bound: Option<f64>,
}

/// Contractivity of the scheme certifying `C^k`, over `levels` iterations.
pub fn contractivity_bound(mask: &Mask, k: u32, levels: u32) -> Result<RegularityReport> {
    let b = contraction_symbol(mask, k)?;
    let norms = level_norms(&b, mask.arity(), levels);
    let bounds: Vec<f64> = norms
        .iter()
        .zip(1..)
        .map(|(n, l)| to_f64(n).powf(1.0 / l as f64))
        .collect();
    let contractive = norms.iter().any(|n| n < &Rational::from_integer(1.into()));
    let best = bounds.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(RegularityReport {
        order: k,
        levels,
        contractive,
        holder_lower_bound: contractive.then(|| k as f64 - best.ln() / (mask.arity() as f64).ln()),
        bounds,
        norms,
    })
}

/// Contractivity along an affine line of masks, evaluated in `f64`.
#[derive(Clone, Debug)]
pub struct LineRegularity {
    m: u32,
    levels: u32,
    offset: i64,
    base: Vec<f64>,
    direction: Vec<f64>,
}

impl LineRegularity {
    pub fn new(line: &AffineLine, k: u32, levels: u32) -> Result<Self> {
        let f = smoothing_factor(line.arity);
        let divide = |p: &LaurentPoly| -> Result<LaurentPoly> {
            let mut q = p.scale(&Rational::new(1.into(), line.arity.into()));
            for _ in 0..=k {
                q = q.div_exact(&f).ok_or(Error::NotDivisible { order: k + 1 })?;
            }
            Ok(q)
        };
        let (b0, b1) = (divide(&line.base)?, divide(&line.direction)?);
        let lo = [b0.low_degree(), b1.low_degree()]
            .into_iter()
            .flatten()
            .min()
            .unwrap_or(0);
        let hi = [b0.high_degree(), b1.high_degree()]
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(0);
        Ok(LineRegularity {
            m: line.arity,
            levels,
            offset: lo,
            base: (lo..=hi).map(|e| to_f64(&b0.coeff(e))).collect(),
            direction: (lo..=hi).map(|e| to_f64(&b1.coeff(e))).collect(),
        })
    }

    /// `||S^L||^{1/L}` for `L = 1..=levels` at parameter `t`.
    pub fn bounds(&self, t: f64) -> Vec<f64> {
        let b: Vec<f64> = self.base.iter().zip(&self.direction).map(|(x, y)| x + t * y).collect();
        level_norms_f64(&b, self.offset, self.m, self.levels)
            .into_iter()
            .zip(1..)
            .map(|(n, l)| n.powf(1.0 / l as f64))
            .collect()
    }

    /// Level-`levels` bound below one.
    pub fn is_contractive(&self, t: f64) -> bool {
        self.bounds(t).last().is_some_and(|&b| b < 1.0)
    }
}

/// Sampling density and bisection tolerance for [`contractivity_range`].
#[derive(Clone, Copy, Debug)]
pub struct RangeSearch {
    pub samples: usize,
    pub tol: f64,
}

impl Default for RangeSearch {
    fn default() -> Self {
        RangeSearch {
            samples: 2001,
            tol: 1e-6,
        }
    }
}

/// Interval of parameters in `interval` at which the level-`levels` bound of
/// the `C^k` contraction scheme is below one.
pub fn contractivity_range(
    line: &AffineLine,
    k: u32,
    levels: u32,
    interval: (f64, f64),
    search: RangeSearch,
) -> Result<(f64, f64)> {
    let reg = LineRegularity::new(line, k, levels)?;
    let (a, b) = interval;
    let n = search.samples.max(2);
    let grid: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    let flags: Vec<bool> = grid.par_iter().map(|&t| reg.is_contractive(t)).collect();
    let first = flags.iter().position(|&f| f).ok_or(Error::NoContractivePoint)?;
    let last = flags.iter().rposition(|&f| f).expect("nonempty");
    if flags[first..=last].iter().any(|&f| !f) {
        return Err(Error::NotAnInterval);
    }
    let bisect = |mut inside: f64, mut outside: f64| {
        while (inside - outside).abs() > search.tol {
            let mid = 0.5 * (inside + outside);
            if reg.is_contractive(mid) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    let lo = if first == 0 {
        grid[0]
    } else {
        bisect(grid[first], grid[first - 1])
    };
    let hi = if last == n - 1 {
        grid[n - 1]
    } else {
        bisect(grid[last], grid[last + 1])
    };
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactalg::rat;

    #[test]
    fn cantor_difference_scheme() {
        let d = difference_scheme(&catalog::cantor_mask(), 1).unwrap();
        assert_eq!(d, Mask::from_fractions(3, -1, &[(3, 2), (3, 2)]).unwrap());
        let r = contractivity_bound(&catalog::cantor_mask(), 0, 3).unwrap();
        assert_eq!(r.norms, vec![rat(1, 2), rat(1, 4), rat(1, 8)]);
        assert!(r.contractive);
        let h = r.holder_lower_bound.unwrap();
        assert!((h - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn delta_has_no_difference_scheme() {
        let delta = Mask::from_fractions(2, 0, &[(2, 1)]).unwrap();
        assert!(matches!(
            difference_scheme(&delta, 1),
            Err(Error::NotDivisible { order: 1 })
        ));
    }

    #[test]
    fn ternary_divisible_to_order_four() {
        assert!(difference_scheme(&catalog::ternary_mask(), 4).is_ok());
        assert!(contractivity_bound(&catalog::ternary_mask(), 4, 1).is_err());
    }

    #[test]
    fn iterated_norm_matches_subdivision_matrices() {
        // Oracle: the level-2 norm is the max row sum of S_b applied twice
        // to unit sequences, computed by explicit subdivision.
        let a = catalog::quinary_mask(&rat(-7, 5));
        let b = a.factor_smoothing(1).unwrap();
        let m = 5i64;
        let norms = level_norms(&b, 5, 2);
        let subdivide = |c: &std::collections::BTreeMap<i64, Rational>| {
            let mut out = std::collections::BTreeMap::new();
            for (&k, ck) in c {
                for (e, be) in b.terms() {
                    *out.entry(m * k + e).or_insert_with(Rational::zero) += ck * be;
                }
            }
            out
        };
        // Row n of S^2 collects coefficients from every unit input.
        let mut rows: std::collections::BTreeMap<i64, Rational> = Default::default();
        for k in -20..=20 {
            let unit = std::iter::once((k, rat(1, 1))).collect();
            for (n, v) in subdivide(&subdivide(&unit)) {
                *rows.entry(n).or_insert_with(Rational::zero) += v.abs();
            }
        }
        // Interior rows see every input that can reach them.
        let interior = rows.range(-200..=200).map(|(_, v)| v.clone()).max().unwrap();
        assert_eq!(norms[1], interior);
    }

    #[test]
    fn float_norms_agree_with_exact() {
        let a = catalog::quinary_mask(&rat(-7, 5));
        let b = a.factor_smoothing(3).unwrap();
        let exact = level_norms(&b, 5, 3);
        let bf: Vec<f64> = b.coeffs().iter().map(to_f64).collect();
        let float = level_norms_f64(&bf, b.offset(), 5, 3);
        for (e, f) in exact.iter().zip(float) {
            assert!((to_f64(e) - f).abs() < 1e-12);
        }
    }
}
