//! Exact checks of the polynomial identities that characterize refinability
//! and dual interpolation.
//!
//! Every check returns the formal difference `LHS - RHS` as a Laurent
//! polynomial; an identity holds iff that difference is the zero polynomial.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{ceil_div, floor_div, rat, LaurentPoly, Rational};
use crate::samples::SampleSet;
use crate::scheme::{is_integer, Mask};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityResidual {
    #[serde(serialize_with = "serialize_poly")]
    pub residual: LaurentPoly,
    pub satisfied: bool,
}

impl IdentityResidual {
    fn new(residual: LaurentPoly) -> Self {
        let satisfied = residual.is_zero();
        IdentityResidual { residual, satisfied }
    }
}

fn serialize_poly<S: serde::Serializer>(p: &LaurentPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(None)?;
    for (e, c) in p.terms() {
        seq.serialize_element(&(e, c.to_string()))?;
    }
    seq.end()
}

/// The samples viewed on `Z/t`.
fn on_lattice(s: &SampleSet, t: u32) -> Result<SampleSet> {
    if s.density().is_multiple_of(t) {
        s.restrict(t)
    } else {
        Err(Error::LatticeMismatch {
            expected: t,
            found: s.density(),
        })
    }
}

/// General refinability identity on the lattice `Z/T`.
///
/// `sum_{g<mT} Phi_{T,g}(z^m) = m z^{-tau T} sum_beta sum_{g + beta T = tau T (mod m)} A_beta(z^T) Phi_{T,g}(z)`
pub fn verify_refinability(mask: &Mask, s: &SampleSet, t: u32) -> Result<IdentityResidual> {
    let tau = mask.tau();
    let tau_t = &tau * Rational::from_integer(t.into());
    if !is_integer(&tau_t) || t == 0 {
        return Err(Error::ShiftLatticeMismatch {
            tau: Box::new(tau),
            lattice: t,
        });
    }
    let tau_t: i64 = tau_t.to_integer().try_into().map_err(|_| Error::ShiftLatticeMismatch {
        tau: Box::new(tau.clone()),
        lattice: t,
    })?;
    let s = on_lattice(s, t)?;
    let m = mask.arity() as i64;
    let period = m * t as i64;

    let phis: Vec<LaurentPoly> = (0..period).map(|g| s.phi_poly(mask.arity(), g)).collect();
    let lhs = phis
        .iter()
        .fold(LaurentPoly::zero(), |acc, p| &acc + &p.compose_power(mask.arity()));

    let mut inner = LaurentPoly::zero();
    for beta in 0..m {
        let a = mask.sub_symbol(beta).compose_power(t);
        if a.is_zero() {
            continue;
        }
        for (g, phi) in phis.iter().enumerate() {
            if (g as i64 + beta * t as i64 - tau_t).rem_euclid(m) == 0 && !phi.is_zero() {
                inner = &inner + &(&a * phi);
            }
        }
    }
    let rhs = inner.shift(-tau_t).scale(&Rational::from_integer(m.into()));
    Ok(IdentityResidual::new(&lhs - &rhs))
}

fn dual_preconditions(mask: &Mask, s: &SampleSet) -> Result<SampleSet> {
    if mask.arity() == 2 {
        return Err(Error::ArityTwoUnsupported);
    }
    let tau = mask.tau();
    if tau != rat(1, 2) {
        return Err(Error::ShiftMismatch { tau: Box::new(tau) });
    }
    on_lattice(s, 2)
}

/// `sum_g Phi_{2,2g}(z^m)`, which is `1/2` for interpolatory samples.
///
/// Taken from the samples so that a perturbed integer value shows up in the
/// residual instead of being assumed away.
fn integer_part(s: &SampleSet, m: u32) -> LaurentPoly {
    (0..m as i64).fold(LaurentPoly::zero(), |acc, g| {
        &acc + &s.phi_poly(m, 2 * g).compose_power(m)
    })
}

fn odd_part(s: &SampleSet, m: u32) -> (LaurentPoly, Vec<LaurentPoly>) {
    let phis: Vec<LaurentPoly> = (0..m as i64).map(|g| s.phi_poly(m, 2 * g + 1)).collect();
    let lhs = phis
        .iter()
        .fold(LaurentPoly::zero(), |acc, p| &acc + &p.compose_power(m));
    (lhs, phis)
}

fn finish(lhs: LaurentPoly, inner: LaurentPoly, m: u32) -> IdentityResidual {
    let rhs = inner.shift(-1).scale(&Rational::from_integer(m.into()));
    IdentityResidual::new(&lhs - &rhs)
}

/// Dual interpolatory characterization, with the odd- or even-arity form of
/// the right-hand side chosen by `m`.
pub fn verify_dual_interpolatory(mask: &Mask, s: &SampleSet) -> Result<IdentityResidual> {
    let s = dual_preconditions(mask, s)?;
    let m = mask.arity();
    let mi = m as i64;
    let (odd_lhs, phis) = odd_part(&s, m);
    let lhs = &integer_part(&s, m) + &odd_lhs;
    let a2 = |n: i64| mask.sub_symbol(n).compose_power(2);

    let mut inner = LaurentPoly::zero();
    if m % 2 == 1 {
        inner = &inner + &a2((mi + 1) / 2).scale(&rat(1, 2));
        for (g, phi) in phis.iter().enumerate() {
            inner = &inner + &(&a2(mi - g as i64) * phi);
        }
    } else {
        for (g, phi) in phis.iter().enumerate() {
            let g = g as i64;
            let w = &a2(mi / 2 - g) + &a2(mi - g);
            inner = &inner + &(&w * phi);
        }
    }
    Ok(finish(lhs, inner, m))
}

/// The intermediate form shared by both arities, with the index conditions
/// `2 beta = 1 (mod m)` and `2 (g + beta) = 0 (mod m)` enumerated directly.
pub fn verify_lemma_form(mask: &Mask, s: &SampleSet) -> Result<IdentityResidual> {
    let s = dual_preconditions(mask, s)?;
    let m = mask.arity();
    let mi = m as i64;
    let (odd_lhs, phis) = odd_part(&s, m);
    let lhs = &integer_part(&s, m) + &odd_lhs;
    let half = rat(1, 2);

    let mut inner = LaurentPoly::zero();
    for beta in 0..mi {
        let a = mask.sub_symbol(beta).compose_power(2);
        if (2 * beta - 1).rem_euclid(mi) == 0 {
            inner = &inner + &a.scale(&half);
        }
        for (g, phi) in phis.iter().enumerate() {
            if (2 * (g as i64 + beta)).rem_euclid(mi) == 0 {
                inner = &inner + &(&a * phi);
            }
        }
    }
    Ok(finish(lhs, inner, m))
}

/// `phi(j/T) - sum_l a_l phi(m j/T - l + tau)` for every lattice index `j`
/// where either side can be nonzero; evaluated pointwise.
pub fn refinement_defects(mask: &Mask, s: &SampleSet) -> Result<Vec<(i64, Rational)>> {
    let t = s.density() as i64;
    let tau_t = mask.tau() * Rational::from_integer(t.into());
    if !is_integer(&tau_t) {
        return Err(Error::ShiftLatticeMismatch {
            tau: Box::new(mask.tau()),
            lattice: s.density(),
        });
    }
    let tau_t: i64 = tau_t.to_integer().try_into().expect("small shift");
    let m = mask.arity() as i64;
    let (lo, hi) = s.index_range();
    // Right side reads index m j - l T + tau T; it can be nonzero only when
    // that lands in [lo, hi] for some l in the mask window.
    let jlo = floor_div(lo + mask.first_index() * t - tau_t, m).min(lo);
    let jhi = ceil_div(hi + mask.last_index() * t - tau_t, m).max(hi);
    Ok((jlo..=jhi)
        .map(|j| {
            let rhs: Rational = mask.indexed().map(|(l, a)| a * s.at(m * j - l * t + tau_t)).sum();
            (j, s.at(j) - rhs)
        })
        .filter(|(_, d)| !d.is_zero())
        .collect())
}

/// Whether `samples` satisfy the refinement equation exactly on their own
/// lattice.
pub fn is_consistent(mask: &Mask, samples: &SampleSet) -> Result<bool> {
    Ok(refinement_defects(mask, samples)?.is_empty())
}

/// `A_g(1) = 1/m` for every residue `g`.
pub fn sub_symbol_sums_hold(mask: &Mask) -> bool {
    let target = rat(1, mask.arity() as i64);
    mask.sub_symbols().iter().all(|a| a.eval_at_one() == target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::samples::{cantor_samples, dd_samples, mix_samples};
    use num_traits::One;
    use proptest::prelude::*;

    fn perturb(s: &SampleSet, j: i64) -> SampleSet {
        let (lo, _) = s.index_range();
        let mut v = s.values().to_vec();
        v[(j - lo) as usize] += rat(1, 100);
        SampleSet::new(s.density(), lo, v).unwrap()
    }

    #[test]
    fn cantor_is_refinable_and_dual_interpolatory() {
        let (a, s) = (catalog::cantor_mask(), cantor_samples());
        assert!(verify_refinability(&a, &s, 2).unwrap().satisfied);
        assert!(verify_dual_interpolatory(&a, &s).unwrap().satisfied);
        assert!(verify_lemma_form(&a, &s).unwrap().satisfied);
        assert!(is_consistent(&a, &s).unwrap());
    }

    #[test]
    fn ternary_with_four_point_samples() {
        let (a, s) = (catalog::ternary_mask(), dd_samples(2));
        assert!(verify_refinability(&a, &s, 2).unwrap().satisfied);
        assert!(verify_dual_interpolatory(&a, &s).unwrap().satisfied);
        let bad = perturb(&s, 1);
        assert!(!verify_refinability(&a, &bad, 2).unwrap().satisfied);
        assert!(!verify_dual_interpolatory(&a, &bad).unwrap().satisfied);
    }

    #[test]
    fn quaternary_quartic_member_even_branch() {
        let a = catalog::quaternary_quartic_mask();
        let s = mix_samples(&dd_samples(2), &dd_samples(3), &rat(1, 1)).unwrap();
        assert!(verify_dual_interpolatory(&a, &s).unwrap().satisfied);
        assert!(verify_lemma_form(&a, &s).unwrap().satisfied);
    }

    #[test]
    fn quinary_at_zero() {
        let a = catalog::quinary_mask(&rat(0, 1));
        let s = dd_samples(2);
        assert!(verify_dual_interpolatory(&a, &s).unwrap().satisfied);
        assert!(verify_lemma_form(&a, &s).unwrap().satisfied);
    }

    #[test]
    fn vanishing_half_integer_samples_fail() {
        let a = catalog::cantor_mask();
        let s = SampleSet::delta(2).unwrap();
        assert!(!a.sub_symbol(2).is_zero());
        assert!(!verify_lemma_form(&a, &s).unwrap().satisfied);
        assert!(!verify_dual_interpolatory(&a, &s).unwrap().satisfied);
    }

    #[test]
    fn every_single_perturbation_is_detected() {
        let (a, s) = (catalog::ternary_mask(), dd_samples(2));
        let (lo, hi) = s.index_range();
        for j in lo..=hi {
            let bad = perturb(&s, j);
            assert!(!verify_dual_interpolatory(&a, &bad).unwrap().satisfied, "index {j}");
            assert!(!verify_lemma_form(&a, &bad).unwrap().satisfied, "index {j}");
        }
    }

    #[test]
    fn rejected_inputs() {
        let binary = Mask::from_fractions(2, 0, &[(1, 1), (1, 1)]).unwrap();
        assert!(matches!(
            verify_dual_interpolatory(&binary, &cantor_samples()),
            Err(Error::ArityTwoUnsupported)
        ));
        let primal = Mask::from_fractions(3, -1, &[(1, 1), (1, 1), (1, 1)]).unwrap();
        assert!(matches!(
            verify_lemma_form(&primal, &cantor_samples()),
            Err(Error::ShiftMismatch { .. })
        ));
        assert!(matches!(
            verify_refinability(&catalog::cantor_mask(), &cantor_samples(), 1),
            Err(Error::ShiftLatticeMismatch { .. })
        ));
        let coarse = SampleSet::delta(1).unwrap();
        assert!(matches!(
            verify_refinability(&catalog::cantor_mask(), &coarse, 2),
            Err(Error::LatticeMismatch { .. })
        ));
    }

    #[test]
    fn finer_samples_are_restricted() {
        let s = cantor_samples();
        let fine = SampleSet::new(
            4,
            -4,
            (-2..=2).map(|j| s.at(j)).flat_map(|v| [v, rat(7, 3)]).take(9).collect(),
        )
        .unwrap();
        // Odd indices on Z/4 carry junk that restriction to Z/2 drops.
        assert!(
            verify_refinability(&catalog::cantor_mask(), &fine, 2)
                .unwrap()
                .satisfied
        );
    }

    #[test]
    fn unreduced_sub_symbol_indices_agree() {
        // Odd form with A_{m-g} evaluated as A_{(m-g) mod m}.
        let (a, s) = (catalog::ternary_mask(), perturb(&dd_samples(2), 3));
        let m = 3i64;
        let (odd_lhs, phis) = odd_part(&s, 3);
        let lhs = &integer_part(&s, 3) + &odd_lhs;
        let a2 = |n: i64| a.sub_symbol(n.rem_euclid(m)).compose_power(2);
        let mut inner = a2((m + 1) / 2).scale(&rat(1, 2));
        for (g, phi) in phis.iter().enumerate() {
            inner = &inner + &(&a2(m - g as i64) * phi);
        }
        let reduced = finish(lhs, inner, 3);
        assert_eq!(reduced, verify_dual_interpolatory(&a, &s).unwrap());
    }

    fn arb_mask() -> impl Strategy<Value = Mask> {
        (2u32..6, -4i64..3, prop::collection::vec(-6i64..7, 1..10)).prop_filter_map("nonzero", |(m, o, c)| {
            Mask::new(m, o, c.into_iter().map(|n| rat(n, 2)).collect()).ok()
        })
    }

    fn arb_samples(t: u32) -> impl Strategy<Value = SampleSet> {
        (-4i64..1, prop::collection::vec(-4i64..5, 1..9))
            .prop_map(move |(o, v)| SampleSet::new(t, o, v.into_iter().map(|n| rat(n, 4)).collect()).unwrap())
    }

    /// Palindromic mask on `{1-n, ..., n}` scaled so that `sum a_k = m`.
    fn arb_dual_mask() -> impl Strategy<Value = Mask> {
        (3u32..7, prop::collection::vec(1i64..9, 1..7)).prop_map(|(m, h)| {
            let mut full: Vec<Rational> = h.iter().map(|&n| rat(n, 1)).collect();
            full.extend(h.iter().rev().map(|&n| rat(n, 1)));
            let k = Rational::from_integer(m.into()) / full.iter().sum::<Rational>();
            Mask::new(m, 1 - h.len() as i64, full.iter().map(|x| x * &k).collect()).unwrap()
        })
    }

    fn arb_interpolatory() -> impl Strategy<Value = SampleSet> {
        prop::collection::vec(-5i64..6, 1..5).prop_map(|h| {
            let n = h.len() as i64;
            let mut v = vec![Rational::zero(); (4 * n - 1) as usize];
            for (k, &x) in h.iter().enumerate() {
                let k = k as i64;
                v[(2 * n - 1 + 2 * k + 1) as usize] = rat(x, 8);
                v[(2 * n - 1 - 2 * k - 1) as usize] = rat(x, 8);
            }
            v[(2 * n - 1) as usize] = Rational::one();
            SampleSet::new(2, 1 - 2 * n, v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn residual_is_the_scaled_refinement_defect(mask in arb_mask(), s in arb_samples(2)) {
            // With t = 2 the shift must land on Z/2.
            prop_assume!(is_integer(&(mask.tau() * rat(2, 1))));
            let r = verify_refinability(&mask, &s, 2).unwrap();
            let m = mask.arity() as i64;
            let defects = refinement_defects(&mask, &s).unwrap();
            let expected = LaurentPoly::from_terms(defects.into_iter().map(|(j, d)| (m * j, d * rat(1, 2))));
            prop_assert_eq!(r.residual, expected);
        }

        #[test]
        fn dual_forms_agree_with_general_identity(mask in arb_dual_mask(), s in arb_interpolatory()) {
            let general = verify_refinability(&mask, &s, 2).unwrap();
            let dual = verify_dual_interpolatory(&mask, &s).unwrap();
            let lemma = verify_lemma_form(&mask, &s).unwrap();
            prop_assert_eq!(&dual.residual, &general.residual);
            prop_assert_eq!(&lemma.residual, &general.residual);
        }
    }
}
