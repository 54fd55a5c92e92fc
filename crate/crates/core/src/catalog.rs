//! Masks with known closed forms, used as regression anchors.

use crate::exactalg::{rat, Rational};
use crate::scheme::Mask;

/// Ternary scheme whose limit function is built from the Cantor function.
pub fn cantor_mask() -> Mask {
    Mask::from_fractions(3, -1, &[(1, 2), (1, 1), (1, 1), (1, 2)]).expect("static mask")
}

/// Ternary dual interpolatory mask on `{-6, ..., 7}` reproducing cubics.
pub fn ternary_mask() -> Mask {
    let half = [
        (13, 1296),
        (-11, 648),
        (-1, 16),
        (-107, 1296),
        (179, 1296),
        (9, 16),
        (137, 144),
    ];
    Mask::new(3, -6, palindrome(half.iter().map(|&(n, d)| rat(n, d)).collect())).expect("static mask")
}

/// One-parameter 5-ary family on `{-9, ..., 10}`.
pub fn quinary_mask(w: &Rational) -> Mask {
    let c = |n: i64, d: i64| rat(n, d);
    let lin = |wc: (i64, i64), k: (i64, i64)| w * c(wc.0, wc.1) + c(k.0, k.1);
    let half = vec![
        lin((1, 400), (0, 1)),
        lin((9, 400), (0, 1)),
        c(-1, 16),
        lin((-9, 400), (-21, 200)),
        lin((-1, 400), (-9, 200)),
        lin((-3, 400), (11, 200)),
        lin((-27, 400), (39, 200)),
        c(9, 16),
        lin((27, 400), (91, 100)),
        lin((3, 400), (99, 100)),
    ];
    Mask::new(5, -9, palindrome(half)).expect("nonzero middle entries")
}

/// Three-parameter 4-ary family on `{-10, ..., 11}`; `w` is the DD4/DD6
/// blending weight of the samples it was built from.
pub fn quaternary_mask(w: &Rational, v: &Rational, u: &Rational) -> Mask {
    let i = |n: i64| Rational::from_integer(n.into());
    let quad = |a: i64, b: i64, c: i64| i(a) * w * w + i(b) * w + i(c);
    let den = (w + i(24)) * (i(3) * w + i(4));
    let x = i(12) * (i(5) * w + i(8)) * v + i(4) * (i(9) * w + i(16)) * u - i(3) * (i(155) * w + i(48));
    let half = vec![
        -(w * &x) / (i(1024) * &den),
        -((i(9) * w + i(16)) * &x) / (i(3072) * &den),
        -(i(6) * v + i(4) * u - i(9)) / i(128),
        v / i(64),
        (i(12) * quad(63, -376, -6784) * v + i(4) * quad(99, -1344, -20480) * u - i(3) * quad(2307, 176, -61440))
            / (i(3072) * &den),
        (i(12) * quad(117, 904, 7168) * v + i(4) * quad(225, 2352, 21248) * u - i(3) * quad(3633, 18112, 75264))
            / (i(3072) * &den),
        (i(8) * v + i(6) * u - i(17)) / i(64),
        u / i(32),
        -(i(3) * quad(27, -712, -10240) * v + quad(27, -2304, -30848) * u - i(3) * quad(441, 2102, -19968))
            / (i(384) * &den),
        -(i(3) * quad(11, 296, 3456) * v + quad(27, 880, 10368) * u - quad(453, 9530, 33888)) / (i(128) * &den),
        -(i(3) * (i(4) * v + i(4) * u - i(51))) / i(128),
    ];
    Mask::new(4, -10, palindrome(half)).expect("nonzero middle entries")
}

/// `(v, u)` on the cubic-reproducing curve of the 4-ary family.
pub fn quaternary_cubic_params(w: &Rational) -> (Rational, Rational) {
    let i = |n: i64| Rational::from_integer(n.into());
    let den = i(3) * w + i(40);
    let v = i(3) * (i(381) * w * w + i(246) * w - i(5744)) / (i(512) * &den);
    let u = i(9) * (i(-127) * w * w + i(54) * w + i(3728)) / (i(256) * &den);
    (v, u)
}

/// The unique member of the 4-ary family reproducing quartics.
pub fn quaternary_quartic_mask() -> Mask {
    quaternary_mask(&rat(1, 1), &rat(-357, 512), &rat(765, 256))
}

fn palindrome(mut half: Vec<Rational>) -> Vec<Rational> {
    let tail: Vec<Rational> = half.iter().rev().cloned().collect();
    half.extend(tail);
    half
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::Symmetry;

    #[test]
    fn quartic_member_matches_printed_half() {
        let a = quaternary_quartic_mask();
        let printed = [
            2145, 17875, 8820, -9996, -39985, -127595, -66640, 85680, 325754, 739310, 899640,
        ];
        let expect: Vec<Rational> = printed.iter().map(|&n| rat(n, 917504)).collect();
        assert_eq!(&a.coeffs()[..11], expect.as_slice());
    }

    #[test]
    fn families_are_dual_symmetric() {
        for w in [rat(0, 1), rat(-7, 5), rat(10, 1)] {
            assert_eq!(quinary_mask(&w).classify().symmetry, Symmetry::DualSymmetric);
        }
        for w in [rat(0, 1), rat(1, 2), rat(1, 1)] {
            let (v, u) = quaternary_cubic_params(&w);
            let d = quaternary_mask(&w, &v, &u).classify();
            assert_eq!(d.symmetry, Symmetry::DualSymmetric);
        }
        assert_eq!(ternary_mask().coeffs().len(), 14);
    }

    #[test]
    fn coefficient_sums() {
        // sum a_k = m for every member.
        let s = |m: &Mask| m.coeffs().iter().sum::<Rational>();
        assert_eq!(s(&ternary_mask()), rat(3, 1));
        assert_eq!(s(&quinary_mask(&rat(3, 7))), rat(5, 1));
        assert_eq!(s(&quaternary_mask(&rat(1, 3), &rat(2, 5), &rat(-1, 9))), rat(4, 1));
    }
}
