//! The finitely supported orthogonal filter pair used by the dual-tree
//! transform: an almost-symmetric initial filter and Kingsbury's q-shift
//! filter, with high-pass companions.

use crate::filters::TimeFilter;

/// The six tap filters: the first-level pair `(a0, b0)` and the correlated
/// tree pair `(a1, b1)`, `(a2, b2)` with `a2(k) = a1(1 - k)`.
#[derive(Debug, Clone)]
pub struct KingsburySet {
    pub a0: TimeFilter,
    pub b0: TimeFilter,
    pub a1: TimeFilter,
    pub b1: TimeFilter,
    pub a2: TimeFilter,
    pub b2: TimeFilter,
}

pub fn kingsbury_filters() -> KingsburySet {
    let r15 = 15.0f64.sqrt();
    let a0 = TimeFilter::from_real(
        -3,
        &[
            -1.0 / 16.0,
            1.0 / 16.0,
            (4.0 + r15) / 16.0,
            (4.0 + r15) / 16.0,
            1.0 / 16.0,
            -1.0 / 16.0,
            (4.0 - r15) / 16.0,
            (4.0 - r15) / 16.0,
        ],
    )
    .expect("nonzero taps");
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let q = [
        0.03516384,
        0.0,
        -0.08832942,
        0.23389032,
        0.76027237,
        0.5875183,
        0.0,
        -0.11430184,
    ];
    let taps: Vec<f64> = q.iter().map(|t| t * inv_sqrt2).collect();
    let a1 = TimeFilter::from_real(-4, &taps).expect("nonzero taps");
    // a2(k) = a1(1-k), i.e. a2^(xi) = e^{-i xi} conj(a1^(xi))
    let (lo, hi) = a1.support();
    let rev: Vec<_> = (1 - hi..=1 - lo).map(|k| a1.at(1 - k)).collect();
    let a2 = TimeFilter::new(1 - hi, rev).expect("nonzero taps");
    KingsburySet {
        b0: a0.highpass_companion(),
        b1: a1.highpass_companion(),
        b2: a2.highpass_companion(),
        a0,
        a1,
        a2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{highpass_symbol, FilterRole, FreqFilter};

    #[test]
    fn a0_taps_and_support() {
        let k = kingsbury_filters();
        assert_eq!(k.a0.support(), (-3, 4));
        let r15 = 15.0f64.sqrt();
        assert_eq!(k.a0.at(-3).re, -1.0 / 16.0);
        assert_eq!(k.a0.at(-2).re, 1.0 / 16.0);
        assert_eq!(k.a0.at(-1).re, (4.0 + r15) / 16.0);
        assert!((k.a0.sum().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn a1_support_and_normalization() {
        let k = kingsbury_filters();
        assert_eq!(k.a1.support(), (-4, 3));
        assert!((k.a1.sum().re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn a2_is_reversal_about_half() {
        let k = kingsbury_filters();
        assert_eq!(k.a2.support(), (-2, 5));
        for j in -4..=3 {
            assert_eq!(k.a1.at(j), k.a2.at(1 - j));
        }
    }

    #[test]
    fn published_tap_checksum() {
        // |a^(xi)|^2 + |a^(xi+pi)|^2 = 1 on a 4096-point grid. a0 is exact in
        // closed form; a1 is printed to 8 decimals and lands at 1.08e-8.
        let k = kingsbury_filters();
        let n = 4096;
        let res = |tf: &TimeFilter| {
            let s = tf.symbol(n);
            (0..n)
                .map(|i| (s[i].norm_sqr() + s[(i + n / 2) % n].norm_sqr() - 1.0).abs())
                .fold(0.0, f64::max)
        };
        assert!(res(&k.a0) < 1e-8);
        assert!(res(&k.a1) < 2e-8);
    }

    #[test]
    fn highpass_companions_match_frequency_rule() {
        let k = kingsbury_filters();
        let n = 256;
        for (a, b) in [(&k.a0, &k.b0), (&k.a1, &k.b1), (&k.a2, &k.b2)] {
            let want = highpass_symbol(&a.symbol(n));
            let got = b.symbol(n);
            for i in 0..n {
                assert!((want[i] - got[i]).norm() < 1e-12);
            }
        }
        let _ = FreqFilter::from_time(&k.b0, "b0", FilterRole::Highpass, n).unwrap();
    }
}
