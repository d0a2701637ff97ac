use crate::error::{domain, Error};
use crate::{Real, Result};

use super::gamma::gamma_fn;
use super::near_integer;

/// `B_{2k} / (2k)!` for `k = 1..=30`.
#[allow(clippy::excessive_precision)]
pub(crate) const BERNOULLI_OVER_FACTORIAL: [f64; 30] = [
    8.333_333_333_333_333_3e-2,
    -1.388_888_888_888_888_9e-3,
    3.306_878_306_878_306_9e-5,
    -8.267_195_767_195_767_2e-7,
    2.087_675_698_786_809_9e-8,
    -5.284_190_138_687_493_2e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_582_9e-13,
    8.586_062_056_277_844_6e-15,
    -2.174_868_698_558_061_9e-16,
    5.509_002_828_360_229_5e-18,
    -1.395_446_468_581_252_3e-19,
    3.534_707_039_629_467_5e-21,
    -8.953_517_427_037_546_9e-23,
    2.267_952_452_337_683_1e-24,
    -5.744_790_668_872_202_4e-26,
    1.455_172_475_614_864_9e-27,
    -3.685_994_940_665_310_2e-29,
    9.336_734_257_095_044_7e-31,
    -2.365_022_415_700_629_9e-32,
    5.990_671_762_482_134_3e-34,
    -1.517_454_884_468_290_3e-35,
    3.843_758_125_454_188_2e-37,
    -9.736_353_072_646_691e-39,
    2.466_247_044_200_681e-40,
    -6.247_076_741_820_743_7e-42,
    1.582_403_024_464_491_4e-43,
    -4.008_273_685_948_936e-45,
    1.015_307_585_556_955_6e-46,
    -2.571_804_158_241_871_7e-48,
];

fn check_not_one<T: Real>(function: &'static str, s: T) -> Result<()> {
    if near_integer(s) == Some(1) {
        return Err(Error::Pole { function, at: 1.0 });
    }
    Ok(())
}

/// Riemann ζ(s) for real `s ≠ 1`. Negative arguments go through the
/// functional equation.
pub fn riemann_zeta<T: Real>(s: T) -> Result<T> {
    check_not_one("riemann_zeta", s)?;
    if s < T::zero() {
        if let Some(k) = near_integer(s) {
            if k % 2 == 0 {
                return Ok(T::zero()); // trivial zeros
            }
        }
        let pi = T::PI();
        let one_minus = T::one() - s;
        return Ok(T::two().powf(s)
            * pi.powf(s - T::one())
            * (pi * s / T::two()).sin()
            * gamma_fn(one_minus)?
            * riemann_zeta(one_minus)?);
    }
    hurwitz_zeta(s, T::one())
}

/// Hurwitz ζ(s, a) = Σ_{j≥0} (j + a)^{-s} for `a > 0`, `s ≠ 1` (analytically
/// continued for `s < 1`).
///
/// Sums the leading terms directly until the shifted argument is large, then
/// closes with the Euler–Maclaurin tail.
pub fn hurwitz_zeta<T: Real>(s: T, a: T) -> Result<T> {
    check_not_one("hurwitz_zeta", s)?;
    if !(a > T::zero()) {
        return Err(domain("hurwitz_zeta", "requires a > 0", a.to_f64_lossy()));
    }
    let shift_target = T::lit(25.0) + (-s).max(T::zero());
    let direct_terms = (shift_target - a)
        .ceil()
        .max(T::zero())
        .to_usize()
        .unwrap_or(0);

    let mut head = T::zero();
    for j in (0..direct_terms).rev() {
        head = head + (a + T::from_usize_lossy(j)).powf(-s);
    }
    let x = a + T::from_usize_lossy(direct_terms);
    Ok(head + euler_maclaurin_tail(s, x)?)
}

/// ζ(s, x) for large `x`: `x^{1-s}/(s-1) + x^{-s}/2 + Σ B_{2k}/(2k)! (s)_{2k-1} x^{-s-2k+1}`.
fn euler_maclaurin_tail<T: Real>(s: T, x: T) -> Result<T> {
    let mut sum = x.powf(T::one() - s) / (s - T::one()) + x.powf(-s) / T::two();
    // (s)_{2k-1} x^{-s-2k+1}, starting at k = 1: s x^{-s-1}
    let mut factor = s * x.powf(-s - T::one());
    let x2 = x * x;
    let mut last = T::infinity();
    for (k, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = T::lit(b) * factor;
        if term.abs() <= T::epsilon() * sum.abs() || term == T::zero() {
            return Ok(sum + term);
        }
        if term.abs() > last {
            // asymptotic series started to diverge: the smallest term is the error
            return Err(Error::NonConvergence {
                what: "hurwitz_zeta",
                terms: k,
                tail: last.to_f64_lossy(),
            });
        }
        sum = sum + term;
        last = term.abs();
        let k = T::from_usize_lossy(k + 1);
        // advance (s)_{2k-1} → (s)_{2k+1}
        factor = factor * (s + T::two() * k - T::one()) * (s + T::two() * k) / x2;
    }
    if last <= T::lit(1e3) * T::epsilon() * sum.abs() {
        Ok(sum)
    } else {
        Err(Error::NonConvergence {
            what: "hurwitz_zeta",
            terms: BERNOULLI_OVER_FACTORIAL.len(),
            tail: last.to_f64_lossy(),
        })
    }
}

/// Truncated large-`n` expansion of ζ(s, n).
///
/// `order = 1` keeps `n^{1-s}/(s-1)`, `order = 2` adds `n^{-s}/2`, and every
/// further order adds the next Euler–Maclaurin correction.
pub fn hurwitz_zeta_expansion<T: Real>(s: T, n: T, order: usize) -> Result<T> {
    check_not_one("hurwitz_zeta_expansion", s)?;
    if n < T::two() {
        return Err(domain(
            "hurwitz_zeta_expansion",
            "requires n >= 2",
            n.to_f64_lossy(),
        ));
    }
    if order == 0 || order > BERNOULLI_OVER_FACTORIAL.len() + 2 {
        return Err(Error::InvalidInput(format!(
            "hurwitz_zeta_expansion: order {order} outside 1..={}",
            BERNOULLI_OVER_FACTORIAL.len() + 2
        )));
    }
    let mut sum = n.powf(T::one() - s) / (s - T::one());
    if order >= 2 {
        sum = sum + n.powf(-s) / T::two();
    }
    let mut factor = s * n.powf(-s - T::one());
    for k in 1..=order.saturating_sub(2) {
        sum = sum + T::lit(BERNOULLI_OVER_FACTORIAL[k - 1]) * factor;
        let kk = T::from_usize_lossy(k);
        factor = factor * (s + T::two() * kk - T::one()) * (s + T::two() * kk) / (n * n);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn classical_values() {
        assert_relative_eq!(
            riemann_zeta(2.0_f64).unwrap(),
            PI * PI / 6.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            riemann_zeta(4.0_f64).unwrap(),
            PI.powi(4) / 90.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            riemann_zeta(-1.0_f64).unwrap(),
            -1.0 / 12.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(riemann_zeta(0.0_f64).unwrap(), -0.5, max_relative = 1e-14);
        assert_eq!(riemann_zeta(-2.0_f64).unwrap(), 0.0);
    }

    #[test]
    fn reference_values_on_minus_ten_to_ten() {
        // mpmath, 40 digits
        let cases = [
            (-9.5, -0.006_672_172_296_466_640_8),
            (-3.3, 0.006_208_678_127_736_984_2),
            (-1.5, -0.025_485_201_889_833_036),
            (0.25, -0.813_278_405_261_891_66),
            (0.5, -1.460_354_508_809_586_8),
            (1.5, 2.612_375_348_685_488_3),
            (3.0, 1.202_056_903_159_594_3),
            (7.5, 1.005_826_727_536_522_8),
            (10.0, 1.000_994_575_127_818_1),
        ];
        for (s, v) in cases {
            assert_relative_eq!(riemann_zeta(s).unwrap(), v, max_relative = 1e-12);
        }
    }

    #[test]
    fn hurwitz_reference_values() {
        let cases = [
            (1.5, 100.0, 0.200_501_249_981_771_91),
            (0.5, 1024.0, -63.984_373_728_434_321),
            (2.5, 0.3, 21.069_239_202_247_725),
            (3.0, 7.25, 0.010_914_476_147_598_870),
        ];
        for (s, a, v) in cases {
            assert_relative_eq!(hurwitz_zeta(s, a).unwrap(), v, max_relative = 1e-12);
        }
    }

    #[test]
    fn hurwitz_at_half_reduces_to_riemann() {
        let alpha = 2.0_f64;
        let lhs = hurwitz_zeta(alpha, 0.5).unwrap();
        assert_relative_eq!(lhs, 3.0 * PI * PI / 6.0, max_relative = 1e-13);
        assert_relative_eq!(
            hurwitz_zeta(2.0_f64, 1.0).unwrap(),
            PI * PI / 6.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn poles() {
        assert!(matches!(riemann_zeta(1.0_f64), Err(Error::Pole { .. })));
        assert!(matches!(
            hurwitz_zeta(1.0_f64, 3.0),
            Err(Error::Pole { .. })
        ));
        assert!(hurwitz_zeta(2.0_f64, 0.0).is_err());
    }

    /// Brute-force ζ(s, a): 10⁶ direct terms plus the integral/half-term tail.
    fn summation_oracle(s: f64, a: f64) -> f64 {
        let m = 1_000_000usize;
        let mut head = 0.0;
        for j in (0..m).rev() {
            head += (j as f64 + a).powf(-s);
        }
        let x = m as f64 + a;
        head + x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s)
    }

    #[test]
    fn two_term_expansion_against_summation_oracle() {
        let exact = summation_oracle(1.5, 100.0);
        assert_relative_eq!(
            hurwitz_zeta(1.5, 100.0).unwrap(),
            exact,
            max_relative = 1e-9
        );
        let two = hurwitz_zeta_expansion(1.5, 100.0, 2).unwrap();
        assert!((exact - two).abs() < 1e-4);
    }

    #[test]
    fn expansion_error_decreases_with_n() {
        for s in [0.5_f64, 1.5, 2.5] {
            let errs: Vec<f64> = [1e2, 1e3, 1e4]
                .iter()
                .map(|&n| {
                    let exact = hurwitz_zeta(s, n).unwrap();
                    ((exact - hurwitz_zeta_expansion(s, n, 2).unwrap()) / exact).abs()
                })
                .collect();
            assert!(errs[0] > errs[1] && errs[1] > errs[2], "s = {s}: {errs:?}");
        }
    }

    #[test]
    fn higher_order_expansion_approaches_exact() {
        let exact = hurwitz_zeta(2.5_f64, 40.0).unwrap();
        let e2 = (hurwitz_zeta_expansion(2.5, 40.0, 2).unwrap() - exact).abs();
        let e4 = (hurwitz_zeta_expansion(2.5, 40.0, 4).unwrap() - exact).abs();
        assert!(e4 < e2 * 1e-3);
    }
}
