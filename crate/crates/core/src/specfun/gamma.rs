use crate::error::Error;
use crate::{Real, Result};

use super::near_integer;

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Real>(z: T) -> T {
    // z is the shifted argument x - 1
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (z + T::from_usize_lossy(i));
    }
    acc
}

/// Γ(x) for real `x` off the non-positive integers.
pub fn gamma_fn<T: Real>(x: T) -> Result<T> {
    if x <= T::zero() && near_integer(x).is_some() {
        return Err(Error::Pole {
            function: "gamma",
            at: x.to_f64_lossy(),
        });
    }
    if x < T::half() {
        // reflection
        let pi = T::PI();
        return Ok(pi / ((pi * x).sin() * gamma_fn(T::one() - x)?));
    }
    // exact factorials for small positive integers
    if let Some(k) = near_integer(x) {
        if (1..=20).contains(&k) {
            let mut acc = T::one();
            for j in 2..k {
                acc = acc * T::from_i64(j).unwrap();
            }
            return Ok(acc);
        }
    }
    let z = x - T::one();
    let t = z + T::lit(LANCZOS_G) + T::half();
    Ok(T::TAU().sqrt() * t.powf(z + T::half()) * (-t).exp() * lanczos_sum(z))
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(crate::error::domain(
            "ln_gamma",
            "requires x > 0",
            x.to_f64_lossy(),
        ));
    }
    if x < T::half() {
        let pi = T::PI();
        return Ok(pi.ln() - (pi * x).sin().ln() - ln_gamma(T::one() - x)?);
    }
    let z = x - T::one();
    let t = z + T::lit(LANCZOS_G) + T::half();
    Ok(T::half() * T::TAU().ln() + (z + T::half()) * t.ln() - t + lanczos_sum(z).ln())
}
