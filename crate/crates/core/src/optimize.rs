//! Bracketed one-dimensional minimisation.

use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<T> {
    pub x: T,
    pub value: T,
    pub iterations: usize,
    pub bracket_width: T,
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`, stopping
/// once the bracket is narrower than `tol`.
pub fn golden_section<T, F>(mut f: F, a: T, b: T, tol: T, max_iter: usize) -> Result<Minimum<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if !(a < b) {
        return Err(Error::InvalidInput(format!(
            "golden_section: empty bracket [{a}, {b}]"
        )));
    }
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::two();
    let inv_phi2 = T::one() - inv_phi;

    let (mut a, mut b) = (a, b);
    let mut x1 = a + inv_phi2 * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    for iter in 0..max_iter {
        if b - a < tol {
            let (x, value) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
            return Ok(Minimum {
                x,
                value,
                iterations: iter,
                bracket_width: b - a,
            });
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + inv_phi2 * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    Err(Error::NonConvergence {
        what: "golden_section",
        terms: max_iter,
        tail: (b - a).to_f64_lossy(),
    })
}
