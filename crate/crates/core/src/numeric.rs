use crate::Real;

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(items: I) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for x in items {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp = comp + ((sum - t) + x);
        } else {
            comp = comp + ((x - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

/// `cos(2π p / q)` and `sin(2π p / q)` with `p` reduced modulo `q` first, so
/// large `p` loses no accuracy.
pub(crate) fn root_of_unity<T: Real>(p: u64, q: u64) -> (T, T) {
    let r = p % q;
    let angle = T::TAU() * T::from_u64(r).unwrap() / T::from_u64(q).unwrap();
    (angle.cos(), angle.sin())
}

/// Least-squares slope and intercept of `ln y` against `ln x`, i.e. the fit
/// `y = a·x^b`; returns `(a, b)`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let m = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = sxy / sxx;
    ((my - b * mx).exp(), b)
}
