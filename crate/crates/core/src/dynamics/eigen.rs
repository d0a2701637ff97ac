//! Dense real-symmetric eigensolver.
//!
//! Householder reduction to tridiagonal form followed by implicit QL with
//! Wilkinson-type shifts. Instead of accumulating the full eigenvector matrix
//! the rotations are applied only to a set of probe vectors, so asking for the
//! overlaps of two states with every eigenvector costs `O(n²)` on top of the
//! `O(n³)` reduction.

use rayon::prelude::*;

use crate::error::Error;
use crate::{Real, Result};

/// Trailing block size above which the reduction runs on the rayon pool.
const PARALLEL_ROWS: usize = 192;

/// Row-major dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SymmetricMatrix<T> {
    /// Wraps row-major data, checking the shape and symmetry.
    pub fn from_row_major(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n || n == 0 {
            return Err(Error::InvalidInput(format!(
                "expected {n}x{n} entries, got {}",
                data.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::InvalidInput(format!(
                        "matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub(crate) fn from_row_major_unchecked(n: usize, data: Vec<T>) -> Self {
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }
}

/// Eigenvalues in ascending order and, for each probe vector `p`, the
/// overlaps `⟨p|x_m⟩` with the normalised eigenvectors `x_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenProbes<T> {
    pub energies: Vec<T>,
    probes: usize,
    /// `coeffs[m * probes + p] = ⟨p|x_m⟩`.
    coeffs: Vec<T>,
}

impl<T: Real> EigenProbes<T> {
    pub fn probes(&self) -> usize {
        self.probes
    }

    /// `⟨probe|x_m⟩`.
    pub fn overlap(&self, m: usize, probe: usize) -> T {
        self.coeffs[m * self.probes + probe]
    }
}

/// Householder vectors of the reduction `A = Q T Qᵀ`.
struct Tridiagonal<T> {
    diag: Vec<T>,
    /// `off[i] = T[i+1, i]`, with `off[n−1] = 0`.
    off: Vec<T>,
    /// `(k, β, v)`: reflector `I − β v vᵀ` acting on indices `k+1..n`.
    reflectors: Vec<(usize, T, Vec<T>)>,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn tridiagonalize<T: Real>(mut m: SymmetricMatrix<T>) -> Tridiagonal<T> {
    let n = m.n;
    let mut diag = vec![T::zero(); n];
    let mut off = vec![T::zero(); n];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let a = &mut m.data;

    for k in 0..n.saturating_sub(2) {
        diag[k] = a[k * n + k];
        let lo = k + 1;
        let x: Vec<T> = (lo..n).map(|i| a[i * n + k]).collect();
        let scale = x.iter().fold(T::zero(), |s, &v| s.max(v.abs()));
        if scale == T::zero() {
            off[k] = T::zero();
            continue;
        }
        let xs: Vec<T> = x.iter().map(|&v| v / scale).collect();
        let norm = dot(&xs, &xs).sqrt();
        let alpha = if xs[0] > T::zero() { -norm } else { norm };
        let mut v = xs;
        v[0] = v[0] - alpha;
        let vtv = dot(&v, &v);
        off[k] = alpha * scale;
        if vtv == T::zero() {
            continue;
        }
        let beta = T::two() / vtv;
        let width = n - lo;

        // p = β A v over the trailing block
        let row_dot = |row: &[T]| beta * dot(&row[lo..], &v);
        let p: Vec<T> = if width > PARALLEL_ROWS {
            a[lo * n..].par_chunks(n).map(row_dot).collect()
        } else {
            a[lo * n..].chunks(n).map(row_dot).collect()
        };
        let kk = beta / T::two() * dot(&v, &p);
        let q: Vec<T> = p.iter().zip(&v).map(|(&pi, &vi)| pi - kk * vi).collect();

        // A ← A − v qᵀ − q vᵀ
        let update = |(i, row): (usize, &mut [T])| {
            let (vi, qi) = (v[i], q[i]);
            for ((aij, &vj), &qj) in row[lo..].iter_mut().zip(&v).zip(&q) {
                *aij = *aij - vi * qj - qi * vj;
            }
        };
        if width > PARALLEL_ROWS {
            a[lo * n..].par_chunks_mut(n).enumerate().for_each(update);
        } else {
            a[lo * n..].chunks_mut(n).enumerate().for_each(update);
        }
        reflectors.push((k, beta, v));
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2];
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    diag[n - 1] = a[(n - 1) * n + n - 1];
    off[n - 1] = T::zero();
    Tridiagonal {
        diag,
        off,
        reflectors,
    }
}

/// Implicit QL on `(d, e)`, rotating the probe table `z` (layout
/// `z[k * probes + p]`) along. Eigenvalues are returned sorted ascending with
/// the probe rows permuted to match.
fn tql<T: Real>(d: &mut [T], e: &mut [T], z: &mut [T], probes: usize) -> Result<()> {
    let n = d.len();
    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    let max_iter = 60 * n.max(1);
    let mut iters = 0usize;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                iters += 1;
                if iters > max_iter {
                    return Err(Error::NonConvergence {
                        what: "tridiagonal QL",
                        terms: iters,
                        tail: e[l].abs().to_f64_lossy(),
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (T::two() * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (head, tail) = z.split_at_mut((i + 1) * probes);
                    let zi = &mut head[i * probes..];
                    let zi1 = &mut tail[..probes];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let hb = *b;
                        *b = s * *a + c * hb;
                        *a = c * *a - s * hb;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = T::zero();
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp_real(d[j]));
    let sorted_d: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let mut sorted_z = Vec::with_capacity(z.len());
    for &i in &order {
        sorted_z.extend_from_slice(&z[i * probes..(i + 1) * probes]);
    }
    d.copy_from_slice(&sorted_d);
    z.copy_from_slice(&sorted_z);
    Ok(())
}

trait TotalCmp {
    fn total_cmp_real(self, other: Self) -> std::cmp::Ordering;
}

impl<T: Real> TotalCmp for T {
    fn total_cmp_real(self, other: Self) -> std::cmp::Ordering {
        self.partial_cmp(&other)
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// Diagonalises `matrix` and returns the overlaps of each probe with every
/// eigenvector.
pub fn eigen_probes<T: Real>(
    matrix: SymmetricMatrix<T>,
    probes: &[Vec<T>],
) -> Result<EigenProbes<T>> {
    let n = matrix.n;
    if probes.iter().any(|p| p.len() != n) {
        return Err(Error::InvalidInput(
            "probe length differs from matrix size".into(),
        ));
    }
    let np = probes.len();
    let tri = tridiagonalize(matrix);
    // z holds Qᵀ p as rows k of the tridiagonal basis
    let mut z = vec![T::zero(); n * np];
    for (pi, p) in probes.iter().enumerate() {
        let mut w = p.clone();
        for (k, beta, v) in &tri.reflectors {
            let seg = &mut w[k + 1..];
            let s = *beta * dot(seg, v);
            for (x, &vi) in seg.iter_mut().zip(v) {
                *x = *x - s * vi;
            }
        }
        for (k, &x) in w.iter().enumerate() {
            z[k * np + pi] = x;
        }
    }
    let mut d = tri.diag;
    let mut e = tri.off;
    tql(&mut d, &mut e, &mut z, np)?;
    Ok(EigenProbes {
        energies: d,
        probes: np,
        coeffs: z,
    })
}

/// Eigenvalues (ascending) and the full orthonormal eigenvector matrix,
/// `vectors[j * n + m] = ⟨j|x_m⟩`.
pub fn eigen_full<T: Real>(matrix: SymmetricMatrix<T>) -> Result<(Vec<T>, Vec<T>)> {
    let n = matrix.n;
    let basis: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            e
        })
        .collect();
    let ep = eigen_probes(matrix, &basis)?;
    let mut vectors = vec![T::zero(); n * n];
    for j in 0..n {
        for m in 0..n {
            vectors[j * n + m] = ep.overlap(m, j);
        }
    }
    Ok((ep.energies, vectors))
}
