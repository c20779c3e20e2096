//! Dense numerical kernels: LU factorization, inversion, a pseudoinverse for
//! matrices with a one-dimensional kernel, and power-iteration eigensolvers.
//!
//! Everything here works on `ndarray` arrays of `f64` and is sized for the
//! small dense matrices this crate deals in (tens of vertices, not thousands).
//! All routines are deterministic; the eigensolvers take an explicit seed for
//! their single random restart.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Pivot threshold factor: a pivot below `1e-13 * ||A||_inf` is singular.
pub const PIVOT_RTOL: f64 = 1e-13;

/// Induced infinity norm (maximum absolute row sum).
pub fn inf_norm(a: &Array2<f64>) -> f64 {
    a.rows()
        .into_iter()
        .map(|row| row.iter().map(|x| x.abs()).sum())
        .fold(0.0, f64::max)
}

/// Induced one norm (maximum absolute column sum).
pub fn one_norm(a: &Array2<f64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|x| x.abs()).sum())
        .fold(0.0, f64::max)
}

/// Euclidean norm of a vector.
pub fn norm2(v: &Array1<f64>) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// LU factorization with partial pivoting, stored packed.
#[derive(Debug)]
pub struct LuFactors {
    lu: Array2<f64>,
    perm: Vec<usize>,
}

/// Factors a square matrix as `PA = LU` with row pivoting.
///
/// Fails with [`Error::Singular`] when any pivot falls below
/// `PIVOT_RTOL * ||A||_inf`.
pub fn lu_factor(a: &Array2<f64>) -> Result<LuFactors> {
    let (r, c) = a.dim();
    if r != c {
        return Err(Error::Precondition(format!(
            "lu_factor requires a square matrix, got {r}x{c}"
        )));
    }
    let n = r;
    let threshold = PIVOT_RTOL * inf_norm(a);
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let mut p = k;
        let mut best = lu[[k, k]].abs();
        for i in (k + 1)..n {
            let v = lu[[i, k]].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= threshold || !best.is_finite() {
            return Err(Error::Singular(format!(
                "pivot {best:.3e} at column {k} below threshold {threshold:.3e}"
            )));
        }
        if p != k {
            perm.swap(k, p);
            for j in 0..n {
                lu.swap([k, j], [p, j]);
            }
        }
        let pivot = lu[[k, k]];
        for i in (k + 1)..n {
            let m = lu[[i, k]] / pivot;
            lu[[i, k]] = m;
            for j in (k + 1)..n {
                lu[[i, j]] -= m * lu[[k, j]];
            }
        }
    }
    Ok(LuFactors { lu, perm })
}

impl LuFactors {
    /// Solves `AX = B` for every column of `B` using the stored factors.
    pub fn solve_mat(&self, b: &Array2<f64>) -> Array2<f64> {
        let n = self.perm.len();
        let m = b.ncols();
        let mut x = Array2::<f64>::zeros((n, m));
        for col in 0..m {
            // forward substitution on the permuted right-hand side
            for i in 0..n {
                let mut s = b[[self.perm[i], col]];
                for j in 0..i {
                    s -= self.lu[[i, j]] * x[[j, col]];
                }
                x[[i, col]] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[[i, col]];
                for j in (i + 1)..n {
                    s -= self.lu[[i, j]] * x[[j, col]];
                }
                x[[i, col]] = s / self.lu[[i, i]];
            }
        }
        x
    }
}

/// Solves `AX = B`, with one pass of iterative refinement.
pub fn lu_solve(a: &Array2<f64>, b: &Array2<f64>) -> Result<Array2<f64>> {
    if a.nrows() != b.nrows() {
        return Err(Error::Precondition(format!(
            "shape mismatch: A is {}x{}, B has {} rows",
            a.nrows(),
            a.ncols(),
            b.nrows()
        )));
    }
    let f = lu_factor(a)?;
    let mut x = f.solve_mat(b);
    let r = b - &a.dot(&x);
    x += &f.solve_mat(&r);
    Ok(x)
}

/// Matrix inverse via LU with refinement.
pub fn invert(a: &Array2<f64>) -> Result<Array2<f64>> {
    lu_solve(a, &Array2::eye(a.nrows()))
}

/// Moore-Penrose pseudoinverse of a matrix with rank `n - 1`, given its right
/// kernel vector `u` (`A u = 0`) and left kernel vector `v` (`vᵀA = 0`).
///
/// Uses a rank-one bordering: `A + c u vᵀ` is nonsingular when `vᵀu != 0`,
/// and projecting its inverse onto the orthogonal complements of `u` and `v`
/// recovers the pseudoinverse. The scale `c = ||A||_inf / (||u|| ||v||)` keeps
/// the bordered matrix well conditioned.
pub fn pseudoinverse_rank_deficient(
    a: &Array2<f64>,
    u: &Array1<f64>,
    v: &Array1<f64>,
) -> Result<Array2<f64>> {
    let n = a.nrows();
    if u.len() != n || v.len() != n {
        return Err(Error::Precondition(
            "kernel vectors must match the matrix dimension".into(),
        ));
    }
    let nu = norm2(u);
    let nv = norm2(v);
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::Precondition("kernel vectors must be nonzero".into()));
    }
    let mut c = inf_norm(a) / (nu * nv);
    if c == 0.0 {
        c = 1.0;
    }
    let mut bordered = a.clone();
    for i in 0..n {
        for j in 0..n {
            bordered[[i, j]] += c * u[i] * v[j];
        }
    }
    let inv = invert(&bordered)?;
    let pu = projector_complement(u, nu);
    let pv = projector_complement(v, nv);
    Ok(pu.dot(&inv).dot(&pv))
}

fn projector_complement(x: &Array1<f64>, nx: f64) -> Array2<f64> {
    let n = x.len();
    let mut p = Array2::<f64>::eye(n);
    let s = nx * nx;
    for i in 0..n {
        for j in 0..n {
            p[[i, j]] -= x[i] * x[j] / s;
        }
    }
    p
}

/// One eigenvalue and unit eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Array1<f64>,
}

/// Algebraically largest eigenpair of a symmetric matrix.
///
/// Power iteration on `S + sigma I` with `sigma = ||S||_inf`; the shift makes
/// the algebraically largest eigenvalue the dominant one. Runs once from the
/// normalized all-ones vector and once from a seeded random vector, and keeps
/// the converged pair with the larger eigenvalue. The two starts guard against
/// the deterministic start lying in (or orthogonal to) an eigenspace.
///
/// Convergence is `||S v - lambda v||_2 <= tol` with `lambda` the Rayleigh
/// quotient. The returned vector has unit Euclidean norm; its sign is fixed by
/// whichever start converged, so callers needing a canonical sign must impose
/// one.
pub fn symmetric_leading_eigpair(
    s: &Array2<f64>,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<EigenPair> {
    let n = s.nrows();
    if n == 0 || s.ncols() != n {
        return Err(Error::Precondition("matrix must be square and nonempty".into()));
    }
    let sigma = inf_norm(s);
    let ones = Array1::from_elem(n, 1.0 / (n as f64).sqrt());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = Array1::from_shape_fn(n, |_| rng.gen_range(-1.0..1.0));

    let mut best: Option<EigenPair> = None;
    let mut worst_residual = f64::INFINITY;
    for start in [ones, random] {
        match power_iterate_symmetric(s, sigma, start, tol, max_iter) {
            Ok(pair) => {
                if best.as_ref().map_or(true, |b| pair.value > b.value) {
                    best = Some(pair);
                }
            }
            Err(resid) => worst_residual = worst_residual.min(resid),
        }
    }
    best.ok_or(Error::NoConvergence {
        iterations: max_iter,
        residual: worst_residual,
    })
}

fn power_iterate_symmetric(
    s: &Array2<f64>,
    sigma: f64,
    start: Array1<f64>,
    tol: f64,
    max_iter: usize,
) -> std::result::Result<EigenPair, f64> {
    let nv = norm2(&start);
    if nv == 0.0 {
        return Err(f64::INFINITY);
    }
    let mut v = start / nv;
    let mut last_residual = f64::INFINITY;
    for _ in 0..max_iter {
        let sv = s.dot(&v);
        let lambda = v.dot(&sv);
        let mut resid2 = 0.0;
        for i in 0..v.len() {
            let r = sv[i] - lambda * v[i];
            resid2 += r * r;
        }
        last_residual = resid2.sqrt();
        if last_residual <= tol {
            return Ok(EigenPair { value: lambda, vector: v });
        }
        let mut w = sv;
        w += &(sigma * &v);
        let nw = norm2(&w);
        if nw == 0.0 {
            // v is an eigenvector of the shifted matrix with eigenvalue 0
            return Ok(EigenPair { value: -sigma, vector: v });
        }
        v = w / nw;
    }
    Err(last_residual)
}

/// Spectral radius estimate by power iteration.
///
/// Tracks `||M v_k||` over normalized iterates and accepts the estimate once
/// it is stable to relative `tol` over three consecutive steps. Runs from the
/// all-ones start and once more from a seeded random start, returning the
/// larger stabilized estimate. An orbit that reaches the zero vector
/// contributes the estimate 0 (nilpotent directions die out in finitely many
/// steps). Fails with [`Error::NoConvergence`] when neither start stabilizes,
/// which is how rotational or defective dominant structure shows up; callers
/// treat that conservatively.
pub fn spectral_radius(m: &Array2<f64>, tol: f64, max_iter: usize, seed: u64) -> Result<f64> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::Precondition("matrix must be square and nonempty".into()));
    }
    let ones = Array1::from_elem(n, 1.0 / (n as f64).sqrt());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = Array1::from_shape_fn(n, |_| rng.gen_range(-1.0..1.0));

    let mut best: Option<f64> = None;
    for start in [ones, random] {
        if let Some(est) = radius_orbit(m, start, tol, max_iter) {
            best = Some(best.map_or(est, |b: f64| b.max(est)));
        }
    }
    best.ok_or(Error::NoConvergence {
        iterations: max_iter,
        residual: f64::NAN,
    })
}

fn radius_orbit(m: &Array2<f64>, start: Array1<f64>, tol: f64, max_iter: usize) -> Option<f64> {
    let nv = norm2(&start);
    if nv == 0.0 {
        return None;
    }
    let mut v = start / nv;
    let mut prev = f64::INFINITY;
    let mut stable = 0;
    for _ in 0..max_iter {
        let w = m.dot(&v);
        let nw = norm2(&w);
        if nw <= 1e-150 {
            return Some(0.0);
        }
        if (nw - prev).abs() <= tol * nw.max(1e-30) {
            stable += 1;
            if stable >= 3 {
                return Some(nw);
            }
        } else {
            stable = 0;
        }
        prev = nw;
        v = w / nw;
    }
    None
}
