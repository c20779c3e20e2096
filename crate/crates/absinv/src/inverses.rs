//! Construction routes for the absorption inverse and the generalized
//! inverses it is built from.
//!
//! For a strongly connected graph with Laplacian `L`, kernel basis `u` and
//! absorption rates `d` (as `D = diag(d)`), the absorption inverse `X` is the
//! unique matrix with
//!
//! ```text
//! L X L = L,   X L X = X,   X L = I - U D,   L X = I - D U,   X D u = 0
//! ```
//!
//! where `U = u 1ᵀ / dbar` and `dbar = dᵀ u`. Equivalently `X` inverts `L`
//! between the subspaces cut out by the absorption-weighted projections. Four
//! algebraic routes are provided; they must agree, and the forest oracle in
//! [`crate::forests`] gives a fifth, combinatorial route for small graphs.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::graph::LaplacianBundle;
use crate::numerics::{self, inf_norm};

/// Seed for the eigensolver restart inside convergence-radius estimates.
const RADIUS_SEED: u64 = 0x5eed_0001;

/// How an [`InverseSet`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Sandwich the padded bottleneck matrix: `(I - UD) M (I - DU)`. Default.
    Bottleneck,
    /// Sandwich the group inverse of `L`.
    Group,
    /// Sandwich the Moore-Penrose pseudoinverse of `L`.
    Pinv,
    /// Invert the rank-one bordered matrix: `(L + DUD)^{-1} - U`.
    Bordered,
    /// Forest enumeration on the absorption-scaled graph.
    Forest,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Bottleneck => "bottleneck",
            Route::Group => "group",
            Route::Pinv => "pinv",
            Route::Bordered => "bordered",
            Route::Forest => "forest",
        }
    }
}

/// The absorption inverse together with whichever companion inverses the
/// construction route produced.
#[derive(Debug, Clone)]
pub struct InverseSet {
    pub ld: Array2<f64>,
    pub group: Option<Array2<f64>>,
    pub pinv: Option<Array2<f64>>,
    /// Fundamental matrix `(L + pi wᵀ)^{-1}` of the regular chain.
    pub fundamental: Option<Array2<f64>>,
    /// Zero-padded bottleneck matrix.
    pub bottleneck: Option<Array2<f64>>,
    pub route: Route,
}

/// Residuals of the five defining conditions.
#[derive(Debug, Clone)]
pub struct DefiningResiduals {
    /// `||L X L - L||`
    pub one_inverse: f64,
    /// `||X L X - X||`
    pub two_inverse: f64,
    /// `||X D u||` (max entry)
    pub kernel: f64,
    /// `||X L + U D - I||`
    pub left_projection: f64,
    /// `||L X + D U - I||`
    pub right_projection: f64,
}

impl DefiningResiduals {
    pub fn max(&self) -> f64 {
        self.one_inverse
            .max(self.two_inverse)
            .max(self.kernel)
            .max(self.left_projection)
            .max(self.right_projection)
    }
}

impl InverseSet {
    /// Defining-condition residuals of `self.ld` at absorption vector `d`.
    pub fn residuals(&self, bundle: &LaplacianBundle, d: &Array1<f64>) -> DefiningResiduals {
        let n = bundle.l.nrows();
        let dbar = d.dot(&bundle.u);
        let ud = outer_scaled(&bundle.u, d, dbar);
        let du = du_projection(&bundle.u, d, dbar);
        let eye = Array2::<f64>::eye(n);
        let x = &self.ld;
        let l = &bundle.l;
        let lx = l.dot(x);
        let xl = x.dot(l);
        let mut xdu = Array1::<f64>::zeros(n);
        for i in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                s += x[[i, j]] * d[j] * bundle.u[j];
            }
            xdu[i] = s;
        }
        DefiningResiduals {
            one_inverse: inf_norm(&(&lx.dot(l) - l)),
            two_inverse: inf_norm(&(&xl.dot(x) - x)),
            kernel: xdu.iter().fold(0.0, |m, v| m.max(v.abs())),
            left_projection: inf_norm(&(&(&xl + &ud) - &eye)),
            right_projection: inf_norm(&(&(&lx + &du) - &eye)),
        }
    }
}

/// Bottleneck matrix of `L`: the inverse of `L` with its last row and column
/// deleted, plus the zero padding back to full size.
#[derive(Debug, Clone)]
pub struct BottleneckMatrix {
    pub reduced: Array2<f64>,
    pub padded: Array2<f64>,
}

pub fn bottleneck_matrix(bundle: &LaplacianBundle) -> Result<BottleneckMatrix> {
    let n = bundle.l.nrows();
    let m = n - 1;
    let mut reduced_l = Array2::<f64>::zeros((m, m));
    for i in 0..m {
        for j in 0..m {
            reduced_l[[i, j]] = bundle.l[[i, j]];
        }
    }
    let reduced = numerics::invert(&reduced_l)?;
    let mut padded = Array2::<f64>::zeros((n, n));
    for i in 0..m {
        for j in 0..m {
            padded[[i, j]] = reduced[[i, j]];
        }
    }
    Ok(BottleneckMatrix { reduced, padded })
}

/// Group inverse of `L`: the {1,2}-inverse commuting with `L`, obtained by
/// sandwiching the padded bottleneck matrix between copies of `I - u 1ᵀ`.
pub fn group_inverse(bundle: &LaplacianBundle) -> Result<Array2<f64>> {
    group_inverse_parts(&bundle.l, &bundle.u)
}

pub(crate) fn group_inverse_parts(l: &Array2<f64>, u: &Array1<f64>) -> Result<Array2<f64>> {
    let n = l.nrows();
    let m = n - 1;
    let mut reduced = Array2::<f64>::zeros((m, m));
    for i in 0..m {
        for j in 0..m {
            reduced[[i, j]] = l[[i, j]];
        }
    }
    let inv = numerics::invert(&reduced)?;
    let mut padded = Array2::<f64>::zeros((n, n));
    for i in 0..m {
        for j in 0..m {
            padded[[i, j]] = inv[[i, j]];
        }
    }
    let proj = eye_minus_outer(u, &Array1::ones(n));
    Ok(proj.dot(&padded).dot(&proj))
}

/// Group inverse by the resolvent route `(L + tau u 1ᵀ)^{-1} - u 1ᵀ / tau`
/// at `tau = 1`. Exposed as a verification path; agrees with
/// [`group_inverse`].
pub fn group_inverse_resolvent(bundle: &LaplacianBundle) -> Result<Array2<f64>> {
    let n = bundle.l.nrows();
    let mut shifted = bundle.l.clone();
    for i in 0..n {
        for j in 0..n {
            shifted[[i, j]] += bundle.u[i];
        }
    }
    let mut inv = numerics::invert(&shifted)?;
    for i in 0..n {
        for j in 0..n {
            inv[[i, j]] -= bundle.u[i];
        }
    }
    Ok(inv)
}

/// Stationary distribution of the embedded jump chain: `pi = W u / (wᵀ u)`.
pub fn jump_stationary(bundle: &LaplacianBundle) -> Array1<f64> {
    let wu: Array1<f64> = &bundle.out_degrees * &bundle.u;
    let total = wu.sum();
    wu / total
}

/// Fundamental matrix of the regular (absorption-free) chain:
/// `Z = (L + pi wᵀ)^{-1}` with `pi` the jump-chain stationary distribution.
pub fn fundamental_matrix_regular(bundle: &LaplacianBundle) -> Result<Array2<f64>> {
    let n = bundle.l.nrows();
    let pi = jump_stationary(bundle);
    let mut b = bundle.l.clone();
    for i in 0..n {
        for j in 0..n {
            b[[i, j]] += pi[i] * bundle.out_degrees[j];
        }
    }
    numerics::invert(&b)
}

/// `I - x yᵀ`
fn eye_minus_outer(x: &Array1<f64>, y: &Array1<f64>) -> Array2<f64> {
    let n = x.len();
    let mut p = Array2::<f64>::eye(n);
    for i in 0..n {
        for j in 0..n {
            p[[i, j]] -= x[i] * y[j];
        }
    }
    p
}

/// `U D = u dᵀ / dbar`
fn outer_scaled(u: &Array1<f64>, d: &Array1<f64>, dbar: f64) -> Array2<f64> {
    let n = u.len();
    Array2::from_shape_fn((n, n), |(i, j)| u[i] * d[j] / dbar)
}

/// `D U = (d ∘ u) 1ᵀ / dbar`
fn du_projection(u: &Array1<f64>, d: &Array1<f64>, dbar: f64) -> Array2<f64> {
    let n = u.len();
    Array2::from_shape_fn((n, n), |(i, _)| d[i] * u[i] / dbar)
}

fn check_absorption(d: &Array1<f64>, n: usize) -> Result<f64> {
    if d.len() != n {
        return Err(Error::Precondition(format!(
            "absorption vector has length {}, expected {n}",
            d.len()
        )));
    }
    if d.iter().any(|&x| !x.is_finite() || x <= 0.0) {
        return Err(Error::Precondition(
            "absorption rates must be positive and finite".into(),
        ));
    }
    Ok(0.0)
}

/// Absorption inverse of `(L, d)` by the requested algebraic route.
///
/// The absorption vector is taken from the `d` argument, not from the graph
/// the bundle was built from, so sweeps can reuse one bundle. The scale of
/// `d` does not change the result; only its direction matters.
pub fn absorption_inverse(
    bundle: &LaplacianBundle,
    d: &Array1<f64>,
    route: Route,
) -> Result<InverseSet> {
    let n = bundle.l.nrows();
    check_absorption(d, n)?;
    let dbar = d.dot(&bundle.u);
    let left = eye_minus_outer(&(&bundle.u / dbar), d); // I - UD
    let du: Array1<f64> = Array1::from_shape_fn(n, |i| d[i] * bundle.u[i] / dbar);
    let right = eye_minus_outer(&du, &Array1::ones(n)); // I - DU

    let mut set = InverseSet {
        ld: Array2::zeros((n, n)),
        group: None,
        pinv: None,
        fundamental: None,
        bottleneck: None,
        route,
    };
    match route {
        Route::Bottleneck => {
            let m = bottleneck_matrix(bundle)?;
            set.ld = left.dot(&m.padded).dot(&right);
            set.bottleneck = Some(m.padded);
        }
        Route::Group => {
            let g = group_inverse(bundle)?;
            set.ld = left.dot(&g).dot(&right);
            set.group = Some(g);
        }
        Route::Pinv => {
            let p = numerics::pseudoinverse_rank_deficient(
                &bundle.l,
                &bundle.u,
                &Array1::ones(n),
            )?;
            set.ld = left.dot(&p).dot(&right);
            set.pinv = Some(p);
        }
        Route::Bordered => {
            let mut b = bundle.l.clone();
            for i in 0..n {
                for j in 0..n {
                    b[[i, j]] += du[i] * d[j]; // D U D
                }
            }
            let mut inv = numerics::invert(&b)?;
            for i in 0..n {
                for j in 0..n {
                    inv[[i, j]] -= bundle.u[i] / dbar;
                }
            }
            set.ld = inv;
        }
        Route::Forest => {
            return Err(Error::Precondition(
                "the forest route needs the graph itself; use the forest oracle".into(),
            ));
        }
    }
    Ok(set)
}

/// Absorption inverse with every companion inverse filled in
/// (group, pseudoinverse, fundamental matrix, bottleneck matrix).
pub fn inverse_set_full(bundle: &LaplacianBundle, d: &Array1<f64>) -> Result<InverseSet> {
    let mut set = absorption_inverse(bundle, d, Route::Bottleneck)?;
    set.group = Some(group_inverse(bundle)?);
    set.pinv = Some(numerics::pseudoinverse_rank_deficient(
        &bundle.l,
        &bundle.u,
        &Array1::ones(bundle.l.nrows()),
    )?);
    set.fundamental = Some(fundamental_matrix_regular(bundle)?);
    Ok(set)
}

/// Pairwise agreement of the four algebraic routes.
#[derive(Debug, Clone)]
pub struct CrossRouteReport {
    /// Largest pairwise deviation in the infinity norm.
    pub max_deviation: f64,
    /// Route names of the worst pair.
    pub worst_pair: (&'static str, &'static str),
}

/// Computes the absorption inverse by all four algebraic routes and compares
/// them pairwise. Fails with [`Error::RouteDisagreement`] beyond `tol`.
pub fn cross_route_check(
    bundle: &LaplacianBundle,
    d: &Array1<f64>,
    tol: f64,
) -> Result<CrossRouteReport> {
    let routes = [Route::Bottleneck, Route::Group, Route::Pinv, Route::Bordered];
    let mats: Vec<(Route, Array2<f64>)> = routes
        .iter()
        .map(|&r| absorption_inverse(bundle, d, r).map(|s| (r, s.ld)))
        .collect::<Result<_>>()?;
    let mut max_deviation = 0.0;
    let mut worst_pair = ("bottleneck", "bottleneck");
    for a in 0..mats.len() {
        for b in (a + 1)..mats.len() {
            let dev = inf_norm(&(&mats[a].1 - &mats[b].1));
            if dev > max_deviation {
                max_deviation = dev;
                worst_pair = (mats[a].0.name(), mats[b].0.name());
            }
        }
    }
    if max_deviation > tol {
        return Err(Error::RouteDisagreement { max_dev: max_deviation, tol });
    }
    Ok(CrossRouteReport { max_deviation, worst_pair })
}

/// `(L + z D)^{-1}`, the fundamental matrix of the absorbing chain at
/// absorption scale `z > 0`.
pub fn fundamental_matrix_absorbing(
    bundle: &LaplacianBundle,
    d: &Array1<f64>,
    z: f64,
) -> Result<Array2<f64>> {
    let n = bundle.l.nrows();
    check_absorption(d, n)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Precondition(format!("z must be positive, got {z}")));
    }
    let mut b = bundle.l.clone();
    for i in 0..n {
        b[[i, i]] += z * d[i];
    }
    numerics::invert(&b)
}

/// Residuals of the two resolvent identities that tie the absorption inverse
/// to the fundamental matrix at every `z > 0`.
#[derive(Debug, Clone)]
pub struct IdentityResiduals {
    /// `||(L + zD)^{-1} - U/z - (I + z X D)^{-1} X||`
    pub fundamental: f64,
    /// `||(I + z X D)^{-1} - UD - (L + zD)^{-1} L||`
    pub projection: f64,
}

pub fn fundamental_identity_check(
    bundle: &LaplacianBundle,
    d: &Array1<f64>,
    ld: &Array2<f64>,
    z: f64,
) -> Result<IdentityResiduals> {
    let n = bundle.l.nrows();
    check_absorption(d, n)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Precondition(format!("z must be positive, got {z}")));
    }
    let dbar = d.dot(&bundle.u);
    let mut lzd = bundle.l.clone();
    for i in 0..n {
        lzd[[i, i]] += z * d[i];
    }

    // I + z X D, nonsingular for every z > 0
    let mut a = Array2::<f64>::eye(n);
    for i in 0..n {
        for j in 0..n {
            a[[i, j]] += z * ld[[i, j]] * d[j];
        }
    }
    let a_inv = numerics::invert(&a)?;

    // For the exact kernel, (L + zD)^{-1} - U/z is the solution G of
    //   (L + zD) G = I - DU,
    // which stays O(1) as z -> 0. Forming the two 1/z-sized matrices and
    // subtracting instead would inherit the stored kernel's mass defect
    // 1ᵀLu (a few ulps) amplified by z^{-2}, swamping the small-z digits
    // the check is after. The solve form is immune: the only 1/z-amplified
    // dependence on u enters through dᵀu/dbar, which is 1 to rounding.
    let mut rhs = Array2::<f64>::eye(n);
    for i in 0..n {
        let row_shift = d[i] * bundle.u[i] / dbar;
        for j in 0..n {
            rhs[[i, j]] -= row_shift;
        }
    }
    let g = numerics::lu_solve(&lzd, &rhs)?;
    let fundamental = inf_norm(&(&g - &a_inv.dot(ld)));

    // (L + zD)^{-1} L by direct solve, for the same reason
    let y = numerics::lu_solve(&lzd, &bundle.l)?;
    let ud = outer_scaled(&bundle.u, d, dbar);
    let projection = inf_norm(&(&(&a_inv - &ud) - &y));
    Ok(IdentityResiduals { fundamental, projection })
}

/// Truncated Laurent expansion of the fundamental matrix around `z = 0`:
///
/// ```text
/// (L + zD)^{-1} ≈ U/z + X + sum_{k=1..kmax} (-z X D)^k X
/// ```
///
/// Returns the truncated sum and a convergence flag that is true only when
/// the spectral radius of `z X D` was estimated below 1. A failed radius
/// estimate leaves the flag false.
pub fn laurent_series_eval(
    bundle: &LaplacianBundle,
    d: &Array1<f64>,
    ld: &Array2<f64>,
    z: f64,
    kmax: usize,
) -> Result<(Array2<f64>, bool)> {
    let n = bundle.l.nrows();
    check_absorption(d, n)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Precondition(format!("z must be positive, got {z}")));
    }
    let dbar = d.dot(&bundle.u);
    // B = -z X D (column scaling of X by d)
    let b = Array2::from_shape_fn((n, n), |(i, j)| -z * ld[[i, j]] * d[j]);
    let mut acc = ld.clone();
    for i in 0..n {
        for j in 0..n {
            acc[[i, j]] += bundle.u[i] / (dbar * z);
        }
    }
    let mut term = ld.clone();
    for _ in 0..kmax {
        term = b.dot(&term);
        acc += &term;
    }
    let radius_mat = Array2::from_shape_fn((n, n), |(i, j)| z * ld[[i, j]] * d[j]);
    let converged = matches!(
        numerics::spectral_radius(&radius_mat, 1e-8, 50_000, RADIUS_SEED),
        Ok(r) if r < 1.0
    );
    Ok((acc, converged))
}

/// First-order behavior of the fundamental matrix remainder under uniform
/// shrinking of the absorption rates.
#[derive(Debug, Clone)]
pub struct DeviationReport {
    /// `||(L + eps D)^{-1} - U_eps - X_eps||` at the given scale
    pub remainder: f64,
    /// the same remainder at half the scale
    pub remainder_half: f64,
    /// `remainder_half / remainder`; approaches 1/2 as the scale shrinks
    pub ratio: f64,
}

/// Rebuilds the absorption inverse at rates `eps d` and `eps d / 2` and
/// measures the first-order remainder of the Laurent expansion at both
/// scales. Fails with [`Error::Precondition`] when the expansion does not
/// converge at scale `eps`.
pub fn residence_deviation_check(
    bundle: &LaplacianBundle,
    d: &Array1<f64>,
    eps: f64,
) -> Result<DeviationReport> {
    let n = bundle.l.nrows();
    check_absorption(d, n)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Precondition(format!("scale must be positive, got {eps}")));
    }
    let remainder = remainder_at(bundle, d, eps)?;
    let remainder_half = remainder_at(bundle, d, eps / 2.0)?;
    Ok(DeviationReport {
        remainder,
        remainder_half,
        ratio: remainder_half / remainder,
    })
}

fn remainder_at(bundle: &LaplacianBundle, d: &Array1<f64>, eps: f64) -> Result<f64> {
    let n = bundle.l.nrows();
    let d_eps: Array1<f64> = d * eps;
    let set = absorption_inverse(bundle, &d_eps, Route::Bottleneck)?;
    let radius_mat = Array2::from_shape_fn((n, n), |(i, j)| set.ld[[i, j]] * d_eps[j]);
    match numerics::spectral_radius(&radius_mat, 1e-8, 50_000, RADIUS_SEED) {
        Ok(r) if r < 1.0 => {}
        Ok(r) => {
            return Err(Error::Precondition(format!(
                "expansion diverges at scale {eps}: spectral radius {r:.3}"
            )))
        }
        Err(e) => {
            return Err(Error::Precondition(format!(
                "expansion convergence unverifiable at scale {eps}: {e}"
            )))
        }
    }
    let fm = fundamental_matrix_absorbing(bundle, &d_eps, 1.0)?;
    let dbar_eps = d_eps.dot(&bundle.u);
    let mut rem = fm;
    for i in 0..n {
        for j in 0..n {
            rem[[i, j]] -= bundle.u[i] / dbar_eps + set.ld[[i, j]];
        }
    }
    Ok(inf_norm(&rem))
}

/// How the absorption inverse relates to the group inverse and the
/// pseudoinverse for this graph and absorption vector.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub group_diff: f64,
    /// Zero difference expected exactly when all rates are equal.
    pub group_expected_zero: bool,
    pub pinv_diff: f64,
    /// Zero difference expected exactly when rates are equal and the
    /// Laplacian kernel is the flat vector (balanced graph).
    pub pinv_expected_zero: bool,
    /// `||(scaled Laplacian group inverse) - D X||`; always small.
    pub scaled_group_diff: f64,
}

/// Compares the absorption inverse against its limiting cases. Requires the
/// set to carry `group` and `pinv` companions.
pub fn check_equivalences(
    bundle: &LaplacianBundle,
    d: &Array1<f64>,
    set: &InverseSet,
) -> Result<EquivalenceReport> {
    let n = bundle.l.nrows();
    check_absorption(d, n)?;
    let (group, pinv) = match (&set.group, &set.pinv) {
        (Some(g), Some(p)) => (g, p),
        _ => {
            return Err(Error::Precondition(
                "inverse set must carry group and pinv companions".into(),
            ))
        }
    };
    let dmin = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let dmax = d.iter().cloned().fold(0.0, f64::max);
    let equal_rates = (dmax - dmin) <= 1e-12 * dmax;

    let group_diff = inf_norm(&(&set.ld - group));
    let pinv_diff = inf_norm(&(&set.ld - pinv));

    // group inverse of the absorption-scaled Laplacian L D^{-1}, whose
    // kernel is D u / dbar
    let dbar = d.dot(&bundle.u);
    let l_scaled = Array2::from_shape_fn((n, n), |(i, j)| bundle.l[[i, j]] / d[j]);
    let u_scaled = Array1::from_shape_fn(n, |i| d[i] * bundle.u[i] / dbar);
    let scaled_group = group_inverse_parts(&l_scaled, &u_scaled)?;
    let dx = Array2::from_shape_fn((n, n), |(i, j)| d[i] * set.ld[[i, j]]);
    let scaled_group_diff = inf_norm(&(&scaled_group - &dx));

    Ok(EquivalenceReport {
        group_diff,
        group_expected_zero: equal_rates,
        pinv_diff,
        pinv_expected_zero: equal_rates && bundle.balanced,
        scaled_group_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{laplacian, AbsorptionGraph};
    use crate::sample;
    use ndarray::array;

    fn path3(d: [f64; 3]) -> AbsorptionGraph {
        let a = array![[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]];
        AbsorptionGraph::new(a, Array1::from_vec(d.to_vec())).unwrap()
    }

    fn pair() -> AbsorptionGraph {
        let a = array![[0.0, 1.0], [1.0, 0.0]];
        AbsorptionGraph::new(a, array![1.0, 1.0]).unwrap()
    }

    #[test]
    fn bottleneck_of_unit_path() {
        let b = laplacian(&path3([1.0, 1.0, 1.0])).unwrap();
        let m = bottleneck_matrix(&b).unwrap();
        let expect = array![[2.0, 1.0], [1.0, 1.0]];
        assert!(inf_norm(&(&m.reduced - &expect)) < 1e-12);
        assert_eq!(m.padded[[2, 2]], 0.0);
        assert_eq!(m.padded[[0, 2]], 0.0);
    }

    #[test]
    fn group_inverse_of_unit_path() {
        let b = laplacian(&path3([1.0, 1.0, 1.0])).unwrap();
        let g = group_inverse(&b).unwrap();
        assert!((g[[0, 0]] - 5.0 / 9.0).abs() < 1e-12);
        assert!((g[[1, 1]] - 2.0 / 9.0).abs() < 1e-12);
        assert!((g[[0, 1]] + 1.0 / 9.0).abs() < 1e-12);
        // balanced graph: rows sum to zero
        for i in 0..3 {
            assert!(g.row(i).sum().abs() < 1e-12);
        }
        // commutes with L and satisfies both inverse conditions
        let lg = b.l.dot(&g);
        let gl = g.dot(&b.l);
        assert!(inf_norm(&(&lg - &gl)) < 1e-11);
        assert!(inf_norm(&(&lg.dot(&b.l) - &b.l)) < 1e-11);
        assert!(inf_norm(&(&gl.dot(&g) - &g)) < 1e-11);
    }

    #[test]
    fn group_inverse_resolvent_route_agrees() {
        for seed in 0..10 {
            let g = sample::random_strongly_connected(2 + (seed as usize % 5), 0.5, seed);
            let b = laplacian(&g).unwrap();
            let g1 = group_inverse(&b).unwrap();
            let g2 = group_inverse_resolvent(&b).unwrap();
            assert!(inf_norm(&(&g1 - &g2)) < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn group_inverse_diagonal_of_directed_cycle() {
        let a = array![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let g = AbsorptionGraph::new(a, array![1.0, 1.0, 1.0]).unwrap();
        let b = laplacian(&g).unwrap();
        let gi = group_inverse(&b).unwrap();
        for i in 0..3 {
            assert!((gi[[i, i]] - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fundamental_matrix_of_pair() {
        let b = laplacian(&pair()).unwrap();
        let pi = jump_stationary(&b);
        assert!((pi[0] - 0.5).abs() < 1e-14);
        let z = fundamental_matrix_regular(&b).unwrap();
        // L Z L = L
        assert!(inf_norm(&(&b.l.dot(&z).dot(&b.l) - &b.l)) < 1e-12);
    }

    #[test]
    fn fundamental_matrix_factorization() {
        // Z = (I - u wᵀ / wᵀu) L⁺ (I - pi 1ᵀ) + u 1ᵀ / wᵀu
        for seed in 0..10 {
            let g = sample::random_strongly_connected(2 + (seed as usize % 5), 0.6, seed + 100);
            let b = laplacian(&g).unwrap();
            let n = g.n();
            let z = fundamental_matrix_regular(&b).unwrap();
            let pinv = numerics::pseudoinverse_rank_deficient(
                &b.l,
                &b.u,
                &Array1::ones(n),
            )
            .unwrap();
            let wu = b.out_degrees.dot(&b.u);
            let pi = jump_stationary(&b);
            let left = eye_minus_outer(&(&b.u / wu), &b.out_degrees);
            let right = eye_minus_outer(&pi, &Array1::ones(n));
            let mut expect = left.dot(&pinv).dot(&right);
            for i in 0..n {
                for j in 0..n {
                    expect[[i, j]] += b.u[i] / wu;
                }
            }
            assert!(inf_norm(&(&z - &expect)) < 1e-8, "seed {seed}");
            // pi is stationary for the jump chain P = A W^{-1}
            let p = Array2::from_shape_fn((n, n), |(i, j)| {
                g.adjacency()[[i, j]] / b.out_degrees[j]
            });
            let ppi = p.dot(&pi);
            for i in 0..n {
                assert!((ppi[i] - pi[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn absorption_inverse_worked_path_entry() {
        let g = path3([1.0, 2.0, 3.0]);
        let b = laplacian(&g).unwrap();
        let set = absorption_inverse(&b, g.absorption(), Route::Bottleneck).unwrap();
        assert!((set.ld[[0, 1]] - 1.0 / 9.0).abs() < 1e-13);
        assert!((set.ld[[0, 0]] - 17.0 / 18.0).abs() < 1e-13);
    }

    #[test]
    fn absorption_inverse_of_pair_equal_rates() {
        let b = laplacian(&pair()).unwrap();
        let set = absorption_inverse(&b, &array![1.0, 1.0], Route::Bottleneck).unwrap();
        let expect = array![[0.25, -0.25], [-0.25, 0.25]];
        assert!(inf_norm(&(&set.ld - &expect)) < 1e-13);
    }

    #[test]
    fn equal_rates_reduce_to_group_inverse() {
        for seed in 0..10 {
            let g = sample::random_strongly_connected(2 + (seed as usize % 6), 0.5, seed + 7);
            let b = laplacian(&g).unwrap();
            let d = Array1::from_elem(g.n(), 1.7);
            let set = absorption_inverse(&b, &d, Route::Bottleneck).unwrap();
            let gi = group_inverse(&b).unwrap();
            assert!(inf_norm(&(&set.ld - &gi)) < 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn routes_agree_on_random_graphs() {
        for seed in 0..15 {
            let g = sample::random_strongly_connected(2 + (seed as usize % 7), 0.5, seed + 300);
            let b = laplacian(&g).unwrap();
            let report = cross_route_check(&b, g.absorption(), 1e-6).unwrap();
            assert!(report.max_deviation < 1e-8, "seed {seed}: {report:?}");
        }
    }

    #[test]
    fn forest_route_needs_graph() {
        let b = laplacian(&pair()).unwrap();
        assert!(matches!(
            absorption_inverse(&b, &array![1.0, 1.0], Route::Forest),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn defining_conditions_hold() {
        for seed in 0..12 {
            let g = sample::random_strongly_connected(2 + (seed as usize % 7), 0.6, seed + 40);
            let b = laplacian(&g).unwrap();
            let set = absorption_inverse(&b, g.absorption(), Route::Bottleneck).unwrap();
            let r = set.residuals(&b, g.absorption());
            assert!(r.max() < 1e-9, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn scale_of_absorption_does_not_matter() {
        let g = path3([1.0, 2.0, 3.0]);
        let b = laplacian(&g).unwrap();
        let s1 = absorption_inverse(&b, g.absorption(), Route::Bottleneck).unwrap();
        let scaled: Array1<f64> = g.absorption() * 37.5;
        let s2 = absorption_inverse(&b, &scaled, Route::Bottleneck).unwrap();
        assert!(inf_norm(&(&s1.ld - &s2.ld)) < 1e-12);
    }

    #[test]
    fn absorbing_fundamental_matrix_of_pair() {
        let b = laplacian(&pair()).unwrap();
        let fm = fundamental_matrix_absorbing(&b, &array![1.0, 1.0], 1.0).unwrap();
        let expect = array![[2.0 / 3.0, 1.0 / 3.0], [1.0 / 3.0, 2.0 / 3.0]];
        assert!(inf_norm(&(&fm - &expect)) < 1e-12);
    }

    #[test]
    fn absorbing_fundamental_matrix_row_identity() {
        // z dᵀ (L + zD)^{-1} = 1ᵀ because columns of L sum to zero
        for seed in 0..8 {
            let g = sample::random_strongly_connected(3 + (seed as usize % 5), 0.5, seed + 500);
            let b = laplacian(&g).unwrap();
            for z in [0.5, 1.0, 3.0] {
                let fm = fundamental_matrix_absorbing(&b, g.absorption(), z).unwrap();
                for j in 0..g.n() {
                    let s: f64 = (0..g.n())
                        .map(|i| z * g.absorption()[i] * fm[[i, j]])
                        .sum();
                    assert!((s - 1.0).abs() < 1e-9, "seed {seed} z {z} col {j}");
                }
            }
        }
    }

    #[test]
    fn absorbing_fundamental_matrix_large_z_limit() {
        let g = path3([1.0, 2.0, 3.0]);
        let b = laplacian(&g).unwrap();
        let z = 1e8;
        let fm = fundamental_matrix_absorbing(&b, g.absorption(), z).unwrap();
        for i in 0..3 {
            let expect = 1.0 / (z * g.absorption()[i]);
            assert!((fm[[i, i]] - expect).abs() < 1e-6 * expect);
        }
    }

    #[test]
    fn resolvent_identities_across_scales() {
        for seed in 0..8 {
            let g = sample::random_strongly_connected(3 + (seed as usize % 5), 0.5, seed + 900);
            let b = laplacian(&g).unwrap();
            let set = absorption_inverse(&b, g.absorption(), Route::Bottleneck).unwrap();
            for (z, tol) in [(1.0, 1e-9), (1e3, 1e-8), (1e-6, 1e-7)] {
                let r = fundamental_identity_check(&b, g.absorption(), &set.ld, z).unwrap();
                assert!(r.fundamental < tol, "seed {seed} z {z}: {}", r.fundamental);
                assert!(r.projection < tol, "seed {seed} z {z}: {}", r.projection);
            }
        }
    }

    #[test]
    fn laurent_truncation_at_zero_terms() {
        let g = path3([1.0, 2.0, 3.0]);
        let b = laplacian(&g).unwrap();
        let set = absorption_inverse(&b, g.absorption(), Route::Bottleneck).unwrap();
        let (acc, _) = laurent_series_eval(&b, g.absorption(), &set.ld, 1.0, 0).unwrap();
        let dbar = g.absorption().dot(&b.u);
        let mut expect = set.ld.clone();
        for i in 0..3 {
            for j in 0..3 {
                expect[[i, j]] += b.u[i] / dbar;
            }
        }
        assert!(inf_norm(&(&acc - &expect)) < 1e-13);
    }

    #[test]
    fn laurent_series_converges_for_small_rates() {
        let g = path3([0.01, 0.01, 0.01]);
        let b = laplacian(&g).unwrap();
        let set = absorption_inverse(&b, g.absorption(), Route::Bottleneck).unwrap();
        let (acc, flag) = laurent_series_eval(&b, g.absorption(), &set.ld, 1.0, 20).unwrap();
        assert!(flag);
        let fm = fundamental_matrix_absorbing(&b, g.absorption(), 1.0).unwrap();
        assert!(inf_norm(&(&acc - &fm)) < 1e-10);
    }

    #[test]
    fn laurent_flag_false_when_diverging() {
        let g = path3([1.0, 2.0, 3.0]);
        let b = laplacian(&g).unwrap();
        let set = absorption_inverse(&b, g.absorption(), Route::Bottleneck).unwrap();
        let (_, flag) = laurent_series_eval(&b, g.absorption(), &set.ld, 1e4, 3).unwrap();
        assert!(!flag);
    }

    #[test]
    fn deviation_ratio_halves_at_small_scale() {
        for seed in [1, 4, 9] {
            let g = sample::random_strongly_connected(4, 0.5, seed);
            let b = laplacian(&g).unwrap();
            let r = residence_deviation_check(&b, g.absorption(), 1e-3).unwrap();
            assert!(r.ratio > 0.4 && r.ratio < 0.6, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn equal_rates_stay_group_under_scaling() {
        let g = sample::random_strongly_connected(5, 0.5, 77);
        let b = laplacian(&g).unwrap();
        let gi = group_inverse(&b).unwrap();
        for eps in [1.0, 1e-2, 1e-4] {
            let d = Array1::from_elem(5, eps);
            let set = absorption_inverse(&b, &d, Route::Bottleneck).unwrap();
            assert!(inf_norm(&(&set.ld - &gi)) < 1e-9, "eps {eps}");
        }
    }

    #[test]
    fn equivalence_report_flags() {
        // undirected path with equal rates: all three differences vanish
        let g = path3([2.0, 2.0, 2.0]);
        let b = laplacian(&g).unwrap();
        let set = inverse_set_full(&b, g.absorption()).unwrap();
        let r = check_equivalences(&b, g.absorption(), &set).unwrap();
        assert!(r.group_expected_zero && r.group_diff < 1e-10);
        assert!(r.pinv_expected_zero && r.pinv_diff < 1e-9);
        assert!(r.scaled_group_diff < 1e-8);

        // distinct rates: group difference must be visible
        let g = path3([1.0, 2.0, 3.0]);
        let b = laplacian(&g).unwrap();
        let set = inverse_set_full(&b, g.absorption()).unwrap();
        let r = check_equivalences(&b, g.absorption(), &set).unwrap();
        assert!(!r.group_expected_zero && r.group_diff > 0.01);
        assert!(r.scaled_group_diff < 1e-8);

        // unbalanced graph with equal rates: group matches, pinv does not
        let a = array![[0.0, 1.0], [2.0, 0.0]];
        let g = AbsorptionGraph::new(a, array![1.0, 1.0]).unwrap();
        let b = laplacian(&g).unwrap();
        let set = inverse_set_full(&b, g.absorption()).unwrap();
        let r = check_equivalences(&b, g.absorption(), &set).unwrap();
        assert!(r.group_expected_zero && r.group_diff < 1e-10);
        assert!(!r.pinv_expected_zero && r.pinv_diff > 1e-3);
    }

    #[test]
    fn shifted_construction_matrix_is_nonsingular() {
        for seed in 0..8 {
            let g = sample::random_strongly_connected(3 + (seed as usize % 5), 0.5, seed + 60);
            let b = laplacian(&g).unwrap();
            let d = g.absorption();
            let dbar = d.dot(&b.u);
            for z in [0.1, 1.0, 10.0] {
                let n = g.n();
                let mut m = b.l.clone();
                for i in 0..n {
                    for j in 0..n {
                        m[[i, j]] += z * d[i] * b.u[i] * d[j] / dbar;
                    }
                }
                assert!(numerics::invert(&m).is_ok(), "seed {seed} z {z}");
            }
        }
    }
}
