//! Numerical kernels shared by the estimators.
//!
//! Dense decompositions (Hermitian eigen, SVD-based least squares, Cholesky
//! inversion, small general eigenvalues) are delegated to `nalgebra`; the
//! polynomial root finder (Aberth-Ehrlich with Newton polish), the
//! forward-backward augmentation and the sparse unitary "pi-real" transforms
//! are implemented here. Every routine is pure and deterministic.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::array::{CovarianceMatrix, SnapshotMatrix};
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition and subspace partition
// ---------------------------------------------------------------------------

/// Full eigendecomposition of a Hermitian matrix, eigenvalues sorted in
/// descending order (ties keep the decomposition's own order).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Real eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm eigenvectors as columns, aligned with `eigenvalues`.
    pub eigenvectors: DMatrix<Complex64>,
}

/// Eigendecomposition of a Hermitian covariance matrix.
///
/// The decomposition satisfies `R = Q diag(lambda) Q^H` with orthonormal `Q`;
/// callers can rely on a reconstruction residual below `1e-9 * ||R||_F` and
/// orthonormality defects below `1e-10`.
pub fn hermitian_eig(covariance: &CovarianceMatrix) -> Result<HermitianEigen> {
    let se = nalgebra::SymmetricEigen::try_new(covariance.as_matrix().clone(), f64::EPSILON, 100_000)
        .ok_or(Error::Convergence("hermitian eigendecomposition"))?;
    let m = covariance.dim();
    let mut order: Vec<usize> = (0..m).collect();
    // stable sort: equal eigenvalues keep the decomposition's column order
    order.sort_by(|&i, &j| se.eigenvalues[j].partial_cmp(&se.eigenvalues[i]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::<Complex64>::zeros(m, m);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Signal/noise subspace split of a covariance eigendecomposition.
///
/// The leading `num_sources` eigenvectors span the signal subspace, the
/// remaining `M - num_sources` the noise subspace; the two bases are jointly
/// orthonormal and complete.
#[derive(Debug, Clone)]
pub struct SubspaceDecomposition {
    eigenvalues: Vec<f64>,
    signal_basis: DMatrix<Complex64>,
    noise_basis: DMatrix<Complex64>,
    noise_power: f64,
}

impl SubspaceDecomposition {
    /// Convenience: eigendecompose `covariance` and split at `num_sources`.
    pub fn from_covariance(covariance: &CovarianceMatrix, num_sources: usize) -> Result<Self> {
        partition_subspaces(hermitian_eig(covariance)?, num_sources)
    }

    /// Assemble a decomposition from explicit parts (mainly useful for
    /// testing invariances). Shapes and joint orthonormality are validated.
    pub fn from_parts(
        eigenvalues: Vec<f64>,
        signal_basis: DMatrix<Complex64>,
        noise_basis: DMatrix<Complex64>,
    ) -> Result<Self> {
        let m = signal_basis.nrows();
        let l = signal_basis.ncols();
        if noise_basis.nrows() != m || noise_basis.ncols() != m - l {
            return Err(Error::InvalidArgument(
                "subspace basis shapes are inconsistent".into(),
            ));
        }
        if eigenvalues.len() != m {
            return Err(Error::InvalidArgument(
                "need one eigenvalue per dimension".into(),
            ));
        }
        let mut q = DMatrix::<Complex64>::zeros(m, m);
        for c in 0..l {
            q.set_column(c, &signal_basis.column(c));
        }
        for c in 0..(m - l) {
            q.set_column(l + c, &noise_basis.column(c));
        }
        let defect = (q.adjoint() * &q - DMatrix::<Complex64>::identity(m, m)).norm();
        if defect > 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "bases are not jointly orthonormal (defect {defect:.2e})"
            )));
        }
        let noise_power = eigenvalues[l..].iter().sum::<f64>() / (m - l) as f64;
        Ok(Self {
            eigenvalues,
            signal_basis,
            noise_basis,
            noise_power,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.signal_basis.nrows()
    }

    pub fn num_sources(&self) -> usize {
        self.signal_basis.ncols()
    }

    /// All eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `M x L` signal-subspace basis.
    pub fn signal_basis(&self) -> &DMatrix<Complex64> {
        &self.signal_basis
    }

    /// `M x (M-L)` noise-subspace basis.
    pub fn noise_basis(&self) -> &DMatrix<Complex64> {
        &self.noise_basis
    }

    /// Mean of the noise-subspace eigenvalues.
    pub fn noise_power_estimate(&self) -> f64 {
        self.noise_power
    }

    /// Noise-subspace projector `Q_n Q_n^H`, computed as `I - Q_s Q_s^H`
    /// (identical by completeness of the eigenbasis, and much cheaper when
    /// `L << M`). The result is Hermitian by construction.
    pub fn noise_projector(&self) -> DMatrix<Complex64> {
        let m = self.num_elements();
        let mut p = DMatrix::<Complex64>::identity(m, m) - &self.signal_basis * self.signal_basis.adjoint();
        for i in 0..m {
            p[(i, i)] = Complex64::new(p[(i, i)].re, 0.0);
            for j in 0..i {
                let v = (p[(i, j)] + p[(j, i)].conj()) * 0.5;
                p[(i, j)] = v;
                p[(j, i)] = v.conj();
            }
        }
        p
    }
}

/// Split a Hermitian eigendecomposition into signal and noise subspaces.
/// Requires `1 <= num_sources < M`.
pub fn partition_subspaces(
    eigen: HermitianEigen,
    num_sources: usize,
) -> Result<SubspaceDecomposition> {
    let m = eigen.eigenvalues.len();
    if num_sources == 0 || num_sources >= m {
        return Err(Error::InvalidArgument(format!(
            "source count must satisfy 1 <= L < M, got L={num_sources}, M={m}"
        )));
    }
    let signal_basis = eigen.eigenvectors.columns(0, num_sources).into_owned();
    let noise_basis = eigen
        .eigenvectors
        .columns(num_sources, m - num_sources)
        .into_owned();
    let noise_power =
        eigen.eigenvalues[num_sources..].iter().sum::<f64>() / (m - num_sources) as f64;
    Ok(SubspaceDecomposition {
        eigenvalues: eigen.eigenvalues,
        signal_basis,
        noise_basis,
        noise_power,
    })
}

// ---------------------------------------------------------------------------
// Hermitian inversion and least squares
// ---------------------------------------------------------------------------

/// Invert a Hermitian positive (semi-)definite matrix, optionally after
/// diagonal loading `R + loading * (trace(R)/M) * I`.
///
/// Loading is relative to the average eigenvalue so that the regularization
/// is scale invariant. A matrix that is singular to working precision (after
/// loading) is reported as [`Error::Singular`].
pub fn invert_hermitian(covariance: &CovarianceMatrix, loading: f64) -> Result<DMatrix<Complex64>> {
    if !loading.is_finite() || loading < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "diagonal loading must be finite and non-negative, got {loading}"
        )));
    }
    let m = covariance.dim();
    let mut r = covariance.as_matrix().clone();
    if loading > 0.0 {
        let shift = loading * covariance.trace_re() / m as f64;
        for i in 0..m {
            r[(i, i)] += Complex64::new(shift, 0.0);
        }
    }
    match r.cholesky() {
        Some(ch) => Ok(ch.inverse()),
        None => Err(Error::Singular),
    }
}

/// Solve `min_X || A X - B ||_F` for `A` of shape `p x q` with `p >= q` and
/// full column rank, via the singular value decomposition.
///
/// The residual satisfies the normal equations: `A^H (A X - B) = 0` up to
/// roundoff. Rank deficiency (to working precision) is an explicit error.
pub fn least_squares<T>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<DMatrix<T>>
where
    T: ComplexField<RealField = f64>,
{
    let (p, q) = (a.nrows(), a.ncols());
    if q == 0 || p < q {
        return Err(Error::InvalidArgument(format!(
            "least squares needs a tall (p >= q >= 1) matrix, got {p}x{q}"
        )));
    }
    if b.nrows() != p {
        return Err(Error::InvalidArgument(format!(
            "right-hand side has {} rows, expected {p}",
            b.nrows()
        )));
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let tol = (p.max(q)) as f64 * f64::EPSILON * smax;
    if smax == 0.0 || svd.singular_values.iter().any(|&s| s <= tol) {
        return Err(Error::RankDeficient);
    }
    svd.solve(b, 0.0)
        .map_err(|m| Error::InvalidArgument(m.to_string()))
}

// ---------------------------------------------------------------------------
// Polynomial roots (Aberth-Ehrlich)
// ---------------------------------------------------------------------------

/// All complex roots (with multiplicity) of the polynomial
/// `p(z) = coeffs[0] + coeffs[1] z + ... + coeffs[n] z^n`.
///
/// Roots at the origin are stripped exactly; the rest are found with the
/// Aberth-Ehrlich simultaneous iteration started from Newton-polygon radii,
/// then polished with one Newton step each. Every returned root `z`
/// satisfies `|p(z)| <= 1e-6 * max|coeff| * max(1, |z|)^n`.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if coeffs.len() < 2 {
        return Err(Error::InvalidArgument(
            "polynomial degree must be at least 1".into(),
        ));
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidArgument(
            "polynomial coefficients must be finite".into(),
        ));
    }
    let lead = *coeffs.last().unwrap();
    if lead.norm_sqr() == 0.0 {
        return Err(Error::InvalidArgument(
            "leading coefficient must be nonzero".into(),
        ));
    }

    // roots at z = 0 come from trailing zero coefficients
    let first_nonzero = coeffs.iter().position(|c| c.norm_sqr() != 0.0).unwrap();
    let mut roots = vec![Complex64::new(0.0, 0.0); first_nonzero];
    let work = &coeffs[first_nonzero..];
    let degree = work.len() - 1;
    if degree == 0 {
        return Ok(roots);
    }

    let monic: Vec<Complex64> = work.iter().map(|c| c / lead).collect();
    match degree {
        1 => roots.push(-monic[0]),
        2 => roots.extend(quadratic_roots(monic[1], monic[0])),
        _ => roots.extend(aberth(&monic)?),
    }

    // contract check on the *original* polynomial
    let max_coeff = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let n = coeffs.len() - 1;
    for &z in &roots {
        let (p, _dp) = horner(coeffs, z);
        let bound = 1e-6 * max_coeff * z.norm().max(1.0).powi(n as i32);
        if !(p.norm() <= bound) {
            return Err(Error::Convergence("polynomial root finder"));
        }
    }
    Ok(roots)
}

/// Roots of the monic quadratic `z^2 + b z + c`, with the numerically stable
/// formulation that avoids cancellation.
fn quadratic_roots(b: Complex64, c: Complex64) -> [Complex64; 2] {
    if c.norm_sqr() == 0.0 {
        return [Complex64::new(0.0, 0.0), -b];
    }
    let disc = (b * b - 4.0 * c).sqrt();
    // pick the sign that grows |b + s*disc|
    let s = if (b.conj() * disc).re >= 0.0 { disc } else { -disc };
    let t = -(b + s) * 0.5;
    [t, c / t]
}

/// Value and derivative of `p` at `z` by Horner's scheme.
fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = *coeffs.last().unwrap();
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs[..coeffs.len() - 1].iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Horner evaluation together with a running floating-point error bound; a
/// value whose magnitude is below the bound is indistinguishable from zero.
fn horner_with_bound(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let az = z.norm();
    let mut p = *coeffs.last().unwrap();
    let mut dp = Complex64::new(0.0, 0.0);
    let mut mag = p.norm();
    for &c in coeffs[..coeffs.len() - 1].iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        mag = mag * az + c.norm();
    }
    let bound = mag * f64::EPSILON * (4 * coeffs.len()) as f64;
    (p, dp, bound)
}

/// Initial radii for the Aberth iteration from the upper convex hull of
/// `(k, ln |c_k|)` (Newton polygon): between hull vertices `k1 < k2` the
/// polynomial has `k2 - k1` roots of magnitude roughly
/// `(|c_{k1}| / |c_{k2}|)^(1/(k2-k1))`.
fn newton_polygon_radii(monic: &[Complex64]) -> Vec<f64> {
    let pts: Vec<(f64, f64)> = monic
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() != 0.0)
        .map(|(k, c)| (k as f64, c.norm().ln()))
        .collect();
    // upper hull: slopes non-increasing left to right
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p3 in &pts {
        while hull.len() >= 2 {
            let p1 = hull[hull.len() - 2];
            let p2 = hull[hull.len() - 1];
            // pop p2 if it lies on or below the chord p1 -> p3
            if (p2.1 - p1.1) * (p3.0 - p2.0) <= (p3.1 - p2.1) * (p2.0 - p1.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p3);
    }
    let degree = monic.len() - 1;
    let mut radii = Vec::with_capacity(degree);
    for w in hull.windows(2) {
        let (k1, v1) = w[0];
        let (k2, v2) = w[1];
        let r = ((v1 - v2) / (k2 - k1)).exp().clamp(1e-12, 1e12);
        for _ in 0..((k2 - k1) as usize) {
            radii.push(r);
        }
    }
    debug_assert_eq!(radii.len(), degree);
    radii
}

/// Aberth-Ehrlich simultaneous iteration on a monic polynomial of degree
/// >= 3, followed by one Newton polish step per root.
fn aberth(monic: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = monic.len() - 1;
    let radii = newton_polygon_radii(monic);
    let mut z: Vec<Complex64> = (0..n)
        .map(|i| {
            // spread the starts over a spiral of circles; the 0.7 offset
            // avoids symmetry locking on polynomials with real coefficients
            let angle = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64 + 0.7;
            Complex64::from_polar(radii[i], angle)
        })
        .collect();
    let mut done = vec![false; n];

    const MAX_SWEEPS: usize = 600;
    for _ in 0..MAX_SWEEPS {
        let mut active = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (p, dp, noise) = horner_with_bound(monic, zi);
            if p.norm() <= noise {
                done[i] = true;
                continue;
            }
            let newton = if dp.norm_sqr() > 0.0 {
                p / dp
            } else {
                // stationary point: nudge off it
                Complex64::new(f64::EPSILON.sqrt(), f64::EPSILON.sqrt()) * (1.0 + zi.norm())
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    let d = zi - zj;
                    if d.norm_sqr() > 0.0 {
                        repulsion += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm_sqr() > f64::MIN_POSITIVE {
                newton / denom
            } else {
                newton
            };
            z[i] = zi - step;
            if step.norm() <= 1e-14 * (1.0 + z[i].norm()) {
                done[i] = true;
            } else {
                active = true;
            }
        }
        if !active {
            break;
        }
    }

    // one Newton step per root tightens simple roots to machine precision
    for zi in z.iter_mut() {
        let (p, dp) = horner(monic, *zi);
        if dp.norm_sqr() > 0.0 {
            let step = p / dp;
            if step.norm() < 0.1 * (1.0 + zi.norm()) {
                *zi -= step;
            }
        }
    }
    Ok(z)
}

// ---------------------------------------------------------------------------
// DFT
// ---------------------------------------------------------------------------

/// Zero-padded forward DFT: `X_l = sum_m x_m exp(-j 2 pi m l / n_fft)`.
/// `n_fft` must be a power of two no smaller than the input length.
pub fn dft(x: &[Complex64], n_fft: usize) -> Result<Vec<Complex64>> {
    if n_fft == 0 || !n_fft.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "n_fft must be a power of two, got {n_fft}"
        )));
    }
    if x.len() > n_fft {
        return Err(Error::InvalidArgument(format!(
            "n_fft ({n_fft}) must be at least the input length ({})",
            x.len()
        )));
    }
    let mut buf = x.to_vec();
    buf.resize(n_fft, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);
    Ok(buf)
}

// ---------------------------------------------------------------------------
// Exchange (reversal) matrices and forward-backward augmentation
// ---------------------------------------------------------------------------

/// The exchange (row-reversal) permutation, applied without ever building
/// the dense matrix unless explicitly requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExchangeMatrix {
    order: usize,
}

impl ExchangeMatrix {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument(
                "exchange matrix order must be positive".into(),
            ));
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `Pi * m`: reverse the row order.
    pub fn apply_left(&self, m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if m.nrows() != self.order {
            return Err(Error::InvalidArgument(format!(
                "exchange of order {} cannot left-multiply a {}-row matrix",
                self.order,
                m.nrows()
            )));
        }
        Ok(DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            m[(m.nrows() - 1 - i, j)]
        }))
    }

    /// `m * Pi`: reverse the column order.
    pub fn apply_right(&self, m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if m.ncols() != self.order {
            return Err(Error::InvalidArgument(format!(
                "exchange of order {} cannot right-multiply a {}-column matrix",
                self.order,
                m.ncols()
            )));
        }
        Ok(DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            m[(i, m.ncols() - 1 - j)]
        }))
    }

    /// Dense representation (identity with reversed rows).
    pub fn materialize(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.order, self.order, |i, j| {
            if i + j == self.order - 1 {
                1.0
            } else {
                0.0
            }
        })
    }
}

/// Forward-backward augmentation `[X, Pi_M conj(X) Pi_S]` of an `M x S`
/// snapshot matrix; the result is `M x 2S` and its (scaled) covariance is
/// centro-Hermitian.
pub fn forward_backward_average(snapshots: &SnapshotMatrix) -> SnapshotMatrix {
    let m = snapshots.num_elements();
    let s = snapshots.num_snapshots();
    let x = snapshots.as_matrix();
    let mut y = DMatrix::<Complex64>::zeros(m, 2 * s);
    for n in 0..s {
        for i in 0..m {
            y[(i, n)] = x[(i, n)];
            y[(i, s + n)] = x[(m - 1 - i, s - 1 - n)].conj();
        }
    }
    SnapshotMatrix::new(y).expect("augmentation of finite data is finite")
}

// ---------------------------------------------------------------------------
// Pi-real (unitary) transforms
// ---------------------------------------------------------------------------

/// Entry `(row, col)` of the sparse unitary transform `Q_p` (see
/// [`pi_real_transform`]); each column has at most two nonzero entries.
fn q_entry(p: usize, row: usize, col: usize) -> Complex64 {
    let n = p / 2;
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let odd = p % 2 == 1;
    if odd && col == n {
        return if row == n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    if col < n {
        if row == col {
            Complex64::new(inv, 0.0)
        } else if row == p - 1 - col {
            Complex64::new(inv, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    } else {
        let c = col - n - usize::from(odd);
        if row == c {
            Complex64::new(0.0, inv)
        } else if row == p - 1 - c {
            Complex64::new(0.0, -inv)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// The two sparse positions `(row, value)` of column `col` of `Q_p`.
/// The second entry duplicates the first for the odd central column.
fn q_column(p: usize, col: usize) -> [(usize, Complex64); 2] {
    let n = p / 2;
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let odd = p % 2 == 1;
    if odd && col == n {
        return [(n, Complex64::new(1.0, 0.0)), (n, Complex64::new(0.0, 0.0))];
    }
    if col < n {
        [
            (col, Complex64::new(inv, 0.0)),
            (p - 1 - col, Complex64::new(inv, 0.0)),
        ]
    } else {
        let c = col - n - usize::from(odd);
        [
            (c, Complex64::new(0.0, inv)),
            (p - 1 - c, Complex64::new(0.0, -inv)),
        ]
    }
}

/// Unitary matrix `Q_p` mapping centro-conjugate-symmetric vectors to real
/// vectors (`Pi_p conj(Q_p) = Q_p`):
///
/// ```text
/// Q_2n   = (1/sqrt 2) [ I_n     j I_n  ]        Q_2n+1 = (1/sqrt 2) [ I_n    0      j I_n  ]
///                     [ Pi_n   -j Pi_n ]                            [ 0^T  sqrt 2   0^T    ]
///                                                                   [ Pi_n   0     -j Pi_n ]
/// ```
pub fn pi_real_transform(p: usize) -> Result<DMatrix<Complex64>> {
    if p == 0 {
        return Err(Error::InvalidArgument(
            "transform order must be positive".into(),
        ));
    }
    Ok(DMatrix::from_fn(p, p, |r, c| q_entry(p, r, c)))
}

/// Congruence transform `Re{ Q_p^H R Q_p }` for a square complex `R`,
/// exploiting the two-nonzeros-per-column sparsity of `Q_p`; costs `O(p^2)`
/// instead of two dense products. The result is exactly symmetric when `R`
/// is Hermitian.
pub(crate) fn real_congruence_transform(r: &DMatrix<Complex64>) -> DMatrix<f64> {
    let p = r.nrows();
    debug_assert_eq!(p, r.ncols());
    let cols: Vec<[(usize, Complex64); 2]> = (0..p).map(|c| q_column(p, c)).collect();
    let mut t = DMatrix::<f64>::zeros(p, p);
    for k in 0..p {
        let qk = &cols[k];
        for l in 0..=k {
            let ql = &cols[l];
            let mut acc = Complex64::new(0.0, 0.0);
            for &(ri, vi) in qk.iter() {
                if vi.norm_sqr() == 0.0 {
                    continue;
                }
                for &(rj, vj) in ql.iter() {
                    if vj.norm_sqr() == 0.0 {
                        continue;
                    }
                    acc += vi.conj() * r[(ri, rj)] * vj;
                }
            }
            t[(k, l)] = acc.re;
            t[(l, k)] = acc.re;
        }
    }
    t
}

/// Real selection matrices `K_1 = 2 Re{ Q_{M-1}^H J_2 Q_M }` and
/// `K_2 = 2 Im{ Q_{M-1}^H J_2 Q_M }`, where `J_2 = [0 | I_{M-1}]` selects the
/// shifted subarray. Both are `(M-1) x M`.
pub fn selection_matrices(num_elements: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if num_elements < 2 {
        return Err(Error::InvalidArgument(
            "selection matrices need at least two elements".into(),
        ));
    }
    let m_out = num_elements - 1;
    let cols_small: Vec<[(usize, Complex64); 2]> = (0..m_out).map(|c| q_column(m_out, c)).collect();
    let mut k1 = DMatrix::<f64>::zeros(m_out, num_elements);
    let mut k2 = DMatrix::<f64>::zeros(m_out, num_elements);
    for k in 0..m_out {
        let qk = &cols_small[k];
        for l in 0..num_elements {
            // (Q_m^H J2 Q_M)[k, l] = sum_r conj(Q_m[r, k]) * Q_M[r + 1, l]
            let mut acc = Complex64::new(0.0, 0.0);
            for &(ri, vi) in qk.iter() {
                if vi.norm_sqr() == 0.0 {
                    continue;
                }
                acc += vi.conj() * q_entry(num_elements, ri + 1, l);
            }
            k1[(k, l)] = 2.0 * acc.re;
            k2[(k, l)] = 2.0 * acc.im;
        }
    }
    Ok((k1, k2))
}

// ---------------------------------------------------------------------------
// Small dense eigensolvers used by the rotational estimators
// ---------------------------------------------------------------------------

/// Eigenvalues of a small square complex matrix (rotation operators of the
/// subspace estimators; dimension = number of sources).
pub(crate) fn eigenvalues_complex(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    match n {
        0 => Ok(Vec::new()),
        1 => Ok(vec![m[(0, 0)]]),
        2 => {
            // roots of z^2 - tr z + det
            let tr = m[(0, 0)] + m[(1, 1)];
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            Ok(quadratic_roots(-tr, det).to_vec())
        }
        _ => {
            let ev = m
                .clone()
                .eigenvalues()
                .ok_or(Error::Convergence("complex eigenvalue iteration"))?;
            Ok(ev.iter().copied().collect())
        }
    }
}

/// Descending-order eigendecomposition of a real symmetric matrix.
pub(crate) fn real_symmetric_eig_desc(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let se = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, 100_000)
        .ok_or(Error::Convergence("symmetric eigendecomposition"))?;
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].partial_cmp(&se.eigenvalues[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok((values, vectors))
}
