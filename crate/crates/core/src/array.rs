//! Uniform linear array signal model.
//!
//! The array is a uniform linear array (ULA) of `M` isotropic elements with
//! inter-element spacing `d`, expressed as the ratio `d/lambda`. A narrowband
//! plane wave from direction `theta` (measured from broadside, in degrees)
//! hits element `k` with phase delay `2*pi*(d/lambda)*k*sin(theta)`, so the
//! steering vector is
//!
//! ```text
//! a_k(theta) = exp(-j * 2*pi * (d/lambda) * k * sin(theta)),   k = 0..M-1
//! ```
//!
//! Snapshots follow the standard model `x_n = A s_n + n_n` with i.i.d.
//! circular complex Gaussian source amplitudes and noise. The SNR is defined
//! per element as `sigma_s^2 / sigma_n^2` in dB; `snr_db = +inf` disables
//! noise entirely.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Geometry of a uniform linear array.
///
/// Spacings are carried as ratios to the carrier wavelength. The subarray
/// displacement is the spacing between the two (maximally overlapping)
/// subarrays used by the rotational-invariance estimators; for a plain ULA
/// it equals the element spacing and that is the default.
#[derive(Debug, Clone, PartialEq)]
pub struct UlaGeometry {
    num_elements: usize,
    spacing: f64,
    subarray_displacement: f64,
}

impl UlaGeometry {
    /// Create a geometry with `num_elements >= 2` and `spacing = d/lambda > 0`.
    /// The subarray displacement defaults to the element spacing.
    pub fn new(num_elements: usize, spacing: f64) -> Result<Self> {
        if num_elements < 2 {
            return Err(Error::InvalidGeometry(format!(
                "need at least 2 elements, got {num_elements}"
            )));
        }
        if !spacing.is_finite() || spacing <= 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "spacing d/lambda must be finite and positive, got {spacing}"
            )));
        }
        Ok(Self {
            num_elements,
            spacing,
            subarray_displacement: spacing,
        })
    }

    /// Standard half-wavelength array: `d/lambda = 0.5`.
    pub fn half_wavelength(num_elements: usize) -> Result<Self> {
        Self::new(num_elements, 0.5)
    }

    /// Override the subarray displacement `Delta/lambda` (must be positive).
    pub fn with_subarray_displacement(mut self, displacement: f64) -> Result<Self> {
        if !displacement.is_finite() || displacement <= 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "subarray displacement must be finite and positive, got {displacement}"
            )));
        }
        self.subarray_displacement = displacement;
        Ok(self)
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    /// Element spacing as `d/lambda`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Subarray displacement as `Delta/lambda`.
    pub fn subarray_displacement(&self) -> f64 {
        self.subarray_displacement
    }
}

/// A set of uncorrelated far-field sources with a common per-source power.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSet {
    angles_deg: Vec<f64>,
    power: f64,
}

impl SourceSet {
    /// Create a source set with unit power per source. Angles must be
    /// pairwise distinct and strictly inside (-90 deg, +90 deg).
    pub fn new(angles_deg: Vec<f64>) -> Result<Self> {
        Self::with_power(angles_deg, 1.0)
    }

    /// Create a source set with an explicit per-source power `sigma_s^2 > 0`.
    pub fn with_power(angles_deg: Vec<f64>, power: f64) -> Result<Self> {
        if angles_deg.is_empty() {
            return Err(Error::InvalidSources("need at least one source".into()));
        }
        for &a in &angles_deg {
            if !a.is_finite() || a.abs() >= 90.0 {
                return Err(Error::AngleOutOfRange(a));
            }
        }
        for i in 0..angles_deg.len() {
            for j in (i + 1)..angles_deg.len() {
                if angles_deg[i] == angles_deg[j] {
                    return Err(Error::InvalidSources(format!(
                        "duplicate source angle {} deg",
                        angles_deg[i]
                    )));
                }
            }
        }
        if !power.is_finite() || power <= 0.0 {
            return Err(Error::InvalidSources(format!(
                "source power must be finite and positive, got {power}"
            )));
        }
        Ok(Self { angles_deg, power })
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    /// Number of sources.
    pub fn len(&self) -> usize {
        self.angles_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one source
    }

    /// Per-source power `sigma_s^2`.
    pub fn power(&self) -> f64 {
        self.power
    }
}

/// A complete simulation scenario: geometry, sources, noise level, snapshot
/// count and the master RNG seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: UlaGeometry,
    pub sources: SourceSet,
    pub snr_db: f64,
    pub num_snapshots: usize,
    pub seed: u64,
}

impl Scenario {
    /// Validate cross-field constraints (`L < M`, snapshots >= 1, SNR finite
    /// or `+inf` for the noise-free case).
    pub fn new(
        geometry: UlaGeometry,
        sources: SourceSet,
        snr_db: f64,
        num_snapshots: usize,
        seed: u64,
    ) -> Result<Self> {
        if sources.len() >= geometry.num_elements() {
            return Err(Error::InvalidScenario(format!(
                "number of sources ({}) must be smaller than number of elements ({})",
                sources.len(),
                geometry.num_elements()
            )));
        }
        if num_snapshots == 0 {
            return Err(Error::InvalidScenario("need at least one snapshot".into()));
        }
        if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
            return Err(Error::InvalidScenario(format!(
                "snr_db must be finite or +inf, got {snr_db}"
            )));
        }
        Ok(Self {
            geometry,
            sources,
            snr_db,
            num_snapshots,
            seed,
        })
    }

    /// Noise power `sigma_n^2 = sigma_s^2 / 10^(snr_db/10)`; zero when the
    /// SNR is `+inf`.
    pub fn noise_variance(&self) -> f64 {
        if self.snr_db == f64::INFINITY {
            0.0
        } else {
            self.sources.power() / 10f64.powf(self.snr_db / 10.0)
        }
    }

    /// Copy of this scenario with a different seed (used per Monte-Carlo
    /// trial).
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut s = self.clone();
        s.seed = seed;
        s
    }
}

/// Complex baseband snapshot matrix, `M x S` (element x snapshot).
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    data: DMatrix<Complex64>,
}

impl SnapshotMatrix {
    /// Wrap a matrix of snapshots; every entry must be finite.
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::InvalidArgument(
                "snapshot matrix must be non-empty".into(),
            ));
        }
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "snapshot matrix contains non-finite entries".into(),
            ));
        }
        Ok(Self { data })
    }

    pub fn num_elements(&self) -> usize {
        self.data.nrows()
    }

    pub fn num_snapshots(&self) -> usize {
        self.data.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }
}

/// Hermitian spatial covariance matrix (`M x M`), positive semi-definite up
/// to rounding for any covariance produced by this crate.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    data: DMatrix<Complex64>,
}

impl CovarianceMatrix {
    /// Wrap a matrix, verifying it is square and Hermitian to within a
    /// `1e-12` relative tolerance (scaled by the largest entry magnitude).
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "covariance must be square and non-empty, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "covariance contains non-finite entries".into(),
            ));
        }
        let scale = data.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
        let n = data.nrows();
        for i in 0..n {
            for j in i..n {
                let diff = data[(i, j)] - data[(j, i)].conj();
                if diff.norm() > tol {
                    return Err(Error::NotHermitian);
                }
            }
        }
        Ok(Self { data })
    }

    /// Internal constructor for matrices that are Hermitian by construction.
    pub(crate) fn from_hermitian_unchecked(data: DMatrix<Complex64>) -> Self {
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Sum of the (real) diagonal.
    pub fn trace_re(&self) -> f64 {
        (0..self.dim()).map(|i| self.data[(i, i)].re).sum()
    }
}

/// Steering vector `a(theta)` for the given geometry. Element 0 is exactly
/// `1 + 0j`. Angles on or beyond endfire (`|theta| >= 90`) are rejected
/// because the mapping `u = (d/lambda) sin(theta)` degenerates there.
pub fn steering_vector(geometry: &UlaGeometry, angle_deg: f64) -> Result<DVector<Complex64>> {
    if !angle_deg.is_finite() || angle_deg.abs() >= 90.0 {
        return Err(Error::AngleOutOfRange(angle_deg));
    }
    let phase_step = -2.0 * std::f64::consts::PI * geometry.spacing() * angle_deg.to_radians().sin();
    Ok(DVector::from_fn(geometry.num_elements(), |k, _| {
        Complex64::from_polar(1.0, phase_step * k as f64)
    }))
}

/// Steering matrix `A = [a(theta_1) ... a(theta_L)]`, `M x L`, columns in
/// source order.
pub fn steering_matrix(geometry: &UlaGeometry, sources: &SourceSet) -> Result<DMatrix<Complex64>> {
    let m = geometry.num_elements();
    let l = sources.len();
    let mut a = DMatrix::<Complex64>::zeros(m, l);
    for (c, &angle) in sources.angles_deg().iter().enumerate() {
        a.set_column(c, &steering_vector(geometry, angle)?);
    }
    Ok(a)
}

/// Synthesize `S` snapshots `x_n = A s_n + n_n`.
///
/// Source amplitudes and noise are i.i.d. circular complex Gaussian with
/// powers `sigma_s^2` and `sigma_n^2`. The generator is a ChaCha8 stream
/// seeded from `scenario.seed`, drawn in a fixed order (per snapshot: the
/// source amplitudes, then the element noise), so the same scenario and seed
/// reproduce the same matrix bit for bit.
pub fn synthesize_snapshots(scenario: &Scenario) -> Result<SnapshotMatrix> {
    let m = scenario.geometry.num_elements();
    let l = scenario.sources.len();
    let s = scenario.num_snapshots;
    let a = steering_matrix(&scenario.geometry, &scenario.sources)?;
    let sig_scale = (scenario.sources.power() / 2.0).sqrt();
    let noise_scale = (scenario.noise_variance() / 2.0).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let mut draw = |scale: f64| -> Complex64 {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(scale * re, scale * im)
    };

    let mut x = DMatrix::<Complex64>::zeros(m, s);
    let mut amps = DVector::<Complex64>::zeros(l);
    for n in 0..s {
        for li in 0..l {
            amps[li] = draw(sig_scale);
        }
        let mut col = &a * &amps;
        for k in 0..m {
            col[k] += draw(noise_scale);
        }
        x.set_column(n, &col);
    }
    SnapshotMatrix::new(x)
}

/// Sample covariance `R = (1/S) X X^H`.
///
/// The accumulation runs on separate real/imaginary planes over the lower
/// triangle (the upper triangle is its mirror image), which vectorizes far
/// better than interleaved complex arithmetic; the result is Hermitian by
/// construction with an exactly real diagonal.
pub fn sample_covariance(snapshots: &SnapshotMatrix) -> CovarianceMatrix {
    let m = snapshots.num_elements();
    let s = snapshots.num_snapshots();
    let x = snapshots.as_matrix();

    let mut acc_re = vec![0.0f64; m * m];
    let mut acc_im = vec![0.0f64; m * m];
    let mut col_re = vec![0.0f64; m];
    let mut col_im = vec![0.0f64; m];
    for n in 0..s {
        let col = x.column(n);
        for k in 0..m {
            col_re[k] = col[k].re;
            col_im[k] = col[k].im;
        }
        for i in 0..m {
            let (xr, xi) = (col_re[i], col_im[i]);
            let row_re = &mut acc_re[i * m..i * m + i + 1];
            let row_im = &mut acc_im[i * m..i * m + i + 1];
            for j in 0..=i {
                // x_i * conj(x_j)
                row_re[j] += xr * col_re[j] + xi * col_im[j];
                row_im[j] += xi * col_re[j] - xr * col_im[j];
            }
        }
    }

    let inv_s = 1.0 / s as f64;
    let mut r = DMatrix::<Complex64>::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = Complex64::new(acc_re[i * m + j] * inv_s, acc_im[i * m + j] * inv_s);
            if i == j {
                r[(i, i)] = Complex64::new(v.re, 0.0);
            } else {
                r[(i, j)] = v;
                r[(j, i)] = v.conj();
            }
        }
    }
    CovarianceMatrix::from_hermitian_unchecked(r)
}

/// Exact (ensemble) covariance `R = sigma_s^2 A A^H + sigma_n^2 I` for
/// uncorrelated equal-power sources at the given SNR.
pub fn exact_covariance(
    geometry: &UlaGeometry,
    sources: &SourceSet,
    snr_db: f64,
) -> Result<CovarianceMatrix> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::InvalidScenario(format!(
            "snr_db must be finite or +inf, got {snr_db}"
        )));
    }
    let m = geometry.num_elements();
    let a = steering_matrix(geometry, sources)?;
    let sigma_s = sources.power();
    let sigma_n = if snr_db == f64::INFINITY {
        0.0
    } else {
        sigma_s / 10f64.powf(snr_db / 10.0)
    };
    let mut r = &a * a.adjoint() * Complex64::new(sigma_s, 0.0);
    for i in 0..m {
        r[(i, i)] = Complex64::new(r[(i, i)].re + sigma_n, 0.0);
    }
    // force exact Hermitian symmetry against rounding in the matrix product
    for i in 0..m {
        for j in 0..i {
            let v = (r[(i, j)] + r[(j, i)].conj()) * 0.5;
            r[(i, j)] = v;
            r[(j, i)] = v.conj();
        }
    }
    Ok(CovarianceMatrix::from_hermitian_unchecked(r))
}
