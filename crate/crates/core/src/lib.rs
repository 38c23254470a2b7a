//! Direction-of-arrival estimation toolkit for uniform linear arrays.
//!
//! The crate implements seven narrowband DoA estimators over a common ULA
//! signal model, together with the supporting linear algebra, accuracy and
//! complexity metrics, and a deterministic Monte-Carlo benchmark harness:
//!
//! | tag          | estimator                         | input      | kind       |
//! |--------------|-----------------------------------|------------|------------|
//! | `ds`         | delay-and-sum beamformer          | covariance | scan       |
//! | `mvdr`       | minimum-variance (Capon)          | covariance | scan       |
//! | `music`      | MUSIC pseudo-spectrum             | subspace   | scan       |
//! | `esprit`     | least-squares ESPRIT              | covariance | parametric |
//! | `u-esprit`   | unitary ESPRIT (forward-backward) | snapshots  | parametric |
//! | `root-music` | root-MUSIC polynomial rooting     | subspace   | parametric |
//! | `ft-doa`     | FFT across the element axis       | snapshots  | scan       |
//!
//! The usual pipeline is: build a [`Scenario`], synthesize snapshots or an
//! exact covariance, run one estimator (or the [`harness`] over many trials),
//! and evaluate [`metrics`] on the results.
//!
//! ## Example
//!
//! ```
//! use doakit_core::{
//!     esprit, sample_covariance, synthesize_snapshots, Scenario, SourceSet, UlaGeometry,
//! };
//!
//! let geometry = UlaGeometry::half_wavelength(16).unwrap();
//! let sources = SourceSet::new(vec![-12.0, 23.0]).unwrap();
//! let scenario = Scenario::new(geometry, sources, 10.0, 200, 42).unwrap();
//!
//! let snapshots = synthesize_snapshots(&scenario).unwrap();
//! let covariance = sample_covariance(&snapshots);
//! let estimate = esprit(&covariance, &scenario.geometry, 2).unwrap();
//!
//! assert_eq!(estimate.angles_deg().len(), 2);
//! assert!((estimate.angles_deg()[0] + 12.0).abs() < 0.5);
//! assert!((estimate.angles_deg()[1] - 23.0).abs() < 0.5);
//! ```

pub mod array;
pub mod config;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod method;
pub mod metrics;
pub mod parametric;
pub mod spectral;

pub use array::{
    exact_covariance, sample_covariance, steering_matrix, steering_vector, synthesize_snapshots,
    CovarianceMatrix, Scenario, SnapshotMatrix, SourceSet, UlaGeometry,
};
pub use error::{Error, Result};
pub use linalg::{
    dft, forward_backward_average, hermitian_eig, invert_hermitian, least_squares,
    pi_real_transform, polynomial_roots, selection_matrices, SubspaceDecomposition,
};
pub use method::Method;
pub use metrics::{
    discrimination_3db, discrimination_std, fit_serial_fraction, flops, mse, speedup,
    ComplexityParams, SpeedupModel,
};
pub use parametric::{esprit, root_music, unitary_esprit};
pub use spectral::{
    ds_spectrum, find_peaks, ft_spectrum, music_spectrum, mvdr_spectrum, AngularSpectrum,
    DoaEstimate, ScanGrid,
};
