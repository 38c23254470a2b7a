//! Estimator identifiers.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// The seven direction-of-arrival estimators implemented by this crate.
///
/// The first four spectrum-based ("scan") methods sweep a steering vector
/// over a dense angular grid and pick peaks; the parametric methods solve
/// for the angles algebraically from the signal or noise subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Delay-and-sum (conventional) beamformer spectrum.
    Ds,
    /// Minimum-variance distortionless-response (Capon) spectrum.
    Mvdr,
    /// MUSIC noise-subspace pseudo-spectrum.
    Music,
    /// Least-squares ESPRIT on maximally overlapping subarrays.
    Esprit,
    /// Unitary (real-valued) ESPRIT with forward-backward averaging.
    UnitaryEsprit,
    /// Root-MUSIC polynomial rooting.
    RootMusic,
    /// Fourier-transform beamforming across the element axis.
    FtDoa,
}

impl Method {
    /// All methods, in canonical presentation order.
    pub const ALL: [Method; 7] = [
        Method::Ds,
        Method::Mvdr,
        Method::Music,
        Method::Esprit,
        Method::UnitaryEsprit,
        Method::RootMusic,
        Method::FtDoa,
    ];

    /// Canonical lowercase tag used in CSV output and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            Method::Ds => "ds",
            Method::Mvdr => "mvdr",
            Method::Music => "music",
            Method::Esprit => "esprit",
            Method::UnitaryEsprit => "u-esprit",
            Method::RootMusic => "root-music",
            Method::FtDoa => "ft-doa",
        }
    }

    /// True for the methods that produce an angular spectrum which is then
    /// searched for peaks (DS, MVDR, MUSIC, FT).
    pub fn is_scan(self) -> bool {
        matches!(
            self,
            Method::Ds | Method::Mvdr | Method::Music | Method::FtDoa
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        match norm.as_str() {
            "ds" | "delayandsum" | "beamformer" => Ok(Method::Ds),
            "mvdr" | "capon" => Ok(Method::Mvdr),
            "music" => Ok(Method::Music),
            "esprit" => Ok(Method::Esprit),
            "uesprit" | "unitaryesprit" => Ok(Method::UnitaryEsprit),
            "rootmusic" | "rmusic" => Ok(Method::RootMusic),
            "ftdoa" | "ft" | "fft" => Ok(Method::FtDoa),
            _ => Err(Error::InvalidArgument(format!("unknown method '{s}'"))),
        }
    }
}
