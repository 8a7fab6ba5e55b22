use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable selecting a tolerance preset (`strict` or `default`).
pub const TOL_PROFILE_ENV: &str = "IRRFORGE_TOL_PROFILE";

/// Centralized numerical thresholds.
///
/// `rank_tol` is relative to the largest singular value of whatever is being
/// ranked. `cluster_tol` is relative too: the effective clustering radius is
/// `cluster_tol * (1 + ||H||)`. `cert_tol` bounds residuals of algebraic
/// identities and `gap_min` is the smallest admissible relative spectral or
/// singular-value gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rank_tol: f64,
    pub cluster_tol: f64,
    pub cert_tol: f64,
    pub gap_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            cluster_tol: 1e-8,
            cert_tol: 1e-9,
            gap_min: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn new(rank_tol: f64, cluster_tol: f64, cert_tol: f64, gap_min: f64) -> Result<Self> {
        let t = Self {
            rank_tol,
            cluster_tol,
            cert_tol,
            gap_min,
        };
        t.validate()?;
        Ok(t)
    }

    /// Tighter thresholds, two orders of magnitude below the defaults.
    pub fn strict() -> Self {
        Self {
            rank_tol: 1e-12,
            cluster_tol: 1e-10,
            cert_tol: 1e-11,
            gap_min: 1e-5,
        }
    }

    /// Preset by name: `"default"` or `"strict"`.
    pub fn profile(name: &str) -> Result<Self> {
        match name.trim() {
            "" | "default" => Ok(Self::default()),
            "strict" => Ok(Self::strict()),
            other => Err(Error::InvalidTolerances(format!(
                "unknown tolerance profile {other:?}"
            ))),
        }
    }

    /// Reads [`TOL_PROFILE_ENV`]; unset means the default preset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_PROFILE_ENV) {
            Ok(v) => Self::profile(&v),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rank_tol", self.rank_tol),
            ("cluster_tol", self.cluster_tol),
            ("cert_tol", self.cert_tol),
            ("gap_min", self.gap_min),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidTolerances(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        if self.rank_tol >= 1.0 || self.cert_tol >= 1.0 {
            return Err(Error::InvalidTolerances(
                "rank_tol and cert_tol must be < 1".into(),
            ));
        }
        Ok(())
    }

    /// Clustering radius for a matrix of (operator) norm `scale`.
    pub fn cluster_radius(&self, scale: f64) -> f64 {
        self.cluster_tol * (1.0 + scale)
    }
}
