//! Photon-number distributions: the closed forms for circular superpositions
//! (plain and photon-added), the trigonometric intermediate form they are
//! derived from, the elliptic distribution, and the oracle route through a
//! Fock expansion. Also moments and the Fano factor.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{log_factorial, log_sum_exp, normalize_log_weights, LogWeight};
use crate::states::{
    circular_normalization, elliptic_normalization, gcs_normalization, radial_distance, CircularStateSpec,
    EllipticStateSpec, FockExpansion,
};

/// Largest probability mass allowed beyond `n_max`.
pub const CLOSURE_TOLERANCE: f64 = 1e-10;

/// Largest relative disagreement tolerated between an analytic normalization
/// constant and the numerically normalized weights.
pub const NORM_MISMATCH_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ClosedForm,
    Intermediate,
    Oracle,
}

/// The state a distribution was generated from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "geometry", rename_all = "snake_case")]
pub enum SpecRef {
    Circular(CircularStateSpec),
    Elliptic(EllipticStateSpec),
    Expansion,
}

/// Probabilities `P_n` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonNumberDistribution {
    probs: Vec<f64>,
    source: Source,
    spec: SpecRef,
}

impl PhotonNumberDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn spec(&self) -> SpecRef {
        self.spec
    }

    pub fn with_spec(mut self, spec: SpecRef) -> Self {
        self.spec = spec;
        self
    }

    /// `P_n`, zero beyond `n_max`.
    pub fn get(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Level with the largest probability; lower `n` wins ties.
    pub fn mode(&self) -> (usize, f64) {
        self.probs.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (n, p)| if p > best.1 { (n, p) } else { best },
        )
    }
}

/// Allowed levels: `n = SN + r`.
pub fn selection_allows(order: u32, photons_added: u32, n: usize) -> bool {
    let r = photons_added as usize;
    n >= r && (n - r).is_multiple_of(order as usize)
}

/// Unnormalized closed-form weight `|α|^{2(n-r)} n! / [(n-r)!]²` on the allowed
/// lattice, exact zero elsewhere. For `r = 0` this is `|α|^{2n}/n!`.
pub(crate) fn closed_log_weight(alpha: f64, order: u32, photons_added: u32, n: usize) -> LogWeight {
    if !selection_allows(order, photons_added, n) {
        return LogWeight::ZERO;
    }
    let m = n - photons_added as usize;
    let combinatorial = log_factorial(n as u64) - 2.0 * log_factorial(m as u64);
    if m == 0 {
        LogWeight::from_log(combinatorial)
    } else if alpha == 0.0 {
        LogWeight::ZERO
    } else {
        LogWeight::from_log(2.0 * m as f64 * alpha.ln() + combinatorial)
    }
}

/// Prefactor `ln(|𝒩|² N e^{-|α|²})` shared by both circular closed forms.
fn closed_log_prefactor(spec: &CircularStateSpec) -> Result<f64> {
    let norm = circular_normalization(spec)?;
    Ok(2.0 * norm.ln() + f64::from(spec.order).ln() - spec.alpha_mag * spec.alpha_mag)
}

fn check_captured(captured: f64, n_max: usize) -> Result<()> {
    if captured > 1.0 + NORM_MISMATCH_TOLERANCE {
        return Err(Error::NormMismatch {
            relative: captured - 1.0,
        });
    }
    let tail = 1.0 - captured;
    if tail > CLOSURE_TOLERANCE {
        return Err(Error::TailMassTooLarge {
            tail,
            tolerance: CLOSURE_TOLERANCE,
            n_max,
        });
    }
    Ok(())
}

fn circular_closed(spec: &CircularStateSpec, n_max: usize) -> Result<PhotonNumberDistribution> {
    spec.validate()?;
    let weights: Vec<LogWeight> = (0..=n_max)
        .map(|n| closed_log_weight(spec.alpha_mag, spec.order, spec.photons_added, n))
        .collect();
    let lse = log_sum_exp(&weights).ok_or(Error::TailMassTooLarge {
        tail: 1.0,
        tolerance: CLOSURE_TOLERANCE,
        n_max,
    })?;
    check_captured((closed_log_prefactor(spec)? + lse).exp(), n_max)?;
    Ok(PhotonNumberDistribution {
        probs: normalize_log_weights(&weights)?,
        source: Source::ClosedForm,
        spec: SpecRef::Circular(*spec),
    })
}

/// `P_n = |𝒩|² N e^{-|α|²} |α|^{2n}/n!` for `n = SN`, exactly zero otherwise.
///
/// Weights are built in log domain and normalized by log-sum-exp; the analytic
/// normalization constant is used to measure the mass lost above `n_max`.
pub fn pnd_gcs_closed(spec: &CircularStateSpec, n_max: usize) -> Result<PhotonNumberDistribution> {
    if spec.photons_added != 0 {
        return Err(Error::InvalidSpec("GCS distribution needs r = 0".into()));
    }
    circular_closed(spec, n_max)
}

/// `P_n^r = |𝒩_pa|² N e^{-|α|²} |α|^{2(n-r)} n!/[(n-r)!]²` for `n = SN + r`,
/// exactly zero otherwise.
pub fn pnd_gpacs_closed(spec: &CircularStateSpec, n_max: usize) -> Result<PhotonNumberDistribution> {
    if spec.photons_added == 0 {
        return Err(Error::InvalidSpec("GPACS distribution needs r >= 1".into()));
    }
    circular_closed(spec, n_max)
}

/// Closed form for either circular family.
pub fn pnd_closed(spec: &CircularStateSpec, n_max: usize) -> Result<PhotonNumberDistribution> {
    circular_closed(spec, n_max)
}

/// `N + 2 Σ_{m=1}^{N-1} (N-m) cos(2πnm/N)`, i.e. `Σ_{j1,j2} e^{i2πn(j1-j2)/N}`.
/// Equals `N²` when `N | n` and vanishes otherwise.
pub fn interference_bracket(n: usize, order: u32) -> f64 {
    let big_n = order as u64;
    let n = n as u64 % big_n;
    let mut acc = big_n as f64;
    for m in 1..big_n {
        let reduced = (n * m) % big_n;
        let angle = 2.0 * PI * reduced as f64 / big_n as f64;
        acc += 2.0 * (big_n - m) as f64 * angle.cos();
    }
    acc
}

/// `P_n = (|𝒩|²/N) e^{-|α|²} |α|^{2n}/n! × [N + 2 Σ (N-m) cos(2πnm/N)]`,
/// evaluated term by term for every `n` without invoking the selection rule.
pub fn pnd_gcs_intermediate(spec: &CircularStateSpec, n_max: usize) -> Result<PhotonNumberDistribution> {
    if spec.photons_added != 0 {
        return Err(Error::InvalidSpec("GCS distribution needs r = 0".into()));
    }
    let norm = gcs_normalization(spec)?;
    let alpha = spec.alpha_mag;
    let log_prefactor = 2.0 * norm.ln() - f64::from(spec.order).ln() - alpha * alpha;
    let probs: Vec<f64> = (0..=n_max)
        .map(|n| {
            let poisson = if n == 0 {
                0.0
            } else if alpha == 0.0 {
                return 0.0;
            } else {
                2.0 * n as f64 * alpha.ln() - log_factorial(n as u64)
            };
            let bracket = interference_bracket(n, spec.order).max(0.0);
            (log_prefactor + poisson).exp() * bracket
        })
        .collect();
    check_captured(probs.iter().sum(), n_max)?;
    Ok(PhotonNumberDistribution {
        probs,
        source: Source::Intermediate,
        spec: SpecRef::Circular(*spec),
    })
}

/// Elliptic `P_n` for `n = 0..=n_hi` without the tail check.
///
/// With `m = n - r` and radial distances `ρ_j`:
/// `P_n = (|𝒩_e|²/N) n!/(m!)² Σ_{j,k} e^{-(ρ_j²+ρ_k²)/2} (ρ_j ρ_k)^m cos(2πm(j-k)/N)`.
/// For `r = 0` the factorial ratio is `1/n!`.
pub fn elliptic_level_probabilities(spec: &EllipticStateSpec, n_hi: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    let norm = elliptic_normalization(spec)?;
    let order = spec.order as usize;
    let r = spec.photons_added as usize;
    let rho: Vec<f64> = (1..=spec.order).map(|j| radial_distance(j, spec)).collect();
    let log_rho: Vec<f64> = rho.iter().map(|x| x.ln()).collect();
    let cos_table: Vec<f64> = (0..order).map(|k| (2.0 * PI * k as f64 / order as f64).cos()).collect();
    let log_prefactor = 2.0 * norm.ln() - (order as f64).ln();

    let mut scaled = vec![0.0; order];
    let probs = (0..=n_hi)
        .map(|n| {
            if n < r {
                return 0.0;
            }
            let m = n - r;
            let exps: Vec<f64> = rho
                .iter()
                .zip(&log_rho)
                .map(|(p, lp)| -0.5 * p * p + m as f64 * lp)
                .collect();
            let peak = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for (w, t) in scaled.iter_mut().zip(&exps) {
                *w = (t - peak).exp();
            }
            let step = m % order;
            let mut sum = 0.0;
            for (j, wj) in scaled.iter().enumerate() {
                for (k, wk) in scaled.iter().enumerate() {
                    let d = (j + order - k) % order;
                    sum += wj * wk * cos_table[(step * d) % order];
                }
            }
            if sum <= 0.0 {
                return 0.0;
            }
            let combinatorial = log_factorial(n as u64) - 2.0 * log_factorial(m as u64);
            (log_prefactor + 2.0 * peak + combinatorial + sum.ln()).exp()
        })
        .collect();
    Ok(probs)
}

/// Photon-number distribution of the elliptic superposition as the modulus
/// squared of its number-basis amplitude, written as a real double sum over
/// all constituent pairs. Reduces to the circular closed form when `a = b`.
pub fn pnd_elliptic(spec: &EllipticStateSpec, n_max: usize) -> Result<PhotonNumberDistribution> {
    let probs = elliptic_level_probabilities(spec, n_max)?;
    check_captured(probs.iter().sum(), n_max)?;
    Ok(PhotonNumberDistribution {
        probs,
        source: Source::ClosedForm,
        spec: SpecRef::Elliptic(*spec),
    })
}

/// `P_n = |c_n|²`. An expansion not flagged as normalized is normalized first.
pub fn pnd_from_expansion(expansion: &FockExpansion) -> PhotonNumberDistribution {
    let scale = if expansion.is_normalized() {
        1.0
    } else {
        expansion.norm_sqr().recip()
    };
    PhotonNumberDistribution {
        probs: expansion.coefficients().iter().map(|c| c.norm_sqr() * scale).collect(),
        source: Source::Oracle,
        spec: SpecRef::Expansion,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub fano: f64,
}

/// Mean, variance and Fano factor `⟨(Δn)²⟩/⟨n⟩`.
pub fn moments(dist: &PhotonNumberDistribution) -> Result<Moments> {
    let mean: f64 = dist.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    if mean < 1e-14 {
        return Err(Error::ZeroMean);
    }
    // two-pass form stays nonnegative
    let variance: f64 = dist
        .probs
        .iter()
        .enumerate()
        .map(|(n, p)| (n as f64 - mean).powi(2) * p)
        .sum();
    Ok(Moments {
        mean,
        variance,
        fano: variance / mean,
    })
}
