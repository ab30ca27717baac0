//! State specifications, normalization constants and the brute-force
//! Fock-basis expansion used as the reference for every closed form.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{laguerre, log_factorial};

/// Relative tolerance on the truncated tail of a Fock expansion.
pub const ORACLE_TAIL_TOLERANCE: f64 = 1e-12;

/// `N` coherent states of common amplitude `|α|` at equal angles on a circle,
/// optionally with `r` photons added. `photons_added == 0` is a plain GCS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularStateSpec {
    pub alpha_mag: f64,
    pub order: u32,
    pub photons_added: u32,
}

impl CircularStateSpec {
    pub fn new(alpha_mag: f64, order: u32, photons_added: u32) -> Result<Self> {
        let spec = CircularStateSpec {
            alpha_mag,
            order,
            photons_added,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gcs(alpha_mag: f64, order: u32) -> Result<Self> {
        Self::new(alpha_mag, order, 0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidSpec("order N must be at least 1".into()));
        }
        if !(self.alpha_mag.is_finite() && self.alpha_mag >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "|alpha| must be finite and nonnegative, got {}",
                self.alpha_mag
            )));
        }
        Ok(())
    }

    /// Same `N` and `r` at a different amplitude.
    pub fn with_alpha(&self, alpha_mag: f64) -> Self {
        CircularStateSpec { alpha_mag, ..*self }
    }

    pub fn is_photon_added(&self) -> bool {
        self.photons_added > 0
    }
}

/// `N` coherent states at equal angles whose distances from the origin follow
/// an ellipse with semi-axes `a >= b > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticStateSpec {
    pub semi_major: f64,
    pub semi_minor: f64,
    pub order: u32,
    pub photons_added: u32,
}

impl EllipticStateSpec {
    pub fn new(semi_major: f64, semi_minor: f64, order: u32, photons_added: u32) -> Result<Self> {
        let spec = EllipticStateSpec {
            semi_major,
            semi_minor,
            order,
            photons_added,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidSpec("order N must be at least 1".into()));
        }
        let (a, b) = (self.semi_major, self.semi_minor);
        if !(a.is_finite() && b.is_finite() && b > 0.0 && a >= b) {
            return Err(Error::InvalidSpec(format!(
                "ellipse needs a >= b > 0, got a = {a}, b = {b}"
            )));
        }
        Ok(())
    }

    /// Amplitude of the circle enclosing the same area, `√(ab)`.
    pub fn equal_area_amplitude(&self) -> f64 {
        (self.semi_major * self.semi_minor).sqrt()
    }

    /// Ellipse with the same aspect ratio rescaled to the given equal-area amplitude.
    pub fn scaled_to_amplitude(&self, amplitude: f64) -> Self {
        let s = amplitude / self.equal_area_amplitude();
        EllipticStateSpec {
            semi_major: self.semi_major * s,
            semi_minor: self.semi_minor * s,
            ..*self
        }
    }

    /// Ellipse of the given aspect ratio `a/b` with equal-area amplitude `amplitude`.
    pub fn from_aspect(aspect: f64, amplitude: f64, order: u32, photons_added: u32) -> Result<Self> {
        if !(aspect.is_finite() && aspect >= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "aspect ratio a/b must be >= 1, got {aspect}"
            )));
        }
        let root = aspect.sqrt();
        Self::new(amplitude * root, amplitude / root, order, photons_added)
    }

    pub fn as_circular(&self) -> Option<CircularStateSpec> {
        (self.semi_major == self.semi_minor).then_some(CircularStateSpec {
            alpha_mag: self.semi_major,
            order: self.order,
            photons_added: self.photons_added,
        })
    }
}

/// Distance from the origin of the `j`-th constituent on the ellipse,
/// `[cos²θ_j/a² + sin²θ_j/b²]^{-1/2}` with `θ_j = 2πj/N`.
pub fn radial_distance(j: u32, spec: &EllipticStateSpec) -> f64 {
    debug_assert!(j >= 1 && j <= spec.order);
    let theta = 2.0 * PI * f64::from(j % spec.order) / f64::from(spec.order);
    let (s, c) = theta.sin_cos();
    let (a, b) = (spec.semi_major, spec.semi_minor);
    (c * c / (a * a) + s * s / (b * b)).powf(-0.5)
}

/// An equal-weight superposition of coherent states, optionally photon-added.
pub trait Superposition {
    fn order(&self) -> u32;
    fn photons_added(&self) -> u32;
    /// Complex amplitudes of the constituents, `j = 1..=N`.
    fn constituents(&self) -> Vec<Complex64>;

    fn max_amplitude(&self) -> f64 {
        self.constituents().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn circle_phase(j: u32, order: u32) -> Complex64 {
    let theta = 2.0 * PI * f64::from(j % order) / f64::from(order);
    Complex64::from_polar(1.0, theta)
}

impl Superposition for CircularStateSpec {
    fn order(&self) -> u32 {
        self.order
    }

    fn photons_added(&self) -> u32 {
        self.photons_added
    }

    fn constituents(&self) -> Vec<Complex64> {
        (1..=self.order)
            .map(|j| self.alpha_mag * circle_phase(j, self.order))
            .collect()
    }

    fn max_amplitude(&self) -> f64 {
        self.alpha_mag
    }
}

impl Superposition for EllipticStateSpec {
    fn order(&self) -> u32 {
        self.order
    }

    fn photons_added(&self) -> u32 {
        self.photons_added
    }

    fn constituents(&self) -> Vec<Complex64> {
        (1..=self.order)
            .map(|j| radial_distance(j, self) * circle_phase(j, self.order))
            .collect()
    }
}

/// `ceil(μ + 12√μ + N + r + 25)` with `μ` the squared largest amplitude.
pub fn default_n_max<S: Superposition + ?Sized>(spec: &S) -> usize {
    let mu = spec.max_amplitude().powi(2);
    (mu + 12.0 * mu.sqrt() + f64::from(spec.order()) + f64::from(spec.photons_added()) + 25.0).ceil() as usize
}

/// `[ (r!/N) Σ_{j,k} L_r(-β_j^* β_k) ⟨β_j|β_k⟩ ]^{-1/2}` over the constituents `β_j`.
/// For `r = 0` this is `√N [Σ ⟨β_j|β_k⟩]^{-1/2}`.
fn superposition_normalization(amps: &[Complex64], r: u32, residue_tol: f64) -> Result<f64> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for bj in amps {
        for bk in amps {
            let cross = bj.conj() * bk;
            let overlap = (cross - 0.5 * (bj.norm_sqr() + bk.norm_sqr())).exp();
            let term = laguerre(r, -cross) * overlap;
            scale += term.norm();
            sum += term;
        }
    }
    if sum.im.abs() > residue_tol * scale.max(1.0) {
        return Err(Error::ImaginaryResidue { residue: sum.im, scale });
    }
    let n = amps.len() as f64;
    let reduced = (log_factorial(u64::from(r)).exp() / n) * sum.re;
    if reduced.is_nan() || reduced <= 0.0 {
        return Err(Error::NonPositiveNormSum { sum: reduced });
    }
    Ok(reduced.powf(-0.5))
}

/// `𝒩 = √N [Σ_{j1,j2} exp(α_{j1} α_{j2}^* - |α|²)]^{-1/2}` for a GCS.
pub fn gcs_normalization(spec: &CircularStateSpec) -> Result<f64> {
    spec.validate()?;
    if spec.photons_added != 0 {
        return Err(Error::InvalidSpec("GCS normalization needs r = 0".into()));
    }
    superposition_normalization(&spec.constituents(), 0, 1e-12)
}

/// `|𝒩_pa| = [ (r!/N) Σ_{j,k} L_r(-α_j α_k^*) exp(-|α|² + α_j α_k^*) ]^{-1/2}`.
pub fn gpacs_normalization(spec: &CircularStateSpec) -> Result<f64> {
    spec.validate()?;
    if spec.photons_added == 0 {
        return Err(Error::InvalidSpec("GPACS normalization needs r >= 1".into()));
    }
    superposition_normalization(&spec.constituents(), spec.photons_added, 1e-10)
}

/// Normalization of either circular family, dispatching on `r`.
pub fn circular_normalization(spec: &CircularStateSpec) -> Result<f64> {
    if spec.is_photon_added() {
        gpacs_normalization(spec)
    } else {
        gcs_normalization(spec)
    }
}

/// `𝒩_e` of the elliptic superposition (photon-added when `r > 0`).
pub fn elliptic_normalization(spec: &EllipticStateSpec) -> Result<f64> {
    spec.validate()?;
    superposition_normalization(&spec.constituents(), spec.photons_added, 1e-10)
}

/// Number-basis coefficients `c_n`, `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockExpansion {
    coefficients: Vec<Complex64>,
    normalized: bool,
}

impl FockExpansion {
    pub fn new(coefficients: Vec<Complex64>, normalized: bool) -> Self {
        assert!(!coefficients.is_empty(), "expansion needs at least |0>");
        FockExpansion {
            coefficients,
            normalized,
        }
    }

    /// The number state `|k⟩` truncated at `n_max`.
    pub fn basis(k: usize, n_max: usize) -> Self {
        assert!(k <= n_max);
        let mut coefficients = vec![Complex64::new(0.0, 0.0); n_max + 1];
        coefficients[k] = Complex64::new(1.0, 0.0);
        FockExpansion {
            coefficients,
            normalized: true,
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn n_max(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn normalize(mut self) -> Self {
        let norm = self.norm_sqr().sqrt();
        for c in &mut self.coefficients {
            *c /= norm;
        }
        self.normalized = true;
        self
    }
}

/// Coefficients of `N^{-1/2} (a†)^r Σ_j |β_j⟩` for `n = 0..=n_hi`, not normalized.
fn raw_expansion(amps: &[Complex64], r: u32, n_hi: usize) -> Vec<Complex64> {
    let r = r as usize;
    let scale = (amps.len() as f64).sqrt().recip();
    let mut base = vec![Complex64::new(0.0, 0.0); n_hi + 1];
    for beta in amps {
        let rho = beta.norm();
        if rho == 0.0 {
            base[0] += scale;
            continue;
        }
        let phase = beta / rho;
        let mut rot = Complex64::new(1.0, 0.0);
        for (n, slot) in base.iter_mut().enumerate() {
            // e^{-ρ²/2} ρ^n / √(n!)
            let log_mag = -0.5 * rho * rho + n as f64 * rho.ln() - 0.5 * log_factorial(n as u64);
            *slot += scale * log_mag.exp() * rot;
            rot *= phase;
        }
    }
    if r == 0 {
        return base;
    }
    let mut shifted = vec![Complex64::new(0.0, 0.0); n_hi + 1];
    if r > n_hi {
        return shifted;
    }
    for n in 0..=n_hi.saturating_sub(r) {
        let gain = (0.5 * (log_factorial((n + r) as u64) - log_factorial(n as u64))).exp();
        shifted[n + r] = base[n] * gain;
    }
    shifted
}

fn expansion_with_tail<S: Superposition + ?Sized>(spec: &S, n_max: usize) -> Result<(Vec<Complex64>, f64)> {
    let n_ext = 2 * n_max + 64;
    let mut full = raw_expansion(&spec.constituents(), spec.photons_added(), n_ext);
    let total: f64 = full.iter().map(Complex64::norm_sqr).sum();
    let tail: f64 = full[n_max + 1..].iter().map(Complex64::norm_sqr).sum();
    let tail = if total > 0.0 { tail / total } else { 0.0 };
    if tail > ORACLE_TAIL_TOLERANCE {
        return Err(Error::TailMassTooLarge {
            tail,
            tolerance: ORACLE_TAIL_TOLERANCE,
            n_max,
        });
    }
    full.truncate(n_max + 1);
    Ok((full, tail))
}

/// Brute-force number-basis expansion: each constituent coherent state is
/// expanded directly, the constituents are summed with their phases, `(a†)^r`
/// is applied by index shift, and the result is normalized numerically.
pub fn fock_expansion<S: Superposition + ?Sized>(spec: &S, n_max: usize) -> Result<FockExpansion> {
    let (coefficients, _) = expansion_with_tail(spec, n_max)?;
    let expansion = FockExpansion::new(coefficients, false);
    if expansion.norm_sqr() == 0.0 {
        return Err(Error::NonPositiveNormSum { sum: 0.0 });
    }
    Ok(expansion.normalize())
}

/// The same expansion before normalization, i.e. of `N^{-1/2} (a†)^r Σ_j |β_j⟩`.
/// Its norm is the reciprocal of the analytic normalization constant.
pub fn unnormalized_expansion<S: Superposition + ?Sized>(spec: &S, n_max: usize) -> Result<FockExpansion> {
    let (coefficients, _) = expansion_with_tail(spec, n_max)?;
    Ok(FockExpansion::new(coefficients, false))
}
