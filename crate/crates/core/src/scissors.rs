//! Quantum-scissor planning on top of the closed-form distributions: amplitude
//! windows that truncate a superposition to one Fock state, the reachability
//! table over `(n, N, r)`, equal two-level superpositions and their fidelity.

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{log_factorial, log_sum_exp, LogWeight};
use crate::pnd::{closed_log_weight, elliptic_level_probabilities, pnd_closed, selection_allows};
use crate::states::{default_n_max, fock_expansion, CircularStateSpec, EllipticStateSpec};

/// Probability accepted as "the state is `|n⟩`".
pub const DEFAULT_THRESHOLD: f64 = 0.99;
/// Coarse amplitude grid used before bisection.
pub const DEFAULT_GRID_STEP: f64 = 0.01;
/// Final width of the bisection bracket around each window endpoint.
pub const BISECTION_TOLERANCE: f64 = 1e-4;
/// Aspect ratio `a/b` of the comparison ellipse (`a = 5`, `b = 3.2`).
pub const DEFAULT_ELLIPSE_ASPECT: f64 = 5.0 / 3.2;

/// `√n + 8`: the Poisson envelope of `|n⟩` peaks near `|α| = √n`.
pub fn default_alpha_max(target_n: usize) -> f64 {
    (target_n as f64).sqrt() + 8.0
}

/// Closed-form `P_n` at amplitude `alpha` for a circular state of order `N`
/// with `r` added photons, normalized over the allowed lattice only.
pub fn level_probability(order: u32, photons_added: u32, alpha: f64, n: usize) -> f64 {
    if !selection_allows(order, photons_added, n) {
        return 0.0;
    }
    let spec = CircularStateSpec {
        alpha_mag: alpha,
        order,
        photons_added,
    };
    let cutoff = default_n_max(&spec).max(n);
    let weights: Vec<LogWeight> = (photons_added as usize..=cutoff)
        .step_by(order as usize)
        .map(|m| closed_log_weight(alpha, order, photons_added, m))
        .collect();
    let target = closed_log_weight(alpha, order, photons_added, n);
    match (target.log_magnitude(), log_sum_exp(&weights)) {
        (Some(t), Some(total)) => (t - total).exp(),
        _ => 0.0,
    }
}

/// An amplitude interval over which `P_target >= threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParameterWindow {
    pub target_n: usize,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub threshold: f64,
    /// Order and photon number of the state; its amplitude is not used.
    pub spec: CircularStateSpec,
}

impl ParameterWindow {
    pub fn width(&self) -> f64 {
        self.alpha_hi - self.alpha_lo
    }

    pub fn contains(&self, alpha: f64) -> bool {
        alpha >= self.alpha_lo && alpha <= self.alpha_hi
    }
}

/// Search settings for [`fock_window`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSearch {
    pub threshold: f64,
    /// Upper end of the scan; `None` means [`default_alpha_max`].
    pub alpha_max: Option<f64>,
    pub grid_step: f64,
}

impl Default for WindowSearch {
    fn default() -> Self {
        WindowSearch {
            threshold: DEFAULT_THRESHOLD,
            alpha_max: None,
            grid_step: DEFAULT_GRID_STEP,
        }
    }
}

impl WindowSearch {
    pub fn with_threshold(threshold: f64) -> Self {
        WindowSearch {
            threshold,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.5 && self.threshold < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold must lie in (0.5, 1), got {}",
                self.threshold
            )));
        }
        if !(self.grid_step > 0.0 && self.grid_step.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid step must be positive, got {}",
                self.grid_step
            )));
        }
        if let Some(max) = self.alpha_max {
            if !(max > 0.0 && max.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "alpha-max must be positive, got {max}"
                )));
            }
        }
        Ok(())
    }

    /// Scans `|α|` on the grid, keeps the widest run of qualifying points and
    /// bisects both of its edges. `None` when no grid point qualifies.
    pub fn find(&self, spec: &CircularStateSpec, target_n: usize) -> Result<Option<ParameterWindow>> {
        self.validate()?;
        spec.validate()?;
        let (order, r) = (spec.order, spec.photons_added);
        if !selection_allows(order, r, target_n) {
            return Ok(None);
        }
        let threshold = self.threshold;
        let passes = |alpha: f64| level_probability(order, r, alpha, target_n) >= threshold;

        let alpha_max = self.alpha_max.unwrap_or_else(|| default_alpha_max(target_n));
        let steps = (alpha_max / self.grid_step + 1e-9).floor() as usize;
        let grid = |i: usize| i as f64 * self.grid_step;
        let flags: Vec<bool> = (0..=steps).map(|i| passes(grid(i))).collect();

        let mut runs: Vec<(usize, usize)> = Vec::new();
        let mut i = 0;
        while i < flags.len() {
            if flags[i] {
                let start = i;
                while i + 1 < flags.len() && flags[i + 1] {
                    i += 1;
                }
                runs.push((start, i));
            }
            i += 1;
        }
        if runs.is_empty() {
            return Ok(None);
        }
        if runs.len() > 1 {
            warn!(
                "{} disjoint windows for |{}> at N = {}, r = {}; keeping the widest",
                runs.len(),
                target_n,
                order,
                r
            );
        }
        // widest run; earliest on ties
        let (start, end) = runs.iter().copied().fold(
            runs[0],
            |best, run| if run.1 - run.0 > best.1 - best.0 { run } else { best },
        );

        let alpha_lo = if start == 0 {
            0.0
        } else {
            bisect_edge(&passes, grid(start - 1), grid(start))
        };
        let alpha_hi = if end == steps {
            grid(end)
        } else {
            bisect_edge(&passes, grid(end + 1), grid(end))
        };
        Ok(Some(ParameterWindow {
            target_n,
            alpha_lo,
            alpha_hi,
            threshold,
            spec: *spec,
        }))
    }
}

/// Shrinks a bracket with `passes(inside)` and `!passes(outside)` and returns
/// the qualifying end.
fn bisect_edge(passes: &impl Fn(f64) -> bool, mut outside: f64, mut inside: f64) -> f64 {
    while (inside - outside).abs() > BISECTION_TOLERANCE {
        let mid = 0.5 * (inside + outside);
        if passes(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Window of `|α|` producing `|target_n⟩` with probability at least `threshold`.
pub fn fock_window(
    spec: &CircularStateSpec,
    target_n: usize,
    threshold: f64,
    alpha_max: Option<f64>,
) -> Result<Option<ParameterWindow>> {
    WindowSearch {
        threshold,
        alpha_max,
        grid_step: DEFAULT_GRID_STEP,
    }
    .find(spec, target_n)
}

/// Which circular states produce `|fock_n⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachabilityRecord {
    pub fock_n: usize,
    /// Orders `N` of plain superpositions (`r = 0`) with a window.
    pub gcs_orders: Vec<u32>,
    /// `(N, r)` pairs with `r >= 1` with a window.
    pub gpacs_combos: Vec<(u32, u32)>,
    /// Whether some amplitude-scaled ellipse reaches the threshold. The
    /// small-amplitude collapse onto `|r⟩` is geometry independent and is not
    /// counted.
    pub elliptic_reachable: bool,
    /// Largest elliptic `P_{fock_n}` seen in the sweep, collapse excluded.
    pub elliptic_max_probability: f64,
}

/// Bounds and settings for [`reachability_table_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReachabilityQuery {
    pub n_fock_max: usize,
    pub order_max: u32,
    pub r_max: u32,
    pub search: WindowSearch,
    /// `a/b` of the swept ellipse; `None` skips the elliptic column.
    pub ellipse_aspect: Option<f64>,
}

impl ReachabilityQuery {
    pub fn new(n_fock_max: usize, order_max: u32, r_max: u32, threshold: f64) -> Self {
        ReachabilityQuery {
            n_fock_max,
            order_max,
            r_max,
            search: WindowSearch::with_threshold(threshold),
            ellipse_aspect: Some(DEFAULT_ELLIPSE_ASPECT),
        }
    }
}

/// Reachability of `|0⟩ .. |n_fock_max⟩` for `N <= order_max`, `r <= r_max`.
pub fn reachability_table(
    n_fock_max: usize,
    order_max: u32,
    r_max: u32,
    threshold: f64,
) -> Result<Vec<ReachabilityRecord>> {
    reachability_table_with(&ReachabilityQuery::new(n_fock_max, order_max, r_max, threshold))
}

pub fn reachability_table_with(query: &ReachabilityQuery) -> Result<Vec<ReachabilityRecord>> {
    query.search.validate()?;
    if query.order_max == 0 {
        return Err(Error::InvalidParameter("N-max must be at least 1".into()));
    }
    let mut jobs: Vec<(usize, u32, u32)> = Vec::new();
    for fock_n in 0..=query.n_fock_max {
        for r in 0..=query.r_max.min(fock_n as u32) {
            for order in 1..=query.order_max {
                if selection_allows(order, r, fock_n) {
                    jobs.push((fock_n, order, r));
                }
            }
        }
    }
    let hits: Vec<(usize, u32, u32)> = jobs
        .par_iter()
        .map(|&(fock_n, order, r)| {
            let spec = CircularStateSpec::new(0.0, order, r)?;
            Ok(query.search.find(&spec, fock_n)?.map(|_| (fock_n, order, r)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let elliptic = match query.ellipse_aspect {
        Some(aspect) => elliptic_reachability(query, aspect)?,
        None => vec![0.0; query.n_fock_max + 1],
    };

    Ok((0..=query.n_fock_max)
        .map(|fock_n| {
            let mut gcs_orders: Vec<u32> = hits.iter().filter(|h| h.0 == fock_n && h.2 == 0).map(|h| h.1).collect();
            gcs_orders.sort_unstable();
            let mut gpacs_combos: Vec<(u32, u32)> = hits
                .iter()
                .filter(|h| h.0 == fock_n && h.2 > 0)
                .map(|h| (h.1, h.2))
                .collect();
            gpacs_combos.sort_unstable();
            ReachabilityRecord {
                fock_n,
                gcs_orders,
                gpacs_combos,
                elliptic_reachable: elliptic[fock_n] >= query.search.threshold,
                elliptic_max_probability: elliptic[fock_n],
            }
        })
        .collect())
}

/// Per-level maximum of `P_n` over amplitude-scaled ellipses, all `N` and `r`
/// in range, skipping `n = r`.
fn elliptic_reachability(query: &ReachabilityQuery, aspect: f64) -> Result<Vec<f64>> {
    let amp_max = default_alpha_max(query.n_fock_max);
    let combos: Vec<(u32, u32)> = (1..=query.order_max)
        .flat_map(|order| (0..=query.r_max).map(move |r| (order, r)))
        .filter(|&(_, r)| r as usize <= query.n_fock_max)
        .collect();
    let per_combo = combos
        .par_iter()
        .map(|&(order, r)| {
            let sweep = elliptic_sweep(aspect, order, r, query.n_fock_max, amp_max, query.search.grid_step)?;
            Ok(sweep
                .into_iter()
                .enumerate()
                .map(|(n, peak)| if n == r as usize { 0.0 } else { peak.probability })
                .collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = vec![0.0_f64; query.n_fock_max + 1];
    for row in per_combo {
        for (b, p) in best.iter_mut().zip(row) {
            *b = b.max(p);
        }
    }
    Ok(best)
}

/// Largest `P_n` found for one level during an elliptic amplitude sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelPeak {
    pub probability: f64,
    /// Equal-area amplitude `√(ab)` where the peak occurs.
    pub amplitude: f64,
}

/// For each `n <= n_hi`, the maximum elliptic `P_n` over equal-area amplitudes
/// `step, 2·step, .. <= amp_max` at fixed aspect ratio.
pub fn elliptic_sweep(
    aspect: f64,
    order: u32,
    photons_added: u32,
    n_hi: usize,
    amp_max: f64,
    step: f64,
) -> Result<Vec<LevelPeak>> {
    let mut best = vec![
        LevelPeak {
            probability: 0.0,
            amplitude: 0.0,
        };
        n_hi + 1
    ];
    let steps = (amp_max / step + 1e-9).floor() as usize;
    for i in 1..=steps {
        let amplitude = i as f64 * step;
        let spec = EllipticStateSpec::from_aspect(aspect, amplitude, order, photons_added)?;
        let probs = elliptic_level_probabilities(&spec, n_hi)?;
        for (slot, p) in best.iter_mut().zip(probs) {
            if p > slot.probability {
                *slot = LevelPeak {
                    probability: p,
                    amplitude,
                };
            }
        }
    }
    Ok(best)
}

/// `|α|` at which `P_{SN} = P_{(S+1)N}`:
/// `|α|^{2N} = ((S+1)N)! / (SN)!`, a Pochhammer ratio.
pub fn equal_superposition_alpha(order: u32, s: u32) -> f64 {
    let n = u64::from(order);
    let s = u64::from(s);
    ((log_factorial((s + 1) * n) - log_factorial(s * n)) / (2.0 * n as f64)).exp()
}

/// The `k` most probable levels of a closed-form distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationOutcome {
    /// `(n, P_n)`, most probable first; lower `n` first on ties.
    pub levels: Vec<(usize, f64)>,
    /// Probability outside the listed levels.
    pub residual: f64,
}

pub fn two_fock_truncation(spec: &CircularStateSpec, alpha: f64, k: usize) -> Result<TruncationOutcome> {
    let spec = spec.with_alpha(alpha);
    spec.validate()?;
    let dist = pnd_closed(&spec, default_n_max(&spec))?;
    let mut levels: Vec<(usize, f64)> = dist
        .probs()
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, p)| p > 0.0)
        .collect();
    levels.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    levels.truncate(k);
    let kept: f64 = levels.iter().map(|l| l.1).sum();
    Ok(TruncationOutcome {
        levels,
        residual: (1.0 - kept).max(0.0),
    })
}

/// `|⟨ψ'|ψ⟩|²` with `|ψ'⟩ = (|SN⟩ + |(S+1)N⟩)/√2`, from the number-basis
/// expansion of the superposition at amplitude `alpha`.
pub fn overlap_fidelity(spec: &CircularStateSpec, alpha: f64, s: u32) -> Result<f64> {
    if spec.photons_added != 0 {
        return Err(Error::InvalidSpec("overlap fidelity is defined for r = 0".into()));
    }
    let spec = spec.with_alpha(alpha);
    spec.validate()?;
    let order = spec.order as usize;
    let (lo, hi) = (s as usize * order, (s as usize + 1) * order);
    let expansion = fock_expansion(&spec, default_n_max(&spec).max(hi))?;
    let c = expansion.coefficients();
    Ok(((c[lo] + c[hi]) / 2f64.sqrt()).norm_sqr())
}

/// Fock target `kN + r` of a Δα curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    NPlusR,
    TwoNPlusR,
    ThreeNPlusR,
}

impl TargetKind {
    pub fn multiple(self) -> usize {
        match self {
            TargetKind::NPlusR => 1,
            TargetKind::TwoNPlusR => 2,
            TargetKind::ThreeNPlusR => 3,
        }
    }

    pub fn target(self, order: u32, photons_added: u32) -> usize {
        self.multiple() * order as usize + photons_added as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaAlphaPoint {
    pub order: u32,
    pub target_n: usize,
    /// `None` when no window exists.
    pub delta_alpha: Option<f64>,
}

/// Window width Δα for `|kN + r⟩` across orders.
pub fn delta_alpha_curve(
    orders: &[u32],
    photons_added: u32,
    kind: TargetKind,
    threshold: f64,
) -> Result<Vec<DeltaAlphaPoint>> {
    let search = WindowSearch::with_threshold(threshold);
    search.validate()?;
    orders
        .par_iter()
        .map(|&order| {
            let spec = CircularStateSpec::new(0.0, order, photons_added)?;
            let target_n = kind.target(order, photons_added);
            let delta_alpha = search.find(&spec, target_n)?.map(|w| w.width()).filter(|&w| w > 0.0);
            Ok(DeltaAlphaPoint {
                order,
                target_n,
                delta_alpha,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pnd::{pnd_closed, pnd_gcs_closed};

    fn gcs(order: u32) -> CircularStateSpec {
        CircularStateSpec::gcs(0.0, order).unwrap()
    }

    #[test]
    fn level_probability_matches_dense_distribution() {
        for (alpha, order, r) in [(2.0, 3, 0), (4.9, 16, 0), (1.7, 6, 4), (3.0, 1, 2)] {
            let spec = CircularStateSpec::new(alpha, order, r).unwrap();
            let dense = pnd_closed(&spec, default_n_max(&spec)).unwrap();
            for n in 0..=dense.n_max() {
                assert!((level_probability(order, r, alpha, n) - dense.get(n)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn window_examples() {
        let w = fock_window(&gcs(12), 0, 0.99, None).unwrap().unwrap();
        assert_eq!(w.alpha_lo, 0.0);
        assert!((w.alpha_hi - 1.9).abs() < 0.02, "{w:?}");

        let w = fock_window(&gcs(12), 12, 0.99, None).unwrap().unwrap();
        assert!(
            (w.alpha_lo - 2.79).abs() < 0.02 && (w.alpha_hi - 3.51).abs() < 0.02,
            "{w:?}"
        );

        let w = fock_window(&gcs(24), 48, 0.99, None).unwrap().unwrap();
        assert!(
            (w.alpha_lo - 6.6).abs() < 0.02 && (w.alpha_hi - 7.04).abs() < 0.02,
            "{w:?}"
        );
    }

    #[test]
    fn incompatible_target_has_no_window() {
        assert_eq!(fock_window(&gcs(5), 7, 0.99, None).unwrap(), None);
        let spec = CircularStateSpec::new(0.0, 4, 3).unwrap();
        assert_eq!(fock_window(&spec, 2, 0.99, None).unwrap(), None);
    }

    #[test]
    fn low_order_fock_states_unreachable_without_photon_addition() {
        for n in 1..=8usize {
            for order in 1..=n as u32 {
                assert_eq!(
                    fock_window(&gcs(order), n, 0.99, None).unwrap(),
                    None,
                    "n = {n}, N = {order}"
                );
            }
        }
    }

    #[test]
    fn threshold_is_validated() {
        assert!(fock_window(&gcs(4), 0, 0.3, None).is_err());
        assert!(fock_window(&gcs(4), 0, 1.0, None).is_err());
    }

    #[test]
    fn window_soundness() {
        let cases = [(12u32, 0u32, 12usize), (24, 0, 24), (24, 0, 48), (9, 2, 11), (6, 3, 3)];
        for (order, r, target) in cases {
            let spec = CircularStateSpec::new(0.0, order, r).unwrap();
            let w = fock_window(&spec, target, 0.99, None).unwrap().unwrap();
            for i in 0..1000 {
                let alpha = w.alpha_lo + w.width() * (i as f64 + 0.5) / 1000.0;
                assert!(level_probability(order, r, alpha, target) >= 0.99 - 1e-9);
            }
            if w.alpha_lo > 0.0 {
                assert!(level_probability(order, r, w.alpha_lo - 1e-3, target) < 0.99);
            }
            assert!(level_probability(order, r, w.alpha_hi + 1e-3, target) < 0.99);
        }
    }

    #[test]
    fn equal_superposition_examples() {
        let quoted = [2.6, 4.9, 6.34, 7.5];
        for (s, q) in quoted.iter().enumerate() {
            let alpha = equal_superposition_alpha(16, s as u32);
            assert!((alpha - q).abs() < 0.02, "S = {s}: {alpha}");
            let spec = CircularStateSpec::gcs(alpha, 16).unwrap();
            let p = pnd_gcs_closed(&spec, default_n_max(&spec).max(16 * (s + 1))).unwrap();
            let (a, b) = (p.get(16 * s), p.get(16 * (s + 1)));
            assert!((a - b).abs() / a < 1e-9);
        }
        assert!((equal_superposition_alpha(16, 0) - 2.61).abs() < 0.01);
    }

    #[test]
    fn truncation_examples() {
        let out = two_fock_truncation(&gcs(16), 4.9, 2).unwrap();
        assert_eq!(out.levels.iter().map(|l| l.0).collect::<Vec<_>>(), vec![16, 32]);
        assert!(out.levels.iter().all(|l| (l.1 - 0.5).abs() < 0.01));
        assert!(out.residual < 0.01);

        let out = two_fock_truncation(&gcs(16), 2.5, 2).unwrap();
        let mut ids: Vec<usize> = out.levels.iter().map(|l| l.0).collect();
        ids.sort_unstable();
        assert_eq!(ids, vec![0, 16]);
        let ratio = out.levels[0].1 / out.levels[1].1;
        assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");

        let out = two_fock_truncation(&gcs(16), 6.0, 2).unwrap();
        assert_eq!(out.levels.iter().map(|l| l.0).collect::<Vec<_>>(), vec![32, 48]);
        let pair = out.levels[0].1 + out.levels[1].1;
        assert!((out.levels[0].1 / pair - 17.0 / 20.0).abs() < 0.03);
        assert!((out.levels[1].1 / pair - 3.0 / 20.0).abs() < 0.03);
    }

    #[test]
    fn truncation_tie_prefers_lower_level() {
        let alpha = equal_superposition_alpha(4, 0);
        let out = two_fock_truncation(&gcs(4), alpha, 1).unwrap();
        // P_0 and P_4 agree to rounding; only an exact tie is broken by n
        assert!(out.levels[0].0 == 0 || out.levels[0].0 == 4);
        let mut levels = vec![(8usize, 0.25f64), (4, 0.25), (0, 0.5)];
        levels.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        assert_eq!(levels, vec![(0, 0.5), (4, 0.25), (8, 0.25)]);
    }

    #[test]
    fn fidelity_vacuum_limit() {
        let f = overlap_fidelity(&gcs(16), 1e-6, 0).unwrap();
        assert!((f - 0.5).abs() < 1e-9);
        assert!(overlap_fidelity(&CircularStateSpec::new(0.0, 4, 1).unwrap(), 1.0, 0).is_err());
    }

    #[test]
    fn fidelity_peak_matches_equal_superposition() {
        let target = equal_superposition_alpha(16, 1);
        let (best, _) = (380..=600)
            .map(|i| i as f64 * 0.01)
            .map(|a| (a, overlap_fidelity(&gcs(16), a, 1).unwrap()))
            .fold((0.0, 0.0), |b, x| if x.1 > b.1 { x } else { b });
        assert!((best - target).abs() < 0.02, "argmax {best} vs {target}");
    }

    #[test]
    fn delta_alpha_first_orders() {
        let orders: Vec<u32> = (6..=12).collect();
        let curve = delta_alpha_curve(&orders, 0, TargetKind::NPlusR, 0.99).unwrap();
        let first = curve.iter().find(|p| p.delta_alpha.is_some()).unwrap();
        // 0.99 is crossed already at N = 9 (max P_9 = 0.99101)
        assert_eq!(first.order, 9);
        assert_eq!(first.target_n, 9);
    }

    #[test]
    fn reachability_small_table() {
        let table = reachability_table(4, 6, 4, 0.99).unwrap();
        assert_eq!(table[0].gcs_orders, (1..=6).collect::<Vec<_>>());
        assert!(table[0].gpacs_combos.is_empty());
        assert!(!table[0].elliptic_reachable);
        for rec in &table[1..] {
            assert!(rec.gcs_orders.is_empty());
            let expected: Vec<(u32, u32)> = (1..=6).map(|n| (n, rec.fock_n as u32)).collect();
            assert_eq!(rec.gpacs_combos, expected);
            assert!(!rec.elliptic_reachable);
        }
    }
}
