//! Non-Markovianity as accumulated increase of a correlation measure.
//!
//! For a measure X(t) (LQFI or LQU of the evolved state) the quantifier is
//!
//! ```text
//! N = ∫_{dX/dt > 0} dX/dt dt = Σ_k [X(t_end,k) − X(t_start,k)]
//! ```
//!
//! over the maximal intervals where X increases. The interval-sum form is what
//! is computed; [`positive_rate_integral`] evaluates the derivative-integral
//! form as a cross-check.

use std::sync::Mutex;

use rayon::prelude::*;

use crate::channels::{evolve, ChannelSpec, DepolarizingParams};
use crate::error::{Error, Result};
use crate::measures::LocalSpectrum;
use crate::states::CorrelationTriple;

/// Base step for numerical derivatives, in the channel's natural time unit.
pub const DERIVATIVE_STEP: f64 = 1e-4;
/// Increase intervals with a smaller gain are treated as noise.
pub const MIN_INTERVAL_GAIN: f64 = 1e-12;
/// Endpoint bisection stops at this fraction of the window length.
pub const ENDPOINT_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

impl Window {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start >= 0.0 && end > start && end.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "window must satisfy 0 <= start < end, got [{start}, {end}]"
            )));
        }
        Ok(Self { start, end })
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    /// `n` equally spaced points including both ends.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "grid needs at least two points");
        let step = self.len() / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.end
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub q_values: Vec<f64>,
    pub u_values: Vec<f64>,
}

/// LQFI and LQU of the evolved state at each grid time.
pub fn sample_trajectory(spec: &ChannelSpec, times: &[f64]) -> Result<Trajectory> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("time grid is empty".into()));
    }
    if times[0] < 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "time grid must be non-negative and strictly increasing".into(),
        ));
    }
    let pairs: Vec<(f64, f64)> = times
        .par_iter()
        .map(|&t| {
            let spec = LocalSpectrum::new(&evolve(spec, t)?)?;
            Ok((spec.lqfi(), spec.lqu()))
        })
        .collect::<Result<_>>()?;
    let (q_values, u_values) = pairs.into_iter().unzip();
    Ok(Trajectory {
        times: times.to_vec(),
        q_values,
        u_values,
    })
}

/// df/dt on the domain t ≥ 0.
///
/// Central differences at h₀ and h₀/2 combined by one Richardson step. Where
/// t − h₀ would leave the domain, the one-sided second-order stencil
/// (−3f(t) + 4f(t + h) − f(t + 2h))/2h is extrapolated the same way.
pub fn derivative<F: Fn(f64) -> f64 + ?Sized>(f: &F, t: f64, h0: f64) -> f64 {
    derivative_vec(&|x| [f(x)], t, h0)[0]
}

/// [`derivative`] of each component of a vector-valued function, sharing the
/// function evaluations.
pub fn derivative_vec<const K: usize, F>(f: &F, t: f64, h0: f64) -> [f64; K]
where
    F: Fn(f64) -> [f64; K] + ?Sized,
{
    let one_sided = t - h0 < 0.0;
    let f0 = if one_sided { f(t) } else { [0.0; K] };
    let stencil = |h: f64| -> [f64; K] {
        let mut out = [0.0; K];
        if one_sided {
            let (f1, f2) = (f(t + h), f(t + 2.0 * h));
            for k in 0..K {
                out[k] = (-3.0 * f0[k] + 4.0 * f1[k] - f2[k]) / (2.0 * h);
            }
        } else {
            let (fp, fm) = (f(t + h), f(t - h));
            for k in 0..K {
                out[k] = (fp[k] - fm[k]) / (2.0 * h);
            }
        }
        out
    };
    let coarse = stencil(h0);
    let fine = stencil(0.5 * h0);
    let mut out = [0.0; K];
    for k in 0..K {
        out[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncreaseInterval {
    pub t_start: f64,
    pub t_end: f64,
    /// X(t_end) − X(t_start).
    pub delta: f64,
}

/// Bisects [lo, hi] for the sign change of `d`, given d(lo) ≤ 0 < d(hi)
/// (`rising`) or d(lo) > 0 ≥ d(hi) (falling).
fn bisect_sign_change(d: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rising: bool, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let positive = d(mid) > 0.0;
        if positive == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Maximal intervals of `window` on which f increases.
///
/// f is scanned on `n_scan` uniform points; each run of increasing grid
/// segments is widened or narrowed to the zeros of df/dt found by bisection
/// (to 1e-8 of the window length). Touching intervals are merged and
/// intervals gaining less than 1e-12 are dropped.
pub fn increasing_intervals<F>(f: &F, window: Window, n_scan: usize) -> Vec<IncreaseInterval>
where
    F: Fn(f64) -> f64 + Sync + ?Sized,
{
    let n_scan = n_scan.max(3);
    let ts = window.grid(n_scan);
    let fs: Vec<f64> = ts.par_iter().map(|&t| f(t)).collect();
    let rising: Vec<bool> = fs.windows(2).map(|w| w[1] > w[0]).collect();

    let mut runs = Vec::new();
    let mut i = 0;
    while i < rising.len() {
        if rising[i] {
            let first = i;
            while i + 1 < rising.len() && rising[i + 1] {
                i += 1;
            }
            runs.push((first, i));
        }
        i += 1;
    }

    let d = |t: f64| derivative(f, t, DERIVATIVE_STEP);
    let tol = ENDPOINT_REL_TOL * window.len();
    let last = ts.len() - 1;

    let refined: Vec<(f64, f64)> = runs
        .par_iter()
        .map(|&(first, last_seg)| {
            // start: derivative turns positive somewhere in [t_{first−1}, t_{first+1}]
            let start = if first == 0 && d(ts[0]) > 0.0 {
                ts[0]
            } else {
                let cand = [first.saturating_sub(1), first, first + 1];
                locate_change(&d, &ts, &cand, true, tol).unwrap_or(ts[first])
            };
            // end: derivative turns non-positive in [t_{last}, t_{last+2}]
            let end = if last_seg + 1 == last && d(ts[last]) > 0.0 {
                ts[last]
            } else {
                let cand = [last_seg, last_seg + 1, (last_seg + 2).min(last)];
                locate_change(&d, &ts, &cand, false, tol).unwrap_or(ts[last_seg + 1])
            };
            // bisection cannot land exactly on the window edge
            let start = if start - ts[0] <= tol { ts[0] } else { start };
            let end = if ts[last] - end <= tol { ts[last] } else { end };
            (start, end.max(start))
        })
        .collect();

    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (s, e) in refined {
        match merged.last_mut() {
            Some(prev) if s <= prev.1 + tol => prev.1 = prev.1.max(e),
            _ => merged.push((s, e)),
        }
    }

    merged
        .into_iter()
        .filter_map(|(s, e)| {
            let delta = f(e) - f(s);
            (e > s && delta > MIN_INTERVAL_GAIN).then_some(IncreaseInterval {
                t_start: s,
                t_end: e,
                delta,
            })
        })
        .collect()
}

fn locate_change(
    d: &impl Fn(f64) -> f64,
    ts: &[f64],
    cand: &[usize; 3],
    rising: bool,
    tol: f64,
) -> Option<f64> {
    let vals: Vec<f64> = cand.iter().map(|&k| d(ts[k])).collect();
    for j in 0..2 {
        let (a, b) = (cand[j], cand[j + 1]);
        if a == b {
            continue;
        }
        let flips = if rising {
            vals[j] <= 0.0 && vals[j + 1] > 0.0
        } else {
            vals[j] > 0.0 && vals[j + 1] <= 0.0
        };
        if flips {
            return Some(bisect_sign_change(d, ts[a], ts[b], rising, tol));
        }
    }
    None
}

/// Intervals of increase together with their accumulated gain N.
#[derive(Debug, Clone, PartialEq)]
pub struct Accumulation {
    pub intervals: Vec<IncreaseInterval>,
    pub total: f64,
}

pub fn non_markovianity<F>(f: &F, window: Window, n_scan: usize) -> Accumulation
where
    F: Fn(f64) -> f64 + Sync + ?Sized,
{
    let intervals = increasing_intervals(f, window, n_scan);
    let total = intervals.iter().fold(0.0, |acc, iv| acc + iv.delta);
    Accumulation { intervals, total }
}

/// ∫ max(df/dt, 0) dt over the window by the trapezoid rule on `n` points.
/// Panels where the derivative changes sign are split at the linearly
/// interpolated zero so the kink of max(·, 0) does not cost accuracy.
pub fn positive_rate_integral<F>(f: &F, window: Window, n: usize) -> f64
where
    F: Fn(f64) -> f64 + Sync + ?Sized,
{
    let ts = window.grid(n.max(2));
    let ds: Vec<f64> = ts.par_iter().map(|&t| derivative(f, t, DERIVATIVE_STEP)).collect();
    let mut acc = 0.0;
    for i in 0..ts.len() - 1 {
        let (h, a, b) = (ts[i + 1] - ts[i], ds[i], ds[i + 1]);
        acc += if a >= 0.0 && b >= 0.0 {
            0.5 * h * (a + b)
        } else if a > 0.0 {
            0.5 * h * a * a / (a - b)
        } else if b > 0.0 {
            0.5 * h * b * b / (b - a)
        } else {
            0.0
        };
    }
    acc
}

/// Both quantifiers for one channel, computed on the same scan grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NonMarkovReport {
    pub intervals_lqfi: Vec<IncreaseInterval>,
    pub intervals_lqu: Vec<IncreaseInterval>,
    pub n_lqfi: f64,
    pub n_lqu: f64,
}

impl NonMarkovReport {
    /// N_LQFI / N_LQU, undefined when N_LQU = 0.
    pub fn ratio(&self) -> Option<f64> {
        (self.n_lqu > 0.0).then(|| self.n_lqfi / self.n_lqu)
    }
}

/// Remembers the first error raised inside an `f64`-valued closure.
struct ErrorSlot(Mutex<Option<Error>>);

impl ErrorSlot {
    fn new() -> Self {
        Self(Mutex::new(None))
    }

    fn record(&self, e: Error) -> f64 {
        let mut slot = self.0.lock().expect("error slot poisoned");
        slot.get_or_insert(e);
        f64::NAN
    }

    fn into_result(self) -> Result<()> {
        match self.0.into_inner().expect("error slot poisoned") {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Q(t) of a channel as a plain function of time. Errors are stashed in
/// `slot` and reported as NaN.
fn measure_fn<'a>(
    spec: &'a ChannelSpec,
    slot: &'a ErrorSlot,
    pick: fn(&LocalSpectrum) -> f64,
) -> impl Fn(f64) -> f64 + Sync + 'a {
    move |t: f64| match evolve(spec, t).and_then(|rho| LocalSpectrum::new(&rho)) {
        Ok(s) => pick(&s),
        Err(e) => slot.record(e),
    }
}

pub fn lqfi_of_time(spec: &ChannelSpec) -> impl Fn(f64) -> Result<f64> + Sync + '_ {
    move |t| Ok(LocalSpectrum::new(&evolve(spec, t)?)?.lqfi())
}

pub fn lqu_of_time(spec: &ChannelSpec) -> impl Fn(f64) -> Result<f64> + Sync + '_ {
    move |t| Ok(LocalSpectrum::new(&evolve(spec, t)?)?.lqu())
}

pub fn channel_report(spec: &ChannelSpec, window: Window, n_scan: usize) -> Result<NonMarkovReport> {
    if n_scan < 100 {
        return Err(Error::InvalidParameter(format!("n_scan must be >= 100, got {n_scan}")));
    }
    let slot = ErrorSlot::new();
    let (acc_q, acc_u) = {
        let q = measure_fn(spec, &slot, LocalSpectrum::lqfi);
        let u = measure_fn(spec, &slot, LocalSpectrum::lqu);
        (non_markovianity(&q, window, n_scan), non_markovianity(&u, window, n_scan))
    };
    slot.into_result()?;
    Ok(NonMarkovReport {
        intervals_lqfi: acc_q.intervals,
        intervals_lqu: acc_u.intervals,
        n_lqfi: acc_q.total,
        n_lqu: acc_u.total,
    })
}

/// Physical, canonically ordered (|r₁| ≥ |r₂|) correlation triples on a grid
/// of spacing `step` over [−1, 1]³, in lexicographic order.
pub fn tetrahedron_grid(step: f64) -> Result<Vec<CorrelationTriple>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::InvalidParameter(format!("grid step must be in (0, 0.5], got {step}")));
    }
    let count = (2.0 / step + 1e-9).floor() as usize;
    let axis: Vec<f64> = (0..=count).map(|k| k as f64 * step - 1.0).collect();
    let mut out = Vec::new();
    for &r1 in &axis {
        for &r2 in &axis {
            for &r3 in &axis {
                let r = CorrelationTriple::new(r1, r2, r3)?;
                if r.is_physical() && r.is_canonical() {
                    out.push(r);
                }
            }
        }
    }
    Ok(out)
}

/// Maximizes N_LQFI of the depolarizing channel over the given initial
/// triples. Ties (within 1e-12) go to the earliest triple in the list.
pub fn maximize_over_triples(
    mu: f64,
    triples: &[CorrelationTriple],
    window: Window,
    n_scan: usize,
) -> Result<(NonMarkovReport, CorrelationTriple)> {
    if triples.is_empty() {
        return Err(Error::InvalidParameter("no candidate initial states".into()));
    }
    let scores: Vec<f64> = triples
        .par_iter()
        .map(|r| {
            let spec = ChannelSpec::Depolarizing(DepolarizingParams::new(mu, *r)?);
            let slot = ErrorSlot::new();
            let total = {
                let q = measure_fn(&spec, &slot, LocalSpectrum::lqfi);
                non_markovianity(&q, window, n_scan).total
            };
            slot.into_result()?;
            Ok(total)
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] + 1e-12 {
            best = i;
        }
    }
    let spec = ChannelSpec::Depolarizing(DepolarizingParams::new(mu, triples[best])?);
    Ok((channel_report(&spec, window, n_scan)?, triples[best]))
}

/// Grid search over the physical tetrahedron of X-state initial conditions.
pub fn maximize_over_initial(
    mu: f64,
    window: Window,
    n_scan: usize,
    step: f64,
) -> Result<(NonMarkovReport, CorrelationTriple)> {
    maximize_over_triples(mu, &tetrahedron_grid(step)?, window, n_scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_grid_hits_both_ends() {
        let w = Window::new(0.0, 3.0).unwrap();
        let g = w.grid(4);
        assert_eq!(g, vec![0.0, 1.0, 2.0, 3.0]);
        assert!(Window::new(1.0, 1.0).is_err());
        assert!(Window::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert!(derivative(&|_t: f64| 3.5, 1.0, 1e-4).abs() < 1e-10);
        assert!(derivative(&|_t: f64| 3.5, 0.0, 1e-4).abs() < 1e-10);
        let d = derivative(&|t: f64| t.sin(), 0.7, 1e-4);
        assert!((d - 0.7f64.cos()).abs() < 1e-10);
        // boundary stencil
        let d = derivative(&|t: f64| (2.0 * t).exp(), 0.0, 1e-4);
        assert!((d - 2.0).abs() < 1e-9);
        // Q = 1/(1+t²)² at t = 1 gives −0.5
        let d = derivative(&|t: f64| (1.0 + t * t).powi(-2), 1.0, 1e-4);
        assert!((d + 0.5).abs() < 1e-10);
        let both = derivative_vec(&|t: f64| [t.sin(), t * t], 0.7, 1e-4);
        assert!((both[0] - 0.7f64.cos()).abs() < 1e-10 && (both[1] - 1.4).abs() < 1e-10);
    }

    #[test]
    fn monotone_function_has_no_intervals() {
        let w = Window::new(0.0, 10.0).unwrap();
        assert!(increasing_intervals(&|t: f64| (-t).exp(), w, 200).is_empty());
        let acc = non_markovianity(&|t: f64| 1.0 / (1.0 + t), w, 200);
        assert_eq!(acc.total, 0.0);
        assert!(acc.total.is_sign_positive());
    }

    #[test]
    fn cosine_increase_intervals() {
        // cos t on [0, 4π] increases on [π, 2π] and [3π, 4π]
        let w = Window::new(0.0, 4.0 * std::f64::consts::PI).unwrap();
        let acc = non_markovianity(&f64::cos, w, 500);
        assert_eq!(acc.intervals.len(), 2);
        let pi = std::f64::consts::PI;
        let iv = acc.intervals[0];
        assert!((iv.t_start - pi).abs() < 1e-6 && (iv.t_end - 2.0 * pi).abs() < 1e-6);
        assert!((acc.intervals[1].t_end - 4.0 * pi).abs() < 1e-12);
        assert!((acc.total - 4.0).abs() < 1e-9);
        let cross = positive_rate_integral(&f64::cos, w, 20_001);
        assert!((cross - 4.0).abs() < 1e-6);
    }

    #[test]
    fn increasing_from_window_start() {
        let w = Window::new(0.0, 2.0).unwrap();
        let acc = non_markovianity(&|t: f64| t * t * (3.0 - 2.0 * t), w, 101);
        assert_eq!(acc.intervals.len(), 1);
        assert_eq!(acc.intervals[0].t_start, 0.0);
        assert!((acc.intervals[0].t_end - 1.0).abs() < 1e-7);
        assert!((acc.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tiny_wiggles_are_dropped() {
        let w = Window::new(0.0, 10.0).unwrap();
        let acc = non_markovianity(&|t: f64| (-t).exp() + 1e-14 * (40.0 * t).sin(), w, 1000);
        assert!(acc.total < 1e-12);
    }

    #[test]
    fn report_ratio() {
        let r = NonMarkovReport {
            intervals_lqfi: vec![],
            intervals_lqu: vec![],
            n_lqfi: 0.3,
            n_lqu: 0.0,
        };
        assert_eq!(r.ratio(), None);
    }

    #[test]
    fn tetrahedron_grid_contents() {
        let g = tetrahedron_grid(0.5).unwrap();
        assert!(g.iter().all(|r| r.is_physical() && r.is_canonical()));
        assert!(g.contains(&CorrelationTriple::new(1.0, -1.0, 1.0).unwrap()));
        assert!(g.contains(&CorrelationTriple::new(0.0, 0.0, 0.0).unwrap()));
        let fine = tetrahedron_grid(0.25).unwrap();
        assert!(g.iter().all(|r| fine.contains(r)));
        assert!(tetrahedron_grid(0.0).is_err());
        assert!(tetrahedron_grid(0.6).is_err());
    }
}
