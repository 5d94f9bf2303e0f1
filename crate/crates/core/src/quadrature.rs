//! Adaptive Simpson quadrature with Richardson-extrapolated panels.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;
const INITIAL_PANELS: usize = 8;

/// ∫_a^b f over a smooth integrand.
///
/// Each panel is accepted once |S(left) + S(right) − S(whole)| ≤ 15ε and the
/// extrapolated value S₂ + (S₂ − S₁)/15 is returned. The tolerance ε is
/// `rel_tol` times a coarse estimate of ∫|f|, split evenly across panels.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, rel_tol: f64, max_evals: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let mut evals = 0usize;
    let mut eval = |x: f64, evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let width = (b - a) / INITIAL_PANELS as f64;
    let mut panels = Vec::with_capacity(INITIAL_PANELS);
    let mut abs_scale = 0.0;
    for i in 0..INITIAL_PANELS {
        let lo = a + width * i as f64;
        let hi = if i + 1 == INITIAL_PANELS { b } else { lo + width };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (eval(lo, &mut evals), eval(mid, &mut evals), eval(hi, &mut evals));
        abs_scale += (hi - lo).abs() / 6.0 * (flo.abs() + 4.0 * fmid.abs() + fhi.abs());
        panels.push((lo, hi, flo, fmid, fhi));
    }
    let eps = rel_tol * abs_scale.max(f64::MIN_POSITIVE);

    let mut total = 0.0;
    for (lo, hi, flo, fmid, fhi) in panels {
        let whole = simpson(lo, hi, flo, fmid, fhi);
        total += refine(
            &mut eval,
            &mut evals,
            max_evals,
            Panel { lo, hi, flo, fmid, fhi, whole },
            eps / INITIAL_PANELS as f64,
            MAX_DEPTH,
        )?;
    }
    Ok(total)
}

struct Panel {
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
}

fn simpson(lo: f64, hi: f64, flo: f64, fmid: f64, fhi: f64) -> f64 {
    (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
}

fn refine<E>(
    eval: &mut E,
    evals: &mut usize,
    max_evals: usize,
    p: Panel,
    eps: f64,
    depth: u32,
) -> Result<f64>
where
    E: FnMut(f64, &mut usize) -> f64,
{
    if *evals > max_evals {
        return Err(Error::QuadratureFailure { evaluations: *evals });
    }
    let mid = 0.5 * (p.lo + p.hi);
    let lm = 0.5 * (p.lo + mid);
    let rm = 0.5 * (mid + p.hi);
    let flm = eval(lm, evals);
    let frm = eval(rm, evals);
    let left = simpson(p.lo, mid, p.flo, flm, p.fmid);
    let right = simpson(mid, p.hi, p.fmid, frm, p.fhi);
    let delta = left + right - p.whole;
    if delta.abs() <= 15.0 * eps || depth == 0 {
        if depth == 0 && delta.abs() > 15.0 * eps {
            return Err(Error::QuadratureFailure { evaluations: *evals });
        }
        return Ok(left + right + delta / 15.0);
    }
    let l = refine(
        eval,
        evals,
        max_evals,
        Panel { lo: p.lo, hi: mid, flo: p.flo, fmid: flm, fhi: p.fmid, whole: left },
        0.5 * eps,
        depth - 1,
    )?;
    let r = refine(
        eval,
        evals,
        max_evals,
        Panel { lo: mid, hi: p.hi, flo: p.fmid, fmid: frm, fhi: p.fhi, whole: right },
        0.5 * eps,
        depth - 1,
    )?;
    Ok(l + r)
}

/// Composite trapezoid rule over tabulated samples.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12, 10_000).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_integrands() {
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-12, 1_000_000).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        // ∫₀³ t/(1+t²) dt = ½ ln 10
        let v = adaptive_simpson(|t| t / (1.0 + t * t), 0.0, 3.0, 1e-10, 1_000_000).unwrap();
        assert!((v - 0.5 * 10f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let v = adaptive_simpson(f64::exp, 1.0, 0.0, 1e-12, 100_000).unwrap();
        assert!((v + (std::f64::consts::E - 1.0)).abs() < 1e-11);
        assert_eq!(adaptive_simpson(f64::exp, 2.0, 2.0, 1e-12, 10).unwrap(), 0.0);
    }

    #[test]
    fn evaluation_budget_is_enforced() {
        let r = adaptive_simpson(|x| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0, 1e-14, 2_000);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn trapezoid_linear() {
        let xs = [0.0, 0.5, 2.0];
        let ys = [1.0, 2.0, 5.0];
        assert!((trapezoid(&xs, &ys) - 6.0).abs() < 1e-15);
    }
}
