use crate::{Error, Result};

/// Smallest x in [0, x_max] where a continuous, initially increasing `f` first reaches
/// `target`, located by a forward scan with `step` and refined by bisection until
/// |f(x) - target| <= `tolerance`.
pub fn first_crossing<F: FnMut(f64) -> f64>(
    mut f: F,
    target: f64,
    step: f64,
    x_max: f64,
    tolerance: f64,
) -> Result<f64> {
    if !(step > 0.0 && x_max > 0.0 && tolerance > 0.0) {
        return Err(Error::Invalid("first_crossing needs positive step, range and tolerance".into()));
    }
    let f0 = f(0.0);
    if (f0 - target).abs() <= tolerance || target <= f0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut best = f0;
    loop {
        let hi = (lo + step).min(x_max);
        let fh = f(hi);
        best = best.max(fh);
        if fh >= target {
            return bisect(&mut f, target, lo, hi, tolerance);
        }
        if hi >= x_max {
            return Err(Error::OutOfRange { target, maximum: best });
        }
        lo = hi;
    }
}

fn bisect<F: FnMut(f64) -> f64>(f: &mut F, target: f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm - target).abs() <= tol {
            return Ok(mid);
        }
        if fm < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            let (flo, fhi) = (f(lo), f(hi));
            return Ok(if (flo - target).abs() < (fhi - target).abs() { lo } else { hi });
        }
    }
    Err(Error::NonConvergence { routine: "first_crossing", info: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_first_branch() {
        // sin increases on [0, π/2] and crosses 0.5 again on the way down; take the first
        let x = first_crossing(|x| x.sin(), 0.5, 0.01, 10.0, 1e-14).unwrap();
        assert!((x - std::f64::consts::FRAC_PI_6).abs() < 1e-12);
        assert_eq!(first_crossing(|x| x * x, 0.0, 0.1, 1.0, 1e-12).unwrap(), 0.0);
        assert!(matches!(first_crossing(|x| x.sin(), 2.0, 0.01, 10.0, 1e-12), Err(Error::OutOfRange { .. })));
    }
}
