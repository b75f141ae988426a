use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerances for adaptive Gauss-Kronrod integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { relative_tolerance: 1e-10, absolute_tolerance: 1e-13, max_subdivisions: 2000 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.absolute_tolerance > 0.0) {
            return Err(Error::Invalid("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Invalid("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Axis-aligned integration rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_671_5,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_641_0,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_9,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    splittable: bool,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let dhlgth = hlgth.abs();
    let fc = f(centr);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let absc = hlgth * XGK[jtw];
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let absc = hlgth * XGK[jtwm1];
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += WGK[jtwm1] * (f1 + f2);
        resabs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    let mut abserr = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && abserr != 0.0 {
        abserr = resasc * (200.0 * abserr / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        abserr = abserr.max(50.0 * f64::EPSILON * resabs);
    }
    if !result.is_finite() || !abserr.is_finite() {
        return Err(Error::domain("integrate_1d", format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok((result, abserr))
}

/// Adaptive 7/15-point Gauss-Kronrod integration of `f` over [a, b].
pub fn integrate_1d<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("integrate_1d", "limits must be finite"));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let (v, e) = gk15(&mut f, a, b)?;
    let mut evaluations = 15;
    let mut segments = vec![Segment { a, b, value: v, error: e, splittable: true }];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        let tol = spec.absolute_tolerance.max(spec.relative_tolerance * total.abs());
        if err <= tol {
            return Ok(QuadResult { value: total, error: err, evaluations });
        }
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.splittable)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(Error::Quadrature { estimate: total, error: err, subdivisions: segments.len() });
        };
        if segments.len() >= spec.max_subdivisions {
            return Err(Error::Quadrature { estimate: total, error: err, subdivisions: segments.len() });
        }
        let s = segments.swap_remove(i);
        let mid = 0.5 * (s.a + s.b);
        let width_floor = 1e3 * f64::EPSILON * s.a.abs().max(s.b.abs()).max(f64::MIN_POSITIVE);
        if (s.b - s.a).abs() <= width_floor || mid == s.a || mid == s.b {
            segments.push(Segment { splittable: false, ..s });
            continue;
        }
        let (v1, e1) = gk15(&mut f, s.a, mid)?;
        let (v2, e2) = gk15(&mut f, mid, s.b)?;
        evaluations += 30;
        segments.push(Segment { a: s.a, b: mid, value: v1, error: e1, splittable: true });
        segments.push(Segment { a: mid, b: s.b, value: v2, error: e2, splittable: true });
    }
}

/// Integrates over [a, b] after substituting x = a + u^2, which removes an
/// inverse-square-root singularity at the left endpoint.
pub fn integrate_1d_sqrt_start<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(b >= a) {
        return Err(Error::domain("integrate_1d_sqrt_start", "requires b >= a"));
    }
    integrate_1d(|u| 2.0 * u * f(a + u * u), 0.0, (b - a).sqrt(), spec)
}

/// Integrates over [a, ∞) via x = a + t/(1-t).
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(mut f: F, a: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    integrate_1d(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let om = 1.0 - t;
            let v = f(a + t / om) / (om * om);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        spec,
    )
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Nested adaptive integration of f(x, y) over a rectangle; the inner integral runs over y.
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(f: F, rect: Rect, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    let width = (rect.x1 - rect.x0).abs().max(f64::MIN_POSITIVE);
    let inner_spec = QuadratureSpec {
        relative_tolerance: spec.relative_tolerance * 0.1,
        absolute_tolerance: spec.absolute_tolerance * 0.1 / width,
        max_subdivisions: spec.max_subdivisions,
    };
    let f = RefCell::new(f);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_error = RefCell::new(0.0);
    let evaluations = RefCell::new(0usize);
    let outer = integrate_1d(
        |x| {
            if failure.borrow().is_some() {
                return 0.0;
            }
            let mut g = f.borrow_mut();
            match integrate_1d(|y| g(x, y), rect.y0, rect.y1, &inner_spec) {
                Ok(r) => {
                    *inner_error.borrow_mut() += r.error;
                    *evaluations.borrow_mut() += r.evaluations;
                    r.value
                }
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    0.0
                }
            }
        },
        rect.x0,
        rect.x1,
        spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    Ok(QuadResult { value: outer.value, error: outer.error, evaluations: evaluations.into_inner() })
}
