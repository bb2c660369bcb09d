//! Dormand–Prince 5(4) with PI step-size control and Hairer's continuous
//! extension of order 4.

use serde::Serialize;

use crate::error::IntegrationError;
use crate::fields::VectorField;

// Dormand–Prince 5(4) tableau; fields are autonomous, so no nodes c_i.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Upper bound on |h|; `None` means unbounded.
    pub max_step: Option<f64>,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 5_000_000,
            max_step: None,
        }
    }
}

impl IntegratorOptions {
    /// Relative tolerance `tol` with absolute tolerance `tol / 100`.
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol * 1e-2,
            ..Self::default()
        }
    }
}

/// Post-step map applied to each accepted state.
pub type Projection<'a> = &'a dyn Fn(&mut [f64]);

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// One accepted step with its continuous extension.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    /// `5 * dim` coefficients, grouped by order.
    coeffs: Vec<f64>,
}

impl DenseSegment {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() / 5
    }

    /// Interpolated state at `t`, which should lie in the segment.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let n = self.dim();
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.coeffs;
        for i in 0..n {
            out[i] = c[i] + s * (c[n + i] + s1 * (c[2 * n + i] + s * (c[3 * n + i] + s1 * c[4 * n + i])));
        }
    }
}

/// Integration failure with the last time reached.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub error: IntegrationError,
    pub last_time: f64,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (last valid time {})", self.error, self.last_time)
    }
}

impl std::error::Error for Failure {}

struct Work {
    k: [Vec<f64>; 7],
    ytmp: Vec<f64>,
    ynew: Vec<f64>,
    err: Vec<f64>,
}

impl Work {
    fn new(n: usize) -> Self {
        Self {
            k: std::array::from_fn(|_| vec![0.0; n]),
            ytmp: vec![0.0; n],
            ynew: vec![0.0; n],
            err: vec![0.0; n],
        }
    }
}

/// Max-norm of the scaled local error, so every component meets its tolerance.
fn error_norm(y: &[f64], ynew: &[f64], err: &[f64], opts: &IntegratorOptions) -> f64 {
    (0..y.len())
        .map(|i| (err[i] / (opts.atol + opts.rtol * y[i].abs().max(ynew[i].abs()))).abs())
        .fold(0.0, f64::max)
}

/// Hairer's starting step heuristic.
fn initial_step<F: VectorField + ?Sized>(
    field: &F,
    y0: &[f64],
    f0: &[f64],
    dir: f64,
    span: f64,
    opts: &IntegratorOptions,
) -> f64 {
    let n = y0.len();
    let sk: Vec<f64> = y0.iter().map(|y| opts.atol + opts.rtol * y.abs()).collect();
    let rms = |v: &[f64]| (v.iter().zip(&sk).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n as f64).sqrt();
    let d0 = rms(y0);
    let d1 = rms(f0);
    let mut h = if d0 < 1e-10 || d1 < 1e-10 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(span);
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + dir * h * f).collect();
    let mut f1 = vec![0.0; n];
    field.eval(&y1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff) / h;
    let h1 = if d1.max(d2) <= 1e-15 {
        (1e-6_f64).max(h * 1e-3)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h).min(h1).min(span)
}

/// Integrates `y' = X(y)` from `t0` to `t_end` (either direction).
///
/// `on_step` sees every accepted step as `(segment, y_new)`; `project`, when
/// given, is applied to the state after each accepted step.
pub fn dopri5<F, S>(
    field: &F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: &IntegratorOptions,
    project: Option<Projection<'_>>,
    mut on_step: S,
) -> Result<(Vec<f64>, IntegratorStats), Failure>
where
    F: VectorField + ?Sized,
    S: FnMut(&DenseSegment, &[f64]),
{
    let n = field.dim();
    if y0.len() != n {
        return Err(Failure {
            error: IntegrationError::DimensionMismatch {
                expected: n,
                got: y0.len(),
            },
            last_time: t0,
        });
    }
    let mut stats = IntegratorStats::default();
    let mut y = y0.to_vec();
    if t_end == t0 {
        return Ok((y, stats));
    }
    let dir = (t_end - t0).signum();
    let span = (t_end - t0).abs();
    let mut w = Work::new(n);
    let mut t = t0;

    field.eval(&y, &mut w.k[0]);
    stats.evaluations += 1;
    let mut h = initial_step(field, &y, &w.k[0], dir, span, opts);
    stats.evaluations += 1;
    if let Some(hmax) = opts.max_step {
        h = h.min(hmax);
    }
    let mut fac_old = 1e-4_f64;
    let mut last_rejected = false;

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Failure {
                error: IntegrationError::TooManySteps {
                    t,
                    max_steps: opts.max_steps,
                },
                last_time: t,
            });
        }
        let remaining = (t_end - t).abs();
        let last = h >= remaining * (1.0 - 1e-12);
        if last {
            h = remaining;
        }
        if h <= 10.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Failure {
                error: IntegrationError::StepUnderflow { t, h },
                last_time: t,
            });
        }
        let hs = dir * h;

        let [k1, k2, k3, k4, k5, k6, k7] = &mut w.k;
        let yt = &mut w.ytmp;
        for i in 0..n {
            yt[i] = y[i] + hs * A21 * k1[i];
        }
        field.eval(yt, k2);
        for i in 0..n {
            yt[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
        }
        field.eval(yt, k3);
        for i in 0..n {
            yt[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        field.eval(yt, k4);
        for i in 0..n {
            yt[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        field.eval(yt, k5);
        for i in 0..n {
            yt[i] = y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        field.eval(yt, k6);
        let ynew = &mut w.ynew;
        for i in 0..n {
            ynew[i] = y[i] + hs * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        field.eval(ynew, k7);
        stats.evaluations += 6;

        for i in 0..n {
            w.err[i] = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = error_norm(&y, ynew, &w.err, opts);
        if !err.is_finite() {
            if ynew.iter().any(|v| !v.is_finite()) && h <= 10.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(Failure {
                    error: IntegrationError::NonFinite(t),
                    last_time: t,
                });
            }
            h *= FAC_MIN;
            last_rejected = true;
            stats.rejected += 1;
            continue;
        }

        let fac11 = err.powf(0.2 - BETA * 0.75);
        if err <= 1.0 {
            let mut fac = fac11 / fac_old.powf(BETA);
            fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
            }
            fac_old = err.max(1e-4);

            let mut coeffs = vec![0.0; 5 * n];
            for i in 0..n {
                let ydiff = ynew[i] - y[i];
                let bspl = hs * k1[i] - ydiff;
                coeffs[i] = y[i];
                coeffs[n + i] = ydiff;
                coeffs[2 * n + i] = bspl;
                coeffs[3 * n + i] = ydiff - hs * k7[i] - bspl;
                coeffs[4 * n + i] = hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            let t_new = if last { t_end } else { t + hs };
            let segment = DenseSegment {
                t0: t,
                h: t_new - t,
                coeffs,
            };

            if let Some(p) = project {
                p(ynew);
                field.eval(ynew, k7);
                stats.evaluations += 1;
            }
            if ynew.iter().any(|v| !v.is_finite()) {
                return Err(Failure {
                    error: IntegrationError::NonFinite(t),
                    last_time: t,
                });
            }
            on_step(&segment, ynew);
            y.copy_from_slice(ynew);
            w.k.swap(0, 6);
            t = t_new;
            stats.accepted += 1;
            last_rejected = false;
            if last {
                return Ok((y, stats));
            }
            h = h_new;
            if let Some(hmax) = opts.max_step {
                h = h.min(hmax);
            }
        } else {
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            last_rejected = true;
            stats.rejected += 1;
        }
    }
}

/// Endpoint of the flow, without recording intermediate states.
pub fn flow_to<F: VectorField + ?Sized>(
    field: &F,
    x0: &[f64],
    t: f64,
    opts: &IntegratorOptions,
) -> Result<Vec<f64>, Failure> {
    dopri5(field, 0.0, x0, t, opts, None, |_, _| {}).map(|(y, _)| y)
}
