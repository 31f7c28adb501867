//! Adaptive Dormand–Prince 5(4) integrator with continuous output.
//!
//! States are fixed-size arrays so the per-step work stays on the stack.
//! Every accepted step keeps the five interpolation coefficients of the
//! method's native fourth-order continuous extension, so a [`Trajectory`]
//! can be queried anywhere on its time span.

use crate::error::{Result, SolError};

/// Integrator tolerances and limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
    /// Upper bound on the step size; `f64::INFINITY` for none.
    pub h_max: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_steps: 2_000_000,
            h_max: f64::INFINITY,
        }
    }
}

impl OdeOptions {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        OdeOptions {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
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

/// One accepted step and its interpolation data.
#[derive(Debug, Clone)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub h: f64,
    rc: [[f64; N]; 5],
}

impl<const N: usize> Step<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &self.rc;
        std::array::from_fn(|i| r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i]))))
    }
}

/// Dense solution of an initial value problem on `[t_start, t_end]`.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub t_start: f64,
    pub t_end: f64,
    pub y_start: [f64; N],
    pub y_end: [f64; N],
    steps: Vec<Step<N>>,
}

impl<const N: usize> Trajectory<N> {
    /// State at `t`; clamps to the integration span.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.steps.is_empty() || t <= self.t_start {
            return self.y_start;
        }
        if t >= self.t_end {
            return self.y_end;
        }
        let idx = self
            .steps
            .partition_point(|s| s.t0 + s.h <= t)
            .min(self.steps.len() - 1);
        self.steps[idx].eval(t)
    }

    /// Times of the accepted step boundaries, including both ends.
    pub fn mesh(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.steps.iter().map(|s| s.t0).collect();
        m.push(self.t_end);
        m
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    /// Uniform samples `(t, y(t))` with `n ≥ 2` points spanning the interval.
    pub fn sample(&self, a: f64, b: f64, n: usize) -> Vec<(f64, [f64; N])> {
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let t = a + (b - a) * i as f64 / (n - 1) as f64;
                (t, self.eval(t))
            })
            .collect()
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn initial_step<const N: usize, F>(f: &F, t0: f64, y0: &[f64; N], k1: &[f64; N], span: f64, opts: &OdeOptions) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut dnf = 0.0;
    let mut dny = 0.0;
    for i in 0..N {
        let sk = opts.abs_tol + opts.rel_tol * y0[i].abs();
        dnf += (k1[i] / sk).powi(2);
        dny += (y0[i] / sk).powi(2);
    }
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        0.01 * (dny / dnf).sqrt()
    };
    h = h.min(span).min(opts.h_max);
    let y1 = axpy(y0, h, &[(1.0, k1)]);
    let k2 = f(t0 + h, &y1);
    let mut der2 = 0.0;
    for i in 0..N {
        let sk = opts.abs_tol + opts.rel_tol * y0[i].abs();
        der2 += ((k2[i] - k1[i]) / sk).powi(2);
    }
    let der2 = der2.sqrt() / h;
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(span).min(opts.h_max)
}

fn drive<const N: usize, F, S>(f: F, t0: f64, y0: [f64; N], t1: f64, opts: &OdeOptions, mut sink: S) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    S: FnMut(Step<N>),
{
    if !(t1 >= t0) {
        return Err(SolError::InvalidParam(format!("integration end {t1} precedes start {t0}")));
    }
    if t1 == t0 {
        return Ok(y0);
    }
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, t0, &y0, &k1, span, opts);
    let mut facold: f64 = 1e-4;
    let mut steps = 0usize;
    let mut rejected_last = false;
    const BETA: f64 = 0.04;
    let expo1 = 0.2 - BETA * 0.75;
    loop {
        if steps >= opts.max_steps {
            return Err(SolError::Integrator { t, h, steps, reason: "step budget exhausted" });
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(SolError::Integrator { t, h, steps, reason: "step size underflow" });
        }
        let last = t + h >= t1 - 1e-14 * span;
        if last {
            h = t1 - t;
        }
        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + h, &y_new);
        steps += 1;

        let mut err = 0.0;
        let mut finite = true;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sk = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            err += (e / sk).powi(2);
            finite &= y_new[i].is_finite();
        }
        if !finite {
            return Err(SolError::Integrator { t, h, steps, reason: "non-finite state" });
        }
        let err = (err / N as f64).sqrt();
        let fac11 = err.powf(expo1);
        if err <= 1.0 {
            let fac = (fac11 / facold.powf(BETA) / 0.9).clamp(0.1, 5.0);
            let mut h_new = (h / fac).min(opts.h_max);
            if rejected_last {
                h_new = h_new.min(h);
            }
            facold = err.max(1e-4);

            let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
            let rc4: [f64; N] = std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]);
            let rc5: [f64; N] = std::array::from_fn(|i| {
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            });
            sink(Step { t0: t, h, rc: [y, ydiff, bspl, rc4, rc5] });

            t = if last { t1 } else { t + h };
            y = y_new;
            k1 = k7;
            rejected_last = false;
            if last {
                return Ok(y);
            }
            h = h_new;
        } else {
            h /= (fac11 / 0.9).min(5.0);
            rejected_last = true;
        }
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t1 ≥ t0`, keeping dense output.
pub fn solve<const N: usize, F>(f: F, t0: f64, y0: [f64; N], t1: f64, opts: &OdeOptions) -> Result<Trajectory<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut steps = Vec::new();
    let y_end = drive(f, t0, y0, t1, opts, |s| steps.push(s))?;
    Ok(Trajectory {
        t_start: t0,
        t_end: t1,
        y_start: y0,
        y_end,
        steps,
    })
}

/// Integrates and returns only the final state.
pub fn solve_final<const N: usize, F>(f: F, t0: f64, y0: [f64; N], t1: f64, opts: &OdeOptions) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    drive(f, t0, y0, t1, opts, |_| {})
}
