//! Dormand–Prince 5(4) integrator for complex linear-ish systems with dense
//! output at requested times.

use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Maximum number of accepted plus rejected steps.
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 50_000_000,
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

type State<const N: usize> = [Complex64; N];

fn axpy<const N: usize>(y: &State<N>, terms: &[(f64, &State<N>)], h: f64) -> State<N> {
    let mut out = *y;
    for (c, k) in terms {
        if *c == 0.0 {
            continue;
        }
        let f = h * c;
        for i in 0..N {
            out[i] += k[i] * f;
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `(t_out[0], y0)` and returns the state at
/// every entry of `t_out`, which must be non-decreasing.
pub fn integrate<const N: usize, F>(
    rhs: F,
    y0: State<N>,
    t_out: &[f64],
    tol: &Tolerances,
) -> Result<Vec<State<N>>>
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    let mut out = Vec::with_capacity(t_out.len());
    let Some(&t_start) = t_out.first() else {
        return Ok(out);
    };
    let t_end = *t_out.last().unwrap();
    out.push(y0);
    if t_out.len() == 1 || t_end == t_start {
        out.resize(t_out.len(), y0);
        return Ok(out);
    }

    let mut t = t_start;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = initial_step(&y, &k1, t_end - t_start, tol);
    let mut next = 1;
    let mut steps = 0usize;
    let mut previous_err = 1e-4_f64;

    while next < t_out.len() {
        if steps >= tol.max_steps {
            return Err(Error::TooManySteps { t });
        }
        steps += 1;
        let remaining = t_end - t;
        let last_step = h >= remaining;
        if last_step {
            h = remaining;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t });
        }

        let k2 = rhs(t + C2 * h, &axpy(&y, &[(A21, &k1)], h));
        let k3 = rhs(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = rhs(t + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = rhs(
            t + C5 * h,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = rhs(
            t + h,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
        );
        let y1 = axpy(
            &y,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            h,
        );
        let k7 = rhs(t + h, &y1);

        let mut err_sq = 0.0;
        for i in 0..N {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let scale = tol.atol + tol.rtol * y[i].norm().max(y1[i].norm());
            err_sq += (e.norm() / scale).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            let t_new = if last_step { t_end } else { t + h };
            // Dense output for every requested time inside (t, t_new].
            if next < t_out.len() && t_out[next] <= t_new {
                let cont = DenseStep::new(&y, &y1, &[&k1, &k3, &k4, &k5, &k6, &k7], h);
                while next < t_out.len() && t_out[next] <= t_new {
                    let target = t_out[next];
                    if target == t_new {
                        out.push(y1);
                    } else {
                        out.push(cont.eval((target - t) / h));
                    }
                    next += 1;
                }
            }
            t = t_new;
            y = y1;
            k1 = k7;
            // PI step-size controller.
            let fac = 0.9 * err.max(1e-10).powf(-0.7 / 5.0) * previous_err.powf(0.4 / 5.0);
            previous_err = err.max(1e-4);
            h *= fac.clamp(0.2, 10.0);
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }
    Ok(out)
}

struct DenseStep<const N: usize> {
    r: [State<N>; 5],
}

impl<const N: usize> DenseStep<N> {
    fn new(y0: &State<N>, y1: &State<N>, k: &[&State<N>; 6], h: f64) -> Self {
        let [k1, k3, k4, k5, k6, k7] = *k;
        let mut r = [[Complex64::new(0.0, 0.0); N]; 5];
        for i in 0..N {
            let ydiff = y1[i] - y0[i];
            let bspl = k1[i] * h - ydiff;
            r[0][i] = y0[i];
            r[1][i] = ydiff;
            r[2][i] = bspl;
            r[3][i] = ydiff - k7[i] * h - bspl;
            r[4][i] = (k1[i] * D1 + k3[i] * D3 + k4[i] * D4 + k5[i] * D5 + k6[i] * D6 + k7[i] * D7) * h;
        }
        Self { r }
    }

    fn eval(&self, theta: f64) -> State<N> {
        let one_minus = 1.0 - theta;
        let mut out = [Complex64::new(0.0, 0.0); N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.r[0][i]
                + (self.r[1][i]
                    + (self.r[2][i] + (self.r[3][i] + self.r[4][i] * one_minus) * theta) * one_minus)
                    * theta;
        }
        out
    }
}

fn initial_step<const N: usize>(y: &State<N>, f: &State<N>, span: f64, tol: &Tolerances) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = tol.atol + tol.rtol * y[i].norm();
        d0 += (y[i].norm() / sc).powi(2);
        d1 += (f[i].norm() / sc).powi(2);
    }
    let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span).max(1e-12 * span)
}
