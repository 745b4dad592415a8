//! Globally adaptive 15-point Gauss–Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Subdivision budget; the run stops unconverged once this many panels exist.
    pub max_panels: usize,
    /// Number of equal panels to start from.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_panels: 10_000,
            initial_panels: 1,
        }
    }
}

impl QuadOptions {
    pub fn abs(tol: f64) -> Self {
        QuadOptions {
            abs_tol: tol,
            ..Default::default()
        }
    }

    pub fn with_initial_panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv[j] = (f1, f2);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let h = half.abs();
    Panel {
        a,
        b,
        value: res_k * half,
        error: rescale_error((res_k - res_g) * half, res_abs * h, res_asc * h),
    }
}

/// Integrates `f` over `[a, b]`, bisecting the worst panel until the summed
/// error estimate drops below `max(abs_tol, rel_tol |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
            converged: true,
        };
    }
    let n0 = opts.initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut heap: BinaryHeap<Panel> = (0..n0)
        .map(|k| {
            let lo = a + width * k as f64;
            let hi = if k + 1 == n0 { b } else { a + width * (k + 1) as f64 };
            kronrod15(&f, lo, hi)
        })
        .collect();

    let (mut value, mut error) = totals(&heap);
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            let (value, error) = totals(&heap);
            return QuadResult {
                value,
                abs_error: error,
                panels: heap.len(),
                converged: true,
            };
        }
        if heap.len() >= opts.max_panels {
            let (value, error) = totals(&heap);
            return QuadResult {
                value,
                abs_error: error,
                panels: heap.len(),
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Panel can no longer be split in floating point.
            heap.push(worst);
            let (value, error) = totals(&heap);
            return QuadResult {
                value,
                abs_error: error,
                panels: heap.len(),
                converged: false,
            };
        }
        let (lo, hi) = (kronrod15(&f, worst.a, mid), kronrod15(&f, mid, worst.b));
        value += lo.value + hi.value - worst.value;
        error += lo.error + hi.error - worst.error;
        heap.push(lo);
        heap.push(hi);
        // Running sums drift; resync now and then.
        if heap.len().is_multiple_of(256) {
            (value, error) = totals(&heap);
        }
    }
}

// Sums in a fixed (sorted-by-position) order so results do not depend on heap layout.
fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// Integrates over `[a, inf)` via `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, opts: &QuadOptions) -> QuadResult {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t;
        let v = f(a + t / s) / (s * s);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_for_high_degree_polynomials() {
        // K15 is exact up to degree 22 on a single panel.
        let opts = QuadOptions::abs(1e-300);
        let r = kronrod15(&|x: f64| x.powi(22), -1.0, 1.0);
        assert_abs_diff_eq!(r.value, 2.0 / 23.0, epsilon = 1e-15);
        let r = integrate(|x: f64| 3.0 * x * x, 0.0, 2.0, &QuadOptions { max_panels: 1, ..opts });
        assert_abs_diff_eq!(r.value, 8.0, epsilon = 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let r = integrate(|x: f64| (50.0 * x).sin() * (-x).exp(), 0.0, 10.0, &QuadOptions::abs(1e-12));
        assert!(r.converged);
        // int_0^10 e^{-x} sin(50x) dx = (50 - e^{-10}(sin 500 + 50 cos 500)) / 2501
        let exact = (50.0 - (-10.0f64).exp() * (500.0f64.sin() + 50.0 * 500.0f64.cos())) / 2501.0;
        assert_abs_diff_eq!(r.value, exact, epsilon = 1e-11);
    }

    #[test]
    fn sqrt_endpoint_singularity() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &QuadOptions::abs(1e-10));
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_infinity(|x: f64| (-2.0 * x).exp(), 0.0, &QuadOptions::abs(1e-12));
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-11);
    }

    #[test]
    fn budget_exhaustion_reports_unconverged() {
        let r = integrate(
            |x: f64| (1.0 / x).sin(),
            1e-8,
            1.0,
            &QuadOptions {
                abs_tol: 1e-14,
                rel_tol: 0.0,
                max_panels: 20,
                initial_panels: 1,
            },
        );
        assert!(!r.converged);
        assert_eq!(r.panels, 20);
    }
}
