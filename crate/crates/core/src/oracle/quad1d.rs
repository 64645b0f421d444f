//! Globally adaptive Gauss-Legendre integration of vector-valued integrands.

use crate::gauss;
use crate::C64;

pub type Vals = [C64; 4];

pub fn zero() -> Vals {
    [C64::new(0.0, 0.0); 4]
}

pub fn add(a: &mut Vals, b: &Vals) {
    for i in 0..4 {
        a[i] += b[i];
    }
}

pub fn diff_norm(a: &Vals, b: &Vals) -> f64 {
    (0..4).map(|i| (a[i] - b[i]).norm()).fold(0.0, f64::max)
}

pub fn norm(a: &Vals) -> f64 {
    a.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

const NODES: usize = 10;

pub struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    pub fn new() -> Self {
        let (x, w) = gauss::legendre(NODES);
        Self { x, w }
    }

    fn apply(&self, f: &mut impl FnMut(f64) -> Vals, a: f64, b: f64) -> Vals {
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = zero();
        for (x, w) in self.x.iter().zip(&self.w) {
            let v = f(m + h * x);
            for i in 0..4 {
                acc[i] += v[i] * (w * h);
            }
        }
        acc
    }
}

impl Default for Rule {
    fn default() -> Self {
        Self::new()
    }
}

pub struct Outcome {
    pub value: Vals,
    pub error: f64,
    pub converged: bool,
    pub evals: usize,
}

/// Bisects the worst panel until the summed error is below
/// `max(abs_tol, rel_tol * |value|)` or `max_panels` is reached.
pub fn integrate(
    rule: &Rule,
    mut f: impl FnMut(f64) -> Vals,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Outcome {
    struct Panel {
        a: f64,
        b: f64,
        value: Vals,
        err: f64,
    }
    let mut evals = 0;
    let mut eval_panel = |a: f64, b: f64, f: &mut dyn FnMut(f64) -> Vals| -> [Panel; 2] {
        let mut g = |x| f(x);
        let m = 0.5 * (a + b);
        let whole = rule.apply(&mut g, a, b);
        let l = rule.apply(&mut g, a, m);
        let r = rule.apply(&mut g, m, b);
        evals += 3 * NODES;
        let mut sum = l;
        add(&mut sum, &r);
        let err = diff_norm(&whole, &sum);
        [
            Panel { a, b: m, value: l, err: 0.5 * err },
            Panel { a: m, b, value: r, err: 0.5 * err },
        ]
    };
    let mut panels: Vec<Panel> = eval_panel(a, b, &mut f).into();
    loop {
        let mut value = zero();
        let mut err = 0.0;
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            add(&mut value, &p.value);
            err += p.err;
            if p.err > panels[worst].err {
                worst = i;
            }
        }
        let target = abs_tol.max(rel_tol * norm(&value));
        if err <= target || panels.len() >= max_panels || !err.is_finite() {
            return Outcome {
                value,
                error: err,
                converged: err <= target,
                evals,
            };
        }
        let p = panels.swap_remove(worst);
        let [l, r] = eval_panel(p.a, p.b, &mut f);
        panels.push(l);
        panels.push(r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_endpoint_peak() {
        let rule = Rule::new();
        let eps: f64 = 1e-6;
        let o = integrate(
            &rule,
            |x| [C64::new(eps / (x * x + eps * eps), 0.0); 4],
            0.0,
            1.0,
            1e-13,
            0.0,
            10_000,
        );
        assert!(o.converged);
        let exact = (1.0 / eps).atan();
        assert!((o.value[0].re - exact).abs() < 1e-12);
    }
}
