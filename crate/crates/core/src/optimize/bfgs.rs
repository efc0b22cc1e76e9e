use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BfgsConfig {
    pub max_iterations: usize,
    /// Stop once the largest gradient component is at most this.
    pub gradient_tolerance: f64,
    /// Sufficient-decrease constant of the Wolfe conditions.
    pub c1: f64,
    /// Curvature constant of the strong Wolfe conditions.
    pub c2: f64,
}

impl Default for BfgsConfig {
    fn default() -> Self {
        Self { max_iterations: 3000, gradient_tolerance: 1e-7, c1: 1e-4, c2: 0.9 }
    }
}

impl BfgsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return input("max_iterations must be at least 1");
        }
        if !(self.gradient_tolerance >= 0.0) {
            return input(format!("gradient tolerance must be nonnegative, got {}", self.gradient_tolerance));
        }
        if !(0.0 < self.c1 && self.c1 < self.c2 && self.c2 < 1.0) {
            return input(format!("need 0 < c1 < c2 < 1, got c1={} c2={}", self.c1, self.c2));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    GradientTolerance,
    MaxIterations,
    LineSearchFailure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BfgsResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub gradient: Vec<f64>,
    pub iterations: usize,
    pub termination: Termination,
}

impl BfgsResult {
    pub fn converged(&self) -> bool {
        self.termination == Termination::GradientTolerance
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

struct Point {
    alpha: f64,
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
    slope: f64,
}

struct Searcher<'a, F> {
    objective: &'a mut F,
    iteration: usize,
}

impl<F> Searcher<'_, F>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    fn eval(&mut self, x: Vec<f64>) -> Result<(Vec<f64>, f64, Vec<f64>)> {
        let (f, g) = (self.objective)(&x)?;
        if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { iteration: self.iteration });
        }
        Ok((x, f, g))
    }

    fn point(&mut self, x0: &[f64], p: &[f64], alpha: f64) -> Result<Point> {
        let x = x0.iter().zip(p).map(|(a, b)| a + alpha * b).collect();
        let (x, f, g) = self.eval(x)?;
        let slope = dot(&g, p);
        Ok(Point { alpha, x, f, g, slope })
    }

    /// Strong Wolfe line search. `None` when no step with sufficient decrease
    /// was found.
    fn line_search(
        &mut self,
        x0: &[f64],
        f0: f64,
        slope0: f64,
        p: &[f64],
        alpha0: f64,
        cfg: &BfgsConfig,
    ) -> Result<Option<Point>> {
        let armijo = |pt: &Point| pt.f <= f0 + cfg.c1 * pt.alpha * slope0;
        let curvature = |pt: &Point| pt.slope.abs() <= -cfg.c2 * slope0;

        let mut prev = Point { alpha: 0.0, x: x0.to_vec(), f: f0, g: Vec::new(), slope: slope0 };
        let mut alpha = alpha0;
        for i in 0..40 {
            let cur = self.point(x0, p, alpha)?;
            if !armijo(&cur) || (i > 0 && cur.f >= prev.f) {
                return self.zoom(x0, f0, slope0, p, prev, cur, cfg);
            }
            if curvature(&cur) {
                return Ok(Some(cur));
            }
            if cur.slope >= 0.0 {
                return self.zoom(x0, f0, slope0, p, cur, prev, cfg);
            }
            alpha *= 2.0;
            prev = cur;
        }
        Ok(if prev.alpha > 0.0 { Some(prev) } else { None })
    }

    #[allow(clippy::too_many_arguments)]
    fn zoom(
        &mut self,
        x0: &[f64],
        f0: f64,
        slope0: f64,
        p: &[f64],
        mut lo: Point,
        mut hi: Point,
        cfg: &BfgsConfig,
    ) -> Result<Option<Point>> {
        for _ in 0..60 {
            let (a, b) = (lo.alpha.min(hi.alpha), lo.alpha.max(hi.alpha));
            let width = b - a;
            if width <= 1e-16 * b.max(1.0) {
                break;
            }
            let trial = cubic_minimizer(&lo, &hi)
                .filter(|t| *t > a + 0.1 * width && *t < b - 0.1 * width)
                .unwrap_or(0.5 * (a + b));
            let cur = self.point(x0, p, trial)?;
            if cur.f > f0 + cfg.c1 * cur.alpha * slope0 || cur.f >= lo.f {
                hi = cur;
            } else {
                if cur.slope.abs() <= -cfg.c2 * slope0 {
                    return Ok(Some(cur));
                }
                if cur.slope * (hi.alpha - lo.alpha) >= 0.0 {
                    hi = std::mem::replace(&mut lo, cur);
                } else {
                    lo = cur;
                }
            }
        }
        // `lo` always satisfies sufficient decrease; take it if it moved
        Ok(if lo.alpha > 0.0 && lo.f < f0 { Some(lo) } else { None })
    }
}

/// Minimizer of the cubic matching values and slopes at both ends.
fn cubic_minimizer(a: &Point, b: &Point) -> Option<f64> {
    let d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
    let disc = d1 * d1 - a.slope * b.slope;
    if disc < 0.0 {
        return None;
    }
    let d2 = (b.alpha - a.alpha).signum() * disc.sqrt();
    let t = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
    t.is_finite().then_some(t)
}

/// Quasi-Newton minimization with a dense inverse-Hessian approximation.
///
/// Every accepted step decreases the objective, so the result is never
/// worse than `x0`. The inverse Hessian restarts from the identity when a
/// line search fails; a second consecutive failure ends the run.
pub fn minimize_bfgs<F>(mut objective: F, x0: &[f64], config: &BfgsConfig) -> Result<BfgsResult>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    config.validate()?;
    if x0.iter().any(|v| !v.is_finite()) {
        return input("initial point is not finite");
    }
    let n = x0.len();
    let mut search = Searcher { objective: &mut objective, iteration: 0 };
    let (mut x, mut f, mut g) = search.eval(x0.to_vec())?;
    let result = |x, f, g, iterations, termination| BfgsResult { x, f, gradient: g, iterations, termination };
    if n == 0 || max_abs(&g) <= config.gradient_tolerance {
        return Ok(result(x, f, g, 0, Termination::GradientTolerance));
    }

    let mut h = identity(n);
    let mut fresh = true;
    for iteration in 1..=config.max_iterations {
        search.iteration = iteration;
        let mut p = mat_vec(&h, &g, n);
        p.iter_mut().for_each(|v| *v = -*v);
        let mut slope = dot(&g, &p);
        if !(slope < 0.0) {
            h = identity(n);
            fresh = true;
            p = g.iter().map(|v| -v).collect();
            slope = dot(&g, &p);
        }
        let alpha0 = if fresh { (1.0 / max_abs(&g)).min(1.0) } else { 1.0 };

        let Some(step) = search.line_search(&x, f, slope, &p, alpha0, config)? else {
            if fresh {
                return Ok(result(x, f, g, iteration, Termination::LineSearchFailure));
            }
            log::debug!("line search failed at iteration {iteration}; resetting inverse Hessian");
            h = identity(n);
            fresh = true;
            continue;
        };

        let s: Vec<f64> = step.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = step.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let ys = dot(&y, &s);
        if ys > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if fresh {
                let scale = ys / dot(&y, &y);
                h.iter_mut().for_each(|v| *v *= scale);
            }
            bfgs_update(&mut h, &s, &y, ys, n);
            fresh = false;
        }
        x = step.x;
        f = step.f;
        g = step.g;
        if max_abs(&g) <= config.gradient_tolerance {
            return Ok(result(x, f, g, iteration, Termination::GradientTolerance));
        }
    }
    Ok(result(x, f, g, config.max_iterations, Termination::MaxIterations))
}

fn identity(n: usize) -> Vec<f64> {
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    h
}

fn mat_vec(h: &[f64], v: &[f64], n: usize) -> Vec<f64> {
    h.chunks_exact(n).map(|row| dot(row, v)).collect()
}

/// `H <- (I - r s y^T) H (I - r y s^T) + r s s^T` with `r = 1 / y.s`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], ys: f64, n: usize) {
    let rho = 1.0 / ys;
    let hy = mat_vec(h, y, n);
    let yhy = dot(y, &hy);
    let k = rho * (1.0 + rho * yhy);
    for i in 0..n {
        let row = &mut h[i * n..(i + 1) * n];
        for j in 0..n {
            row[j] += k * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let r = minimize_bfgs(|x| Ok(((x[0] - 3.0).powi(2), vec![2.0 * (x[0] - 3.0)])), &[0.0], &BfgsConfig::default())
            .unwrap();
        assert!((r.x[0] - 3.0).abs() < 1e-8);
        assert!(r.converged());
    }

    #[test]
    fn rosenbrock() {
        let rosen = |x: &[f64]| {
            let (a, b) = (x[0], x[1]);
            let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
            let g = vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)];
            Ok((f, g))
        };
        let r = minimize_bfgs(rosen, &[-1.2, 1.0], &BfgsConfig::default()).unwrap();
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6, "{:?}", r);
    }

    #[test]
    fn nan_aborts() {
        let r = minimize_bfgs(|x| Ok((x[0].ln(), vec![1.0 / x[0]])), &[1.0], &BfgsConfig::default());
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn bad_config_rejected() {
        let cfg = BfgsConfig { max_iterations: 0, ..Default::default() };
        assert!(minimize_bfgs(|_| Ok((0.0, vec![0.0])), &[0.0], &cfg).is_err());
        let cfg = BfgsConfig { c1: 0.95, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
