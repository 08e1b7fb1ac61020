//! The complex-frequency fundamental solution `exp(-s r / c) / (4 pi r)` and
//! the quadrature rules used by the Galerkin surface integrals.
//!
//! Singular panel pairs (coincident, shared edge, shared vertex) are handled
//! by relative-coordinate transforms onto `[0,1]^4` tensor Gauss rules. Each
//! transform's Jacobian vanishes at exactly the rate of the `1/r` kernel
//! singularity, so the mapped integrands are smooth. The reference domain for
//! each triangle is the simplex `0 <= u2 <= u1 <= 1` with chart
//! `p0 + u1 (p1 - p0) + u2 (p2 - p1)`, i.e. barycentric coordinates
//! `(1 - u1, u1 - u2, u2)`.

use nalgebra::Vector3;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::laplace::LaplaceParameter;
use crate::mesh::Point;
use crate::C64;

/// Kernel value and its gradient with respect to the source point.
#[derive(Debug, Clone, Copy)]
pub struct KernelEval {
    pub value: C64,
    pub grad_y: Vector3<C64>,
}

/// `E(x, y) = exp(-s r / c) / (4 pi r)` with `r = |x - y|`.
pub fn eval_kernel(x: &Point, y: &Point, s: &LaplaceParameter, c: f64) -> Result<KernelEval> {
    let d = y - x;
    let r = d.norm();
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let kappa = s.s / c;
    let value = (-kappa * r).exp() / (4.0 * std::f64::consts::PI * r);
    // dE/dr = -E (s/c + 1/r); grad_y = dE/dr * (y - x)/r
    let factor = -value * (kappa + 1.0 / r) / r;
    let grad_y = Vector3::new(factor * d.x, factor * d.y, factor * d.z);
    Ok(KernelEval { value, grad_y })
}

/// Kernel value only.
pub fn kernel_value(x: &Point, y: &Point, s: &LaplaceParameter, c: f64) -> Result<C64> {
    Ok(eval_kernel(x, y, s, c)?.value)
}

/// Normal derivative at the source point, `grad_y E . n_y`.
pub fn kernel_dny(x: &Point, y: &Point, n_y: &Point, s: &LaplaceParameter, c: f64) -> Result<C64> {
    let e = eval_kernel(x, y, s, c)?;
    Ok(e.grad_y.x * n_y.x + e.grad_y.y * n_y.y + e.grad_y.z * n_y.z)
}

/// Normal derivative at the observation point, `grad_x E . n_x`.
pub fn kernel_dnx(x: &Point, y: &Point, n_x: &Point, s: &LaplaceParameter, c: f64) -> Result<C64> {
    // grad_x E = -grad_y E by radial symmetry of the kernel
    let e = eval_kernel(x, y, s, c)?;
    Ok(-(e.grad_y.x * n_x.x + e.grad_y.y * n_x.y + e.grad_y.z * n_x.z))
}

/// Max finite-difference residual of `-lap E + (s/c)^2 E` over a small grid
/// around each probe, second order in the step `h`.
pub fn verify_pde(probes: &[Point], y: &Point, s: &LaplaceParameter, c: f64, h: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let kappa2 = (s.s / c) * (s.s / c);
    for x in probes {
        let center = kernel_value(x, y, s, c)?;
        let mut lap = Complex::new(0.0, 0.0);
        for axis in 0..3 {
            let mut e = Vector3::zeros();
            e[axis] = h;
            let plus = kernel_value(&(x + e), y, s, c)?;
            let minus = kernel_value(&(x - e), y, s, c)?;
            lap += (plus - center * 2.0 + minus) / (h * h);
        }
        let residual = (-lap + kappa2 * center).norm();
        worst = worst.max(residual);
    }
    Ok(worst)
}

// ------------------------------------------------------------------
// Gauss-Legendre and regular triangle rules
// ------------------------------------------------------------------

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        // Newton iteration from the Chebyshev estimate
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[n - 1 - k] = 0.5 * (x + 1.0);
        weights[n - 1 - k] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Quadrature rule on a single reference triangle, points in barycentric
/// coordinates, weights summing to the reference area 1/2.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

/// Collapsed tensor-product rule with `n^2` positive-weight points.
pub fn triangle_rule(n: usize) -> TriangleRule {
    let (gx, gw) = gauss_legendre(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // simplex 0 <= u2 <= u1 <= 1: u1 = gi, u2 = gi * gj
            let u1 = gx[i];
            let u2 = gx[i] * gx[j];
            points.push([1.0 - u1, u1 - u2, u2]);
            weights.push(gw[i] * gw[j] * gx[i]);
        }
    }
    TriangleRule { points, weights }
}

impl TriangleRule {
    /// Maps a barycentric point onto a physical triangle.
    pub fn physical_point(bary: &[f64; 3], v: &[Point; 3]) -> Point {
        v[0] * bary[0] + v[1] * bary[1] + v[2] * bary[2]
    }
}

// ------------------------------------------------------------------
// singular pair rules
// ------------------------------------------------------------------

/// Adjacency class of a panel pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairKind {
    Regular,
    SharedVertex,
    SharedEdge,
    Coincident,
}

/// Quadrature rule for a Galerkin double integral over a pair of reference
/// triangles. Points are barycentric with respect to the aligned vertex
/// order (shared features first); weights sum to the 4-dimensional reference
/// volume 1/4 and scale by `(2 A_x)(2 A_y)` in physical space.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: PairKind,
    pub x_points: Vec<[f64; 3]>,
    pub y_points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

fn bary(u1: f64, u2: f64) -> [f64; 3] {
    [1.0 - u1, u1 - u2, u2]
}

/// Builds the pair rule for the given adjacency class at the given order
/// (Gauss points per tensor direction).
pub fn singular_rule(kind: PairKind, order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > 30 {
        return Err(Error::UnsupportedOrder {
            kind: format!("{kind:?}"),
            order,
        });
    }
    let n = order;
    let (g, gw) = gauss_legendre(n);
    let mut rule = QuadratureRule {
        kind,
        x_points: Vec::new(),
        y_points: Vec::new(),
        weights: Vec::new(),
    };
    let mut push = |x: [f64; 2], y: [f64; 2], w: f64| {
        debug_assert!(w > 0.0);
        rule.x_points.push(bary(x[0], x[1]));
        rule.y_points.push(bary(y[0], y[1]));
        rule.weights.push(w);
    };

    match kind {
        PairKind::Regular => {
            // plain tensor product of two collapsed triangle rules
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let x = [g[i], g[i] * g[j]];
                            let y = [g[k], g[k] * g[l]];
                            let w = gw[i] * gw[j] * g[i] * gw[k] * gw[l] * g[k];
                            push(x, y, w);
                        }
                    }
                }
            }
        }
        PairKind::Coincident => {
            // six sub-maps: the three orderings below and their x/y swaps
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let (w0, e1, e2, t) = (g[i], g[j], g[k], g[l]);
                            let base = gw[i] * gw[j] * gw[k] * gw[l];
                            let jac = w0.powi(3) * e1 * (1.0 - e1) * base;
                            // x1 >= y1, x2 >= y2, x1-y1 >= x2-y2
                            let xa = [w0, w0 * (e1 * e2 + (1.0 - e1) * t)];
                            let ya = [w0 * (1.0 - e1), w0 * (1.0 - e1) * t];
                            // x1 >= y1, x2 >= y2, x2-y2 > x1-y1
                            let xb = [w0, w0 * (e1 + (1.0 - e1) * t)];
                            let yb = [w0 * (1.0 - e1 * e2), w0 * (1.0 - e1) * t];
                            // x1 >= y1, x2 < y2
                            let xc = [w0, w0 * (1.0 - e1) * t];
                            let yc = [
                                w0 * (1.0 - e1 * e2),
                                w0 * ((1.0 - e1) * t + e1 * (1.0 - e2)),
                            ];
                            for (x, y) in [(xa, ya), (xb, yb), (xc, yc)] {
                                push(x, y, jac);
                                push(y, x, jac);
                            }
                        }
                    }
                }
            }
        }
        PairKind::SharedEdge => {
            // shared edge is (p0, p1) of both charts; four sub-maps for the
            // branch x1 >= y1 plus their swaps
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let base = gw[i] * gw[j] * gw[k] * gw[l];
                            // E1: the edge offset dominates
                            {
                                let (w0, eta, x1p, x2p) = (g[i], g[j], g[k], g[l]);
                                let delta = w0 * eta / (1.0 + x2p);
                                let x = [w0, delta * x1p];
                                let y = [w0 - delta, delta * x2p];
                                let jac = w0.powi(3) * eta * eta / (1.0 + x2p).powi(3) * base;
                                push(x, y, jac);
                                push(y, x, jac);
                            }
                            // E2a: test-height dominates, small tangent block
                            {
                                let (w0, eta, a, b) = (g[i], g[j], g[k], g[l]);
                                let m = w0 * eta;
                                let t = a * (1.0 - b);
                                let xi = a * b;
                                let x = [w0, m];
                                let y = [w0 - m * t, m * xi];
                                let jac = w0.powi(3) * eta * eta * a * base;
                                push(x, y, jac);
                                push(y, x, jac);
                            }
                            // E2b: test-height dominates, large tangent block
                            {
                                let (w0, eta, a, b) = (g[i], g[j], g[k], g[l]);
                                let t = 1.0 - a * b;
                                let xi = 1.0 - a * (1.0 - b);
                                let m = w0 * eta / (2.0 - a);
                                let x = [w0, m];
                                let y = [w0 - m * t, m * xi];
                                let jac = w0.powi(3) * eta * eta * a / (2.0 - a).powi(3) * base;
                                push(x, y, jac);
                                push(y, x, jac);
                            }
                            // E3: trial-height dominates
                            {
                                let (w0, eta, t, xi) = (g[i], g[j], g[k], g[l]);
                                let m = w0 * eta / (1.0 + t);
                                let x = [w0, m * xi];
                                let y = [w0 - m * t, m];
                                let jac = w0.powi(3) * eta * eta / (1.0 + t).powi(3) * base;
                                push(x, y, jac);
                                push(y, x, jac);
                            }
                        }
                    }
                }
            }
        }
        PairKind::SharedVertex => {
            // shared vertex is p0 of both charts
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let (w0, b1, a, b2) = (g[i], g[j], g[k], g[l]);
                            let jac = w0.powi(3) * a * gw[i] * gw[j] * gw[k] * gw[l];
                            let x = [w0, w0 * b1];
                            let y = [w0 * a, w0 * a * b2];
                            push(x, y, jac);
                            push(y, x, jac);
                        }
                    }
                }
            }
        }
    }
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_value_at_unit_distance() {
        let s = LaplaceParameter::real(1.0).unwrap();
        let x = Point::new(0.0, 0.0, 0.0);
        let y = Point::new(1.0, 0.0, 0.0);
        // s = c = 1, r = 1: exp(-1)/(4 pi)
        let e = eval_kernel(&x, &y, &s, 1.0).unwrap();
        let expected = (-1.0f64).exp() / (4.0 * std::f64::consts::PI);
        assert!((e.value.re - expected).abs() < 1e-12);
        assert!((expected - 0.0292764).abs() < 1e-6);
        assert!(e.value.im.abs() < 1e-16);
    }

    #[test]
    fn static_limit_is_laplace_kernel() {
        let s = LaplaceParameter::real(1e-8).unwrap();
        let x = Point::new(0.2, -0.3, 0.4);
        let y = Point::new(-0.5, 0.1, 0.0);
        let r = (x - y).norm();
        let e = eval_kernel(&x, &y, &s, 1.0).unwrap();
        let laplace = 1.0 / (4.0 * std::f64::consts::PI * r);
        assert!((e.value.re - laplace).abs() / laplace < 1e-7);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let s = LaplaceParameter::new(Complex::new(1.3, -2.1)).unwrap();
        let c = 1.7;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let x = Point::new(rng.gen(), rng.gen(), rng.gen());
            let y = x + Point::new(rng.gen::<f64>() + 0.3, rng.gen(), rng.gen());
            let e = eval_kernel(&x, &y, &s, c).unwrap();
            let h = 1e-5;
            for axis in 0..3 {
                let mut dy = Vector3::zeros();
                dy[axis] = h;
                let plus = kernel_value(&x, &(y + dy), &s, c).unwrap();
                let minus = kernel_value(&x, &(y - dy), &s, c).unwrap();
                let fd = (plus - minus) / (2.0 * h);
                let err = (e.grad_y[axis] - fd).norm() / (1.0 + fd.norm());
                assert!(err < 1e-6, "axis {axis}: err {err}");
            }
        }
    }

    #[test]
    fn kernel_symmetry_and_decay() {
        let s = LaplaceParameter::new(Complex::new(0.8, 3.0)).unwrap();
        let c = 1.2;
        let x = Point::new(0.1, 0.2, 0.3);
        let y = Point::new(1.0, -0.4, 0.2);
        let exy = kernel_value(&x, &y, &s, c).unwrap();
        let eyx = kernel_value(&y, &x, &s, c).unwrap();
        assert_eq!(exy, eyx);
        // magnitude bound and monotone decay along a ray
        let dir = (y - x).normalize();
        let mut last = f64::INFINITY;
        for k in 1..20 {
            let r = 0.3 * k as f64;
            let v = kernel_value(&x, &(x + dir * r), &s, c).unwrap().norm();
            let bound = (-s.sigma * r / c).exp() / (4.0 * std::f64::consts::PI * r);
            assert!(v <= bound * (1.0 + 1e-12));
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn pde_residual_second_order() {
        let s = LaplaceParameter::new(Complex::new(1.0, 1.0)).unwrap();
        let c = 1.0;
        let y = Point::new(0.0, 0.0, 0.0);
        let probes = vec![
            Point::new(1.0, 0.0, 0.0),
            Point::new(0.6, 0.6, 0.3),
            Point::new(0.0, -0.9, 0.5),
        ];
        let r1 = verify_pde(&probes, &y, &s, c, 0.02).unwrap();
        let r2 = verify_pde(&probes, &y, &s, c, 0.01).unwrap();
        let ratio = r1 / r2;
        assert!(ratio > 2.8 && ratio < 5.2, "ratio {ratio}");
        let r3 = verify_pde(&[Point::new(1.0, 0.0, 0.0)], &y, &s, c, 0.005).unwrap();
        assert!(r3 < 1e-2);
    }

    #[test]
    fn regular_triangle_rule_sums_to_area() {
        for n in [1, 2, 4, 8] {
            let r = triangle_rule(n);
            let total: f64 = r.weights.iter().sum();
            assert!((total - 0.5).abs() < 1e-14, "n = {n}: {total}");
            assert!(r.weights.iter().all(|&w| w > 0.0));
            for p in &r.points {
                assert!(p.iter().all(|&b| b >= 0.0 && b <= 1.0));
                assert!((p[0] + p[1] + p[2] - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn pair_rules_sum_to_reference_volume() {
        for kind in [
            PairKind::Regular,
            PairKind::SharedVertex,
            PairKind::SharedEdge,
            PairKind::Coincident,
        ] {
            let r = singular_rule(kind, 6).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert!(
                (total - 0.25).abs() < 1e-12,
                "{kind:?}: weight sum {total}"
            );
            assert!(r.weights.iter().all(|&w| w > 0.0));
        }
        assert!(singular_rule(PairKind::Coincident, 0).is_err());
    }

    /// The transformed rules must reproduce plain tensor quadrature on any
    /// smooth integrand; this validates maps and Jacobians together.
    #[test]
    fn pair_rules_integrate_smooth_functions() {
        let f = |x: &[f64; 3], y: &[f64; 3]| {
            (1.3 + x[1] + 0.7 * y[2]).powi(2) * (x[0] * y[1] + 0.25).sqrt()
        };
        let reference = {
            let r = singular_rule(PairKind::Regular, 24).unwrap();
            let mut acc = 0.0;
            for q in 0..r.weights.len() {
                acc += r.weights[q] * f(&r.x_points[q], &r.y_points[q]);
            }
            acc
        };
        for kind in [
            PairKind::SharedVertex,
            PairKind::SharedEdge,
            PairKind::Coincident,
        ] {
            let r = singular_rule(kind, 14).unwrap();
            let mut acc = 0.0;
            for q in 0..r.weights.len() {
                acc += r.weights[q] * f(&r.x_points[q], &r.y_points[q]);
            }
            assert!(
                (acc - reference).abs() < 1e-6 * reference.abs(),
                "{kind:?}: {acc} vs {reference}"
            );
        }
    }

    /// Monte-Carlo oracle for the 1/r integral over two copies of a physical
    /// triangle pair; the transformed rule must land inside 3 sigma.
    #[test]
    fn coincident_one_over_r_matches_monte_carlo() {
        let v = [
            Point::new(0.0, 0.0, 0.0),
            Point::new(1.0, 0.0, 0.0),
            Point::new(0.0, 1.0, 0.0),
        ];
        let chart = |b: &[f64; 3]| v[0] * b[0] + v[1] * b[1] + v[2] * b[2];
        let area = 0.5;
        let jac = (2.0 * area) * (2.0 * area);

        let rule = singular_rule(PairKind::Coincident, 8).unwrap();
        let mut quad = 0.0;
        for q in 0..rule.weights.len() {
            let x = chart(&rule.x_points[q]);
            let y = chart(&rule.y_points[q]);
            quad += rule.weights[q] / (x - y).norm();
        }
        quad *= jac;

        let mut rng = ChaCha8Rng::seed_from_u64(12345);
        let n = 1_000_000usize;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let (a1, b1): (f64, f64) = (rng.gen(), rng.gen());
            let (a2, b2): (f64, f64) = (rng.gen(), rng.gen());
            // uniform on the triangle via reflection
            let (u1, u2) = if a1 + b1 <= 1.0 { (a1, b1) } else { (1.0 - a1, 1.0 - b1) };
            let (u3, u4) = if a2 + b2 <= 1.0 { (a2, b2) } else { (1.0 - a2, 1.0 - b2) };
            let x = v[0] * (1.0 - u1 - u2) + v[1] * u1 + v[2] * u2;
            let y = v[0] * (1.0 - u3 - u4) + v[1] * u3 + v[2] * u4;
            let val = 1.0 / (x - y).norm();
            sum += val;
            sum_sq += val * val;
        }
        let mean = sum / n as f64;
        let var = (sum_sq / n as f64 - mean * mean).max(0.0);
        let mc = mean * area * area;
        let sigma = (var / n as f64).sqrt() * area * area;
        assert!(
            (quad - mc).abs() < 3.0 * sigma,
            "quad {quad}, mc {mc}, sigma {sigma}"
        );
    }

    /// Raising the order on a nearly touching pair must cut the error.
    #[test]
    fn order_increase_improves_near_singular_pair() {
        let vx = [
            Point::new(0.0, 0.0, 0.0),
            Point::new(1.0, 0.0, 0.0),
            Point::new(0.0, 1.0, 0.0),
        ];
        let vy = [
            Point::new(0.0, 0.0, 0.05),
            Point::new(1.0, 0.0, 0.05),
            Point::new(0.0, 1.0, 0.05),
        ];
        let eval = |order: usize| {
            let r = singular_rule(PairKind::Regular, order).unwrap();
            let mut acc = 0.0;
            for q in 0..r.weights.len() {
                let x = TriangleRule::physical_point(&r.x_points[q], &vx);
                let y = TriangleRule::physical_point(&r.y_points[q], &vy);
                acc += r.weights[q] / (x - y).norm();
            }
            acc
        };
        let coarse = eval(4);
        let fine = eval(8);
        let truth = eval(26);
        let e_coarse = (coarse - truth).abs();
        let e_fine = (fine - truth).abs();
        assert!(
            e_fine * 10.0 <= e_coarse,
            "coarse err {e_coarse}, fine err {e_fine}"
        );
    }

    #[test]
    fn coincident_points_error() {
        let s = LaplaceParameter::real(1.0).unwrap();
        let p = Point::new(0.5, 0.5, 0.5);
        assert!(matches!(
            eval_kernel(&p, &p, &s, 1.0),
            Err(Error::CoincidentPoints)
        ));
    }
}
