//! Dense real polynomials of low degree and the root finders built on them.
//!
//! Coefficients are stored in ascending order, `c[k]` multiplies `x^k`.

use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Poly { coeffs }
    }

    pub fn monomial(c: f64, k: usize) -> Self {
        let mut v = vec![0.0; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Sum of |c_k x^k|; the natural magnitude against which a rounding
    /// residual of `eval(x)` should be judged.
    pub fn abs_scale(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// Synthetic division by `(x - root)`. Returns the quotient and the remainder.
    pub fn deflate(&self, root: f64) -> (Poly, f64) {
        let n = self.coeffs.len();
        if n == 1 {
            return (Poly::new(vec![0.0]), self.coeffs[0]);
        }
        let mut q = vec![0.0; n - 1];
        let mut carry = 0.0;
        for k in (1..n).rev() {
            carry = carry * root + self.coeffs[k];
            q[k - 1] = carry;
        }
        let rem = carry * root + self.coeffs[0];
        (Poly::new(q), rem)
    }

    /// Divides by `x^k`, discarding the `k` lowest coefficients.
    pub fn shift_down(&self, k: usize) -> Poly {
        if k >= self.coeffs.len() {
            return Poly::new(vec![0.0]);
        }
        Poly::new(self.coeffs[k..].to_vec())
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        let mut v = vec![0.0; k];
        v.extend_from_slice(&self.coeffs);
        Poly::new(v)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(0.0)
                        + rhs.coeffs.get(k).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Real roots of a polynomial of degree at most two, ascending.
pub fn quadratic_roots(p: &Poly) -> Vec<f64> {
    let c = p.coeffs();
    match p.degree() {
        0 => vec![],
        1 => vec![-c[0] / c[1]],
        2 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = b * b - 4.0 * a * cc;
            if disc < 0.0 {
                return vec![];
            }
            // Citardauq form avoids cancellation in the smaller root.
            let q = -0.5 * (b + b.signum_nonzero() * disc.sqrt());
            let mut r = if q == 0.0 {
                vec![0.0, 0.0]
            } else {
                vec![q / a, cc / q]
            };
            r.sort_by(f64::total_cmp);
            r
        }
        _ => panic!("quadratic_roots called with degree {}", p.degree()),
    }
}

trait SignumNonzero {
    fn signum_nonzero(self) -> f64;
}

impl SignumNonzero for f64 {
    fn signum_nonzero(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Real roots of a polynomial of degree at most three by closed formulas,
/// each polished with two Newton steps. Ascending, repeated roots collapsed
/// only when the formula itself collapses them.
pub fn cubic_roots_closed_form(p: &Poly) -> Vec<f64> {
    if p.degree() < 3 {
        return quadratic_roots(p);
    }
    let c = p.coeffs();
    let a = c[3];
    let (b, cc, d) = (c[2] / a, c[1] / a, c[0] / a);
    // Depressed cubic y^3 + py + q with x = y - b/3.
    let shift = b / 3.0;
    let pp = cc - b * b / 3.0;
    let qq = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    let disc = (qq / 2.0).powi(2) + (pp / 3.0).powi(3);
    let mut roots = if disc > 0.0 {
        let sq = disc.sqrt();
        let u = (-qq / 2.0 + sq).cbrt();
        let v = (-qq / 2.0 - sq).cbrt();
        vec![u + v - shift]
    } else if pp == 0.0 {
        vec![-shift]
    } else {
        let m = 2.0 * (-pp / 3.0).sqrt();
        let arg = (3.0 * qq / (pp * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .collect()
    };
    let dp = p.derivative();
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let d = dp.eval(*r);
            if d != 0.0 {
                let step = p.eval(*r) / d;
                if step.is_finite() {
                    *r -= step;
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Bisection on a bracket `[lo, hi]` where `f(lo)` and `f(hi)` differ in sign.
/// Runs to floating-point resolution.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Cauchy bound: every real root lies in `[-bound, bound]`.
pub fn root_bound(p: &Poly) -> f64 {
    let c = p.coeffs();
    let lead = c[c.len() - 1].abs();
    1.0 + c[..c.len() - 1]
        .iter()
        .map(|v| v.abs() / lead)
        .fold(0.0, f64::max)
}

/// A feature of a polynomial on the positive axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    /// Transversal sign change.
    SignChange(f64),
    /// Local extremum whose value is zero within tolerance.
    Tangency(f64),
}

impl Crossing {
    pub fn x(self) -> f64 {
        match self {
            Crossing::SignChange(x) | Crossing::Tangency(x) => x,
        }
    }
}

/// How roots inside a monotone bracket are located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootMethod {
    /// Closed-form cubic roots, accepted when they fall inside the bracket.
    #[default]
    ClosedForm,
    /// Plain bisection on the bracket.
    Bisection,
}

/// Zeros of a polynomial of degree at most three on the open interval
/// `(0, upper)`, in increasing order.
///
/// The axis is split at the critical points into monotone pieces. A piece
/// ending at an extremum whose value lies within `tol * abs_scale` of zero
/// reports a tangency there; otherwise a sign change across the piece
/// reports a simple root.
pub fn positive_crossings(p: &Poly, upper: f64, tol: f64, method: RootMethod) -> Vec<Crossing> {
    assert!(p.degree() <= 3, "positive_crossings supports degree <= 3");
    if p.degree() == 0 {
        return vec![];
    }
    let upper = upper.min(root_bound(p) * 2.0);
    let dp = p.derivative();
    let mut breaks: Vec<f64> = quadratic_roots(&dp)
        .into_iter()
        .filter(|&x| x > 0.0 && x < upper)
        .collect();
    breaks.dedup();
    let closed = match method {
        RootMethod::ClosedForm => cubic_roots_closed_form(p),
        RootMethod::Bisection => vec![],
    };

    let is_tangent = |x: f64| p.eval(x).abs() <= tol * p.abs_scale(x);

    let mut out = Vec::new();
    let mut lo = 0.0;
    let mut prev_tangent = false;
    let ends = breaks.iter().map(|&b| (b, true)).chain(std::iter::once((upper, false)));
    for (hi, hi_is_critical) in ends {
        let tangent_hi = hi_is_critical && is_tangent(hi);
        if tangent_hi {
            // The partner of a near-double root inside this piece is
            // collapsed into the tangency.
            out.push(Crossing::Tangency(hi));
        } else if !prev_tangent {
            // A monotone piece leaving a tangency cannot cross zero again.
            let (flo, fhi) = (p.eval(lo), p.eval(hi));
            if flo != 0.0 && (flo < 0.0) != (fhi < 0.0) {
                let root = closed
                    .iter()
                    .copied()
                    .find(|&r| r > lo && r < hi && p.eval(r).abs() <= 1e-10 * p.abs_scale(r))
                    .map(|r| polish_in_bracket(p, &dp, r, lo, hi))
                    .unwrap_or_else(|| bisect(|x| p.eval(x), lo, hi));
                out.push(Crossing::SignChange(root));
            }
        }
        prev_tangent = tangent_hi;
        lo = hi;
    }
    out
}

fn polish_in_bracket(p: &Poly, dp: &Poly, mut x: f64, lo: f64, hi: f64) -> f64 {
    for _ in 0..3 {
        let d = dp.eval(x);
        if d == 0.0 {
            break;
        }
        let next = x - p.eval(x) / d;
        if !(next > lo && next < hi) {
            break;
        }
        x = next;
    }
    x
}
