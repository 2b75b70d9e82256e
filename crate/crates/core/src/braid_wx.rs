//! The geometric braiding on two copies of the dual group.
//!
//! Two independent routes to the same morphism:
//!
//! * [`closed_form`] writes down the six coordinate images directly, in
//!   terms of the square-root unit `theta`;
//! * [`matrix_pipeline`] redoes the matrix factorization symbolically:
//!   push both points into the big cell, conjugate, split back through the
//!   plus-branch section, and read off the images.
//!
//! A numeric layer evaluates the same formulas at complex points of the
//! matrix-pair realization and cross-checks the product intertwining
//! property, the Yang-Baxter identity for point maps, and the Poisson-map
//! property by central finite differences.

use num::complex::Complex64;
use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hopf::AlgebraMorphism;
use crate::series::{RingSignature, Series};
use crate::{Error, Result};

fn sig2() -> RingSignature {
    RingSignature::new(2)
}

/// `theta = (1 + x1 z1 z2^-1 y2)^(1/2)`, the unit controlling every
/// closed-form image; constant term 1.
pub fn theta(order: usize) -> Series {
    let s = sig2();
    let inner = Series::var(s, order, s.x(0))
        .mul(&Series::z_power(s, order, 0, 1))
        .mul(&Series::z_power(s, order, 1, -1))
        .mul(&Series::var(s, order, s.y(1)));
    Series::one(s, order)
        .add(&inner)
        .sqrt_unit()
        .expect("constant term is 1")
}

/// The braiding in closed form.  Writing `t = theta`:
///
/// ```text
/// x1 |-> x1 z2^-2 t^-1          z1 |-> z1 t^-1          y2 |-> y2 z1^+2 t^-1
/// y1 |-> y1 z2^+2 t + y2 z2 z1^-1 t - y2 z2 z1^+3 t^-1
/// x2 |-> x2 z1^-2 t + x1 z1^-1 z2 t - x1 z1^-1 z2^-3 t^-1
/// z2 |-> z2 t
/// ```
pub fn closed_form(order: usize) -> AlgebraMorphism {
    let s = sig2();
    let n = order;
    let t = theta(n);
    let t_inv = t.invert_unit().expect("theta is a unit");
    let x1 = Series::var(s, n, s.x(0));
    let y1 = Series::var(s, n, s.y(0));
    let x2 = Series::var(s, n, s.x(1));
    let y2 = Series::var(s, n, s.y(1));
    let one = Series::one(s, n);
    let z = |factor: usize, k: i64| Series::z_power(s, n, factor, k);

    let images = vec![
        // x1
        x1.mul(&z(1, -2)).mul(&t_inv),
        // w1 = z1 t^-1 - 1
        z(0, 1).mul(&t_inv).sub(&one),
        // y1
        y1.mul(&z(1, 2))
            .mul(&t)
            .add(&y2.mul(&z(1, 1)).mul(&z(0, -1)).mul(&t))
            .sub(&y2.mul(&z(1, 1)).mul(&z(0, 3)).mul(&t_inv)),
        // x2
        x2.mul(&z(0, -2))
            .mul(&t)
            .add(&x1.mul(&z(0, -1)).mul(&z(1, 1)).mul(&t))
            .sub(&x1.mul(&z(0, -1)).mul(&z(1, -3)).mul(&t_inv)),
        // w2 = z2 t - 1
        z(1, 1).mul(&t).sub(&one),
        // y2
        y2.mul(&z(0, 2)).mul(&t_inv),
    ];
    AlgebraMorphism::new(s, s, images).expect("closed-form images are pointed")
}

/// A 2x2 matrix of series over the 2-factor ring.
#[derive(Clone)]
pub struct SeriesMatrix2x2 {
    pub a: Series,
    pub b: Series,
    pub c: Series,
    pub d: Series,
}

impl SeriesMatrix2x2 {
    pub fn new(a: Series, b: Series, c: Series, d: Series) -> Self {
        SeriesMatrix2x2 { a, b, c, d }
    }

    pub fn mul(&self, o: &SeriesMatrix2x2) -> SeriesMatrix2x2 {
        SeriesMatrix2x2 {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn det(&self) -> Series {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// Inverse of a determinant-1 matrix (the adjugate).
    pub fn inverse_det1(&self) -> SeriesMatrix2x2 {
        SeriesMatrix2x2 {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub fn is_det_one(&self) -> bool {
        let sig = self.a.signature();
        let order = self.det().order();
        self.det() == Series::one(sig, order)
    }
}

/// Split a determinant-1 matrix `g` with unit lower-right entry through
/// the plus-branch section of the factorization: returns `(minus, plus)`
/// with `g = plus . minus^-1`,
///
/// ```text
/// minus = (A^-1  0; -c A  A)      plus = (A  b A; 0  A^-1)      A = d^(-1/2).
/// ```
fn split_plus_branch(g: &SeriesMatrix2x2) -> (SeriesMatrix2x2, SeriesMatrix2x2) {
    let sig = g.a.signature();
    let order = g.a.order();
    let a_cap = g
        .d
        .sqrt_unit()
        .expect("lower-right entry must have constant term 1")
        .invert_unit()
        .expect("square root of a unit is a unit");
    let a_inv = a_cap.invert_unit().unwrap();
    let one = Series::one(sig, order);
    debug_assert_eq!(a_cap.mul(&a_inv), one);
    let minus = SeriesMatrix2x2::new(
        a_inv.clone(),
        Series::zero(sig, order),
        g.c.neg().mul(&a_cap),
        a_cap.clone(),
    );
    let plus = SeriesMatrix2x2::new(a_cap.clone(), g.b.mul(&a_cap), Series::zero(sig, order), a_inv);
    (minus, plus)
}

/// The big-cell image of the generic point of factor `which` (0 or 1):
/// `J(p) = plus(p) . minus(p)^-1 = (z^2 - x y, z^-1 x; -z^-1 y, z^-2)`.
fn big_cell_image(order: usize, which: usize) -> SeriesMatrix2x2 {
    let s = sig2();
    let x = Series::var(s, order, s.x(which));
    let y = Series::var(s, order, s.y(which));
    let z = |k: i64| Series::z_power(s, order, which, k);
    SeriesMatrix2x2::new(
        z(2).sub(&x.mul(&y)),
        z(-1).mul(&x),
        z(-1).mul(&y).neg(),
        z(-2),
    )
}

/// The braiding recomputed through the matrix factorization.
///
/// Steps, all with determinant-1 intermediates (asserted):
/// 1. `big1 = J(point 1)`, `minus2 = (z2^-1, 0; y2, z2)`;
/// 2. conjugate: `k = minus2 . big1 . minus2^-1`, split `k` on the plus
///    branch; the minus/plus parts carry the first image point;
/// 3. `l = plus(k)^-1 . J(point 2) . plus(k)`, split `l`; the parts carry
///    the second image point;
/// 4. read the coordinate images off the matrix-pair realization
///    `((z^-1, 0; y, z), (z, x; 0, z^-1))`.
pub fn matrix_pipeline(order: usize) -> AlgebraMorphism {
    let s = sig2();
    let n = order;
    let one = Series::one(s, n);

    let big1 = big_cell_image(n, 0);
    assert!(big1.is_det_one(), "big-cell image must have determinant 1");
    let minus2 = SeriesMatrix2x2::new(
        Series::z_power(s, n, 1, -1),
        Series::zero(s, n),
        Series::var(s, n, s.y(1)),
        Series::z_power(s, n, 1, 1),
    );
    let k = minus2.mul(&big1).mul(&minus2.inverse_det1());
    assert!(k.is_det_one(), "conjugation preserves determinant");
    let (k_minus, k_plus) = split_plus_branch(&k);
    assert!(k_minus.is_det_one() && k_plus.is_det_one());

    let big2 = big_cell_image(n, 1);
    assert!(big2.is_det_one());
    let l = k_plus.inverse_det1().mul(&big2).mul(&k_plus);
    assert!(l.is_det_one());
    let (l_minus, l_plus) = split_plus_branch(&l);
    assert!(l_minus.is_det_one() && l_plus.is_det_one());

    // First image point: minus part (z^-1, 0; y, z), plus part (z, x; 0, z^-1).
    let images = vec![
        k_plus.b.clone(),             // x1 image
        k_minus.d.sub(&one),          // w1 image, z = lower-right of minus part
        k_minus.c.clone(),            // y1 image
        l_plus.b.clone(),             // x2 image
        l_minus.d.sub(&one),          // w2 image
        l_minus.c.clone(),            // y2 image
    ];
    AlgebraMorphism::new(s, s, images).expect("pipeline images are pointed")
}

/// A complex point of two copies of the dual group, coordinates
/// `(x_i, z_i, y_i)` with `z_i != 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupPoint {
    pub x1: Complex64,
    pub z1: Complex64,
    pub y1: Complex64,
    pub x2: Complex64,
    pub z2: Complex64,
    pub y2: Complex64,
}

impl GroupPoint {
    pub fn identity() -> Self {
        GroupPoint {
            x1: Complex64::ZERO,
            z1: Complex64::ONE,
            y1: Complex64::ZERO,
            x2: Complex64::ZERO,
            z2: Complex64::ONE,
            y2: Complex64::ZERO,
        }
    }

    fn coords(&self) -> [Complex64; 6] {
        [self.x1, self.z1, self.y1, self.x2, self.z2, self.y2]
    }

    fn from_coords(c: [Complex64; 6]) -> Self {
        GroupPoint {
            x1: c[0],
            z1: c[1],
            y1: c[2],
            x2: c[3],
            z2: c[4],
            y2: c[5],
        }
    }
}

/// One factor's matrix pair `((z^-1, 0; y, z), (z, x; 0, z^-1))`.
#[derive(Clone, Copy, Debug)]
pub struct MatrixPair {
    pub minus: [[Complex64; 2]; 2],
    pub plus: [[Complex64; 2]; 2],
}

impl MatrixPair {
    pub fn from_factor(x: Complex64, z: Complex64, y: Complex64) -> Self {
        let zi = z.inv();
        MatrixPair {
            minus: [[zi, Complex64::ZERO], [y, z]],
            plus: [[z, x], [Complex64::ZERO, zi]],
        }
    }

    /// Componentwise product (the group law of the pair realization).
    pub fn mul(&self, o: &MatrixPair) -> MatrixPair {
        MatrixPair {
            minus: mat_mul(&self.minus, &o.minus),
            plus: mat_mul(&self.plus, &o.plus),
        }
    }

    pub fn max_determinant_defect(&self) -> f64 {
        let d1 = det2(&self.minus) - Complex64::ONE;
        let d2 = det2(&self.plus) - Complex64::ONE;
        d1.norm().max(d2.norm())
    }
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn det2(m: &[[Complex64; 2]; 2]) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Evaluate the closed-form braiding at a point, with the principal square
/// root for `theta`.  Fails on the divisor where the square-root factor
/// vanishes.
pub fn numeric_map(p: &GroupPoint) -> Result<GroupPoint> {
    let theta_sq = Complex64::ONE + p.x1 * p.z1 * p.z2.inv() * p.y2;
    if theta_sq.norm() < 1e-14 {
        return Err(Error::ThetaDivisor);
    }
    let t = theta_sq.sqrt();
    let ti = t.inv();
    let z1i = p.z1.inv();
    let z2i = p.z2.inv();
    Ok(GroupPoint {
        x1: p.x1 * z2i * z2i * ti,
        z1: p.z1 * ti,
        y1: p.y1 * p.z2 * p.z2 * t + p.y2 * p.z2 * z1i * t - p.y2 * p.z2 * p.z1.powi(3) * ti,
        x2: p.x2 * z1i * z1i * t + p.x1 * z1i * p.z2 * t - p.x1 * z1i * z2i.powi(3) * ti,
        z2: p.z2 * t,
        y2: p.y2 * p.z1 * p.z1 * ti,
    })
}

/// The numeric Poisson bivector on one point of the 2-factor group,
/// returned as the antisymmetric matrix over the coordinate order
/// `(x1, z1, y1, x2, z2, y2)`:
/// `{x, z} = x z / 2`, `{x, y} = z^2 - z^-2`, `{z, y} = z y / 2` per
/// factor, zero across factors (same table as [`crate::poisson`]).
fn bivector_at(c: &[Complex64; 6]) -> [[Complex64; 6]; 6] {
    let mut pi = [[Complex64::ZERO; 6]; 6];
    for f in 0..2 {
        let (x, z, y) = (c[3 * f], c[3 * f + 1], c[3 * f + 2]);
        let half = Complex64::new(0.5, 0.0);
        let xz = x * z * half;
        let xy = z.powi(2) - z.powi(-2);
        let zy = z * y * half;
        pi[3 * f][3 * f + 1] = xz;
        pi[3 * f + 1][3 * f] = -xz;
        pi[3 * f][3 * f + 2] = xy;
        pi[3 * f + 2][3 * f] = -xy;
        pi[3 * f + 1][3 * f + 2] = zy;
        pi[3 * f + 2][3 * f + 1] = -zy;
    }
    pi
}

/// Residuals of one sampled point.
#[derive(Clone, Copy, Debug)]
pub struct SampleResiduals {
    pub product_intertwine: f64,
    pub qybe: f64,
    pub poisson_map: f64,
}

/// Aggregate outcome of the numeric suite.
#[derive(Clone, Debug)]
pub struct NumericReport {
    pub samples: usize,
    pub max_product_intertwine: f64,
    pub max_qybe: f64,
    pub max_poisson_map: f64,
    pub divisor_failures: usize,
    pub rows: Vec<(usize, GroupPoint, SampleResiduals)>,
}

fn disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    let phi = rng.random::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, phi)
}

/// Sample a point with `|x|, |y| <= 0.2` and `|z - 1| <= 0.1` per factor,
/// keeping the square-root factor near 1 (single branch).
fn sample_point(rng: &mut ChaCha8Rng) -> GroupPoint {
    let mut coord = [Complex64::ZERO; 6];
    for f in 0..2 {
        coord[3 * f] = disc(rng, 0.2);
        coord[3 * f + 1] = Complex64::ONE + disc(rng, 0.1);
        coord[3 * f + 2] = disc(rng, 0.2);
    }
    GroupPoint::from_coords(coord)
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

/// Residual of `m . map = m-op` at `p`: the matrix pairs of
/// `map(p).1 * map(p).2` and of `p.2 * p.1` must agree.
pub fn product_intertwine_residual(p: &GroupPoint) -> Result<f64> {
    let q = numeric_map(p)?;
    let u = MatrixPair::from_factor(p.x1, p.z1, p.y1);
    let v = MatrixPair::from_factor(p.x2, p.z2, p.y2);
    let u2 = MatrixPair::from_factor(q.x1, q.z1, q.y1);
    let v2 = MatrixPair::from_factor(q.x2, q.z2, q.y2);
    let lhs = u2.mul(&v2);
    let rhs = v.mul(&u);
    let mut max = 0.0f64;
    for (a, b) in [(&lhs.minus, &rhs.minus), (&lhs.plus, &rhs.plus)] {
        for i in 0..2 {
            for j in 0..2 {
                max = max.max(rel((a[i][j] - b[i][j]).norm(), b[i][j].norm()));
            }
        }
    }
    Ok(max)
}

type Triple = (GroupPoint, GroupPoint, GroupPoint);

fn map_pair(a: GroupPoint) -> Result<GroupPoint> {
    numeric_map(&a)
}

fn leg12(t: &Triple) -> Result<Triple> {
    let joined = GroupPoint {
        x1: t.0.x1,
        z1: t.0.z1,
        y1: t.0.y1,
        x2: t.1.x1,
        z2: t.1.z1,
        y2: t.1.y1,
    };
    let m = map_pair(joined)?;
    Ok((
        GroupPoint {
            x1: m.x1,
            z1: m.z1,
            y1: m.y1,
            ..t.0
        },
        GroupPoint {
            x1: m.x2,
            z1: m.z2,
            y1: m.y2,
            ..t.1
        },
        t.2,
    ))
}

fn leg23(t: &Triple) -> Result<Triple> {
    let rotated = (t.1, t.2, t.0);
    let m = leg12(&rotated)?;
    Ok((m.2, m.0, m.1))
}

fn leg13(t: &Triple) -> Result<Triple> {
    let swapped = (t.0, t.2, t.1);
    let m = leg12(&swapped)?;
    Ok((m.0, m.2, m.1))
}

fn triple_distance(a: &Triple, b: &Triple) -> f64 {
    let mut max = 0.0f64;
    for (p, q) in [(&a.0, &b.0), (&a.1, &b.1), (&a.2, &b.2)] {
        for (u, v) in p.coords().iter().zip(q.coords().iter()) {
            max = max.max(rel((u - v).norm(), v.norm()));
        }
    }
    max
}

/// Residual of the pointwise Yang-Baxter identity
/// `map12 . map13 . map23 = map23 . map13 . map12` at a sampled triple.
pub fn qybe_residual(t: &Triple) -> Result<f64> {
    let lhs = leg12(&leg13(&leg23(t)?)?)?;
    let rhs = leg23(&leg13(&leg12(t)?)?)?;
    Ok(triple_distance(&lhs, &rhs))
}

/// Residual of the Poisson-map property over all 15 coordinate pairs,
/// with central finite differences of step `h` for the composed map.
pub fn poisson_map_residual(p: &GroupPoint, h: f64) -> Result<f64> {
    let c = p.coords();
    // Jacobian of the map by central differences, real direction (the map
    // is holomorphic, so this is the complex derivative).
    let mut jac = [[Complex64::ZERO; 6]; 6];
    for k in 0..6 {
        let mut plus = c;
        plus[k] += Complex64::new(h, 0.0);
        let mut minus = c;
        minus[k] -= Complex64::new(h, 0.0);
        let fp = numeric_map(&GroupPoint::from_coords(plus))?.coords();
        let fm = numeric_map(&GroupPoint::from_coords(minus))?.coords();
        for j in 0..6 {
            jac[j][k] = (fp[j] - fm[j]) / Complex64::new(2.0 * h, 0.0);
        }
    }
    let pi_at_p = bivector_at(&c);
    let image = numeric_map(p)?.coords();
    let pi_at_image = bivector_at(&image);

    let mut max = 0.0f64;
    for a in 0..6 {
        for b in (a + 1)..6 {
            // {F_a . R, F_b . R}(p) = sum_{k,l} pi^{kl}(p) dR_a/dk dR_b/dl
            let mut lhs = Complex64::ZERO;
            for k in 0..6 {
                for l in 0..6 {
                    if !pi_at_p[k][l].is_zero() {
                        lhs += pi_at_p[k][l] * jac[a][k] * jac[b][l];
                    }
                }
            }
            let rhs = pi_at_image[a][b];
            max = max.max(rel((lhs - rhs).norm(), rhs.norm()));
        }
    }
    Ok(max)
}

/// Run the full numeric suite: `samples` pseudo-random points (the RNG
/// stream is split by sample index so results are reproducible and order
/// independent), residuals of the three checks per point.
pub fn numeric_checks(samples: usize, seed: u64, fd_step: f64) -> NumericReport {
    let mut report = NumericReport {
        samples,
        max_product_intertwine: 0.0,
        max_qybe: 0.0,
        max_poisson_map: 0.0,
        divisor_failures: 0,
        rows: Vec::with_capacity(samples),
    };
    for idx in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64);
        let p = sample_point(&mut rng);
        let third = sample_point(&mut rng);
        let triple = (
            GroupPoint {
                x1: p.x1,
                z1: p.z1,
                y1: p.y1,
                ..GroupPoint::identity()
            },
            GroupPoint {
                x1: p.x2,
                z1: p.z2,
                y1: p.y2,
                ..GroupPoint::identity()
            },
            GroupPoint {
                x1: third.x1,
                z1: third.z1,
                y1: third.y1,
                ..GroupPoint::identity()
            },
        );
        let res = (|| -> Result<SampleResiduals> {
            Ok(SampleResiduals {
                product_intertwine: product_intertwine_residual(&p)?,
                qybe: qybe_residual(&triple)?,
                poisson_map: poisson_map_residual(&p, fd_step)?,
            })
        })();
        match res {
            Ok(r) => {
                report.max_product_intertwine = report.max_product_intertwine.max(r.product_intertwine);
                report.max_qybe = report.max_qybe.max(r.qybe);
                report.max_poisson_map = report.max_poisson_map.max(r.poisson_map);
                report.rows.push((idx, p, r));
            }
            Err(_) => report.divisor_failures += 1,
        }
    }
    report
}

/// CSV dump of sampled points and residuals: sample index, the twelve
/// input coordinates as re/im pairs, and the three residuals.
pub fn samples_csv(report: &NumericReport) -> String {
    let mut out = String::from(
        "index,x1_re,x1_im,z1_re,z1_im,y1_re,y1_im,x2_re,x2_im,z2_re,z2_im,y2_re,y2_im,res_product,res_qybe,res_poisson\n",
    );
    for (idx, p, r) in &report.rows {
        let c = p.coords();
        let coords: Vec<String> = c
            .iter()
            .flat_map(|v| [format!("{:.17e}", v.re), format!("{:.17e}", v.im)])
            .collect();
        out.push_str(&format!(
            "{},{},{:.3e},{:.3e},{:.3e}\n",
            idx,
            coords.join(","),
            r.product_intertwine,
            r.qybe,
            r.poisson_map
        ));
    }
    out
}
