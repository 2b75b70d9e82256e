//! The Poisson structure of the formal dual group and its Hamiltonian
//! flows.
//!
//! On each factor the bracket is determined on coordinates by
//!
//! ```text
//! {x, y} = z^+2 - z^-2      {z^+-1, x} = -+ x z^+-1 / 2      {z^+-1, y} = +- z^+-1 y / 2
//! ```
//!
//! with `z = 1 + w`, cross-factor brackets zero, extended to the whole ring
//! as a biderivation.  In the global chart `(x, w, y)` this becomes the
//! bivector table
//!
//! ```text
//! {x, w} = x (1 + w) / 2    {x, y} = z^+2 - z^-2    {w, y} = (1 + w) y / 2
//! ```
//!
//! (differentiating by `w` and by `z` agree, since `w = z - 1`).
//!
//! The orientation of `{x, y}` relative to the `z`-brackets is pinned by
//! the geometry: it is the unique choice (up to an irrelevant global sign)
//! for which the factorization braiding of [`crate::braid_wx`] is a
//! Poisson map, and for which the Hamiltonian flows of
//! [`crate::braid_gh`] integrate to that same braiding.
//!
//! Precision accounting: a partial derivative consumes one certified
//! degree, so the generic [`PoissonBivector::bracket`] of order-`m` inputs
//! is certified to `m - 1`.  Every bivector entry vanishes at the origin,
//! so when the first argument additionally has valuation `>= 2` (a
//! [`Hamiltonian`]) the lost degree is recovered: [`PoissonBivector::ad`]
//! keeps the full order `m`.  Flows therefore need only one guard degree
//! in total, not one per bracket.

use num::One;

use crate::hopf::AlgebraMorphism;
use crate::series::{rat, Rat, RingSignature, Series};
use crate::{Error, Result};

/// The generator bracket table of the dual Poisson structure, stored per
/// factor in the chart `(x, w, y)`, certified to `order`.
pub struct PoissonBivector {
    sig: RingSignature,
    order: usize,
    /// `{x_i, w_i} = x_i (1 + w_i) / 2`
    b_xw: Vec<Series>,
    /// `{x_i, y_i} = z_i^+2 - z_i^-2`
    b_xy: Vec<Series>,
    /// `{w_i, y_i} = (1 + w_i) y_i / 2`
    b_wy: Vec<Series>,
}

impl PoissonBivector {
    /// The standard structure on `sig.factors()` copies of the dual group.
    pub fn standard(sig: RingSignature, order: usize) -> Self {
        let mut b_xw = Vec::new();
        let mut b_xy = Vec::new();
        let mut b_wy = Vec::new();
        for i in 0..sig.factors() {
            let x = Series::var(sig, order, sig.x(i));
            let y = Series::var(sig, order, sig.y(i));
            let z = Series::z_power(sig, order, i, 1);
            b_xw.push(x.mul(&z).scale(&rat(1, 2)));
            b_xy.push(Series::z_power(sig, order, i, 2).sub(&Series::z_power(sig, order, i, -2)));
            b_wy.push(z.mul(&y).scale(&rat(1, 2)));
        }
        PoissonBivector {
            sig,
            order,
            b_xw,
            b_xy,
            b_wy,
        }
    }

    pub fn signature(&self) -> RingSignature {
        self.sig
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The Poisson bracket `{f, g}`, certified to `min(order(f), order(g)) - 1`.
    pub fn bracket(&self, f: &Series, g: &Series) -> Series {
        let m = f.order().min(g.order());
        let out = self.bracket_raw(f, g);
        out.truncate(out.order().min(m.saturating_sub(1)))
    }

    /// The derivation `f |-> {lam, f}` for a Hamiltonian generator.
    ///
    /// Because `valuation(lam) >= 2` and every bivector entry has
    /// valuation `>= 1`, the degree-`d` slice of the result only involves
    /// slices of `f` up to degree `d - 1` and of `lam` up to `d`; no
    /// certified precision is lost and the result keeps order
    /// `min(order(lam), order(f))`.
    pub fn ad(&self, lam: &Hamiltonian, f: &Series) -> Series {
        self.bracket_raw(lam.generator(), f)
    }

    /// Partials-and-bivector formula, returning every computable term up to
    /// the minimum of the input orders (capped by the table's own order).
    /// The public wrappers decide how much of that is certified.
    fn bracket_raw(&self, f: &Series, g: &Series) -> Series {
        assert_eq!(f.signature(), self.sig, "signature mismatch in bracket");
        assert_eq!(g.signature(), self.sig, "signature mismatch in bracket");
        let m = f.order().min(g.order()).min(self.order);
        let mut out = Series::zero(self.sig, m);
        for i in 0..self.sig.factors() {
            let fx = f.partial(self.sig.x(i)).unwrap();
            let fw = f.partial(self.sig.w(i)).unwrap();
            let fy = f.partial(self.sig.y(i)).unwrap();
            let gx = g.partial(self.sig.x(i)).unwrap();
            let gw = g.partial(self.sig.w(i)).unwrap();
            let gy = g.partial(self.sig.y(i)).unwrap();

            let pairs = [
                (&self.b_xw[i], &fx, &gw, &fw, &gx),
                (&self.b_xy[i], &fx, &gy, &fy, &gx),
                (&self.b_wy[i], &fw, &gy, &fy, &gw),
            ];
            for (b, fa, gb, fb, ga) in pairs {
                // Complete through degree m - 1; the bivector entry has
                // valuation >= 1, so the outer product is complete to m.
                let term = fa.mul(gb).sub(&fb.mul(ga));
                if term.is_zero() {
                    continue;
                }
                out = out.add(&b.mul_with_order(&term, m));
            }
        }
        out
    }

    /// Residual of the Jacobi identity `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`,
    /// certified to `min(orders) - 2`.
    pub fn jacobi_residual(&self, f: &Series, g: &Series, h: &Series) -> Series {
        let a = self.bracket(f, &self.bracket(g, h));
        let b = self.bracket(g, &self.bracket(h, f));
        let c = self.bracket(h, &self.bracket(f, g));
        a.add(&b).add(&c)
    }

    /// The time-1 flow `exp(ad(lam))` as an algebra morphism, with
    /// generator images certified to `order`.
    ///
    /// The sum terminates because each `ad` application raises valuation by
    /// at least one.  Inputs must carry one guard degree: the table and the
    /// Hamiltonian must both be certified to at least `order + 1`.
    pub fn flow(&self, lam: &Hamiltonian, order: usize) -> AlgebraMorphism {
        let internal = order + 1;
        assert!(
            self.order >= internal && lam.generator().order() >= internal,
            "flow needs one guard degree: table/Hamiltonian certified to {} but {} required",
            self.order.min(lam.generator().order()),
            internal
        );
        let lam_cut = Hamiltonian {
            generator: lam.generator().truncate(internal),
        };
        let mut images = Vec::with_capacity(self.sig.vars());
        for v in 0..self.sig.vars() {
            let mut image = Series::var(self.sig, internal, v);
            let mut term = image.clone();
            let mut factorial = Rat::one();
            let mut k = 0usize;
            loop {
                term = self.ad(&lam_cut, &term);
                if term.is_zero() {
                    break;
                }
                k += 1;
                assert!(
                    k <= internal + 1,
                    "flow failed to terminate: ad did not raise valuation"
                );
                factorial *= rat(k as i64, 1);
                image = image.add(&term.scale(&(Rat::one() / &factorial)));
            }
            images.push(image.truncate(order));
        }
        AlgebraMorphism::new(self.sig, self.sig, images).expect("flow images are pointed")
    }
}

/// Generator of a Hamiltonian flow; required valuation `>= 2` so that the
/// flow terminates at any finite truncation order.
#[derive(Clone)]
pub struct Hamiltonian {
    generator: Series,
}

impl Hamiltonian {
    pub fn new(generator: Series) -> Result<Self> {
        match generator.valuation() {
            None => Ok(Hamiltonian { generator }), // zero generates the identity flow
            Some(v) if v >= 2 => Ok(Hamiltonian { generator }),
            Some(v) => Err(Error::HamiltonianValuation(v)),
        }
    }

    pub fn generator(&self) -> &Series {
        &self.generator
    }

    pub fn neg(&self) -> Hamiltonian {
        Hamiltonian {
            generator: self.generator.neg(),
        }
    }
}

/// Check the Jacobi identity on all coordinate triples of the ring,
/// returning the first failing triple if any.  Inputs are generated
/// internally with two guard degrees so residuals are certified to `order`.
pub fn jacobi_on_generators(sig: RingSignature, order: usize) -> Option<(usize, usize, usize)> {
    let internal = order + 2;
    let table = PoissonBivector::standard(sig, internal);
    let vars: Vec<Series> = (0..sig.vars())
        .map(|v| Series::var(sig, internal, v))
        .collect();
    for a in 0..sig.vars() {
        for b in 0..sig.vars() {
            for c in 0..sig.vars() {
                let r = table.jacobi_residual(&vars[a], &vars[b], &vars[c]);
                if !r.is_zero() {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat_int;

    fn sig1() -> RingSignature {
        RingSignature::new(1)
    }

    fn sig2() -> RingSignature {
        RingSignature::new(2)
    }

    #[test]
    fn bracket_of_x_and_y_is_z_difference() {
        let s = sig1();
        let table = PoissonBivector::standard(s, 9);
        let x = Series::var(s, 9, s.x(0));
        let y = Series::var(s, 9, s.y(0));
        let b = table.bracket(&x, &y);
        let expected = Series::z_power(s, 8, 0, 2).sub(&Series::z_power(s, 8, 0, -2));
        assert_eq!(b, expected);
    }

    #[test]
    fn cross_factor_brackets_vanish() {
        let s = sig2();
        let table = PoissonBivector::standard(s, 6);
        let x1 = Series::var(s, 6, s.x(0));
        let x2 = Series::var(s, 6, s.x(1));
        let y2 = Series::var(s, 6, s.y(1));
        assert!(table.bracket(&x1, &x2).is_zero());
        assert!(table.bracket(&x1, &y2).is_zero());
    }

    #[test]
    fn dressing_pair_bracket() {
        // {z^-1 x, z^+1 y} = z^+2 - z^-2 = {x, y}
        let s = sig1();
        let n = 9;
        let table = PoissonBivector::standard(s, n);
        let f = Series::z_power(s, n, 0, -1).mul(&Series::var(s, n, s.x(0)));
        let g = Series::z_power(s, n, 0, 1).mul(&Series::var(s, n, s.y(0)));
        let b = table.bracket(&f, &g);
        let expected = Series::z_power(s, n - 1, 0, 2).sub(&Series::z_power(s, n - 1, 0, -2));
        assert_eq!(b, expected);
    }

    #[test]
    fn antisymmetry_on_composites() {
        let s = sig1();
        let table = PoissonBivector::standard(s, 7);
        let f = Series::z_power(s, 7, 0, -1)
            .mul(&Series::var(s, 7, s.x(0)))
            .add(&Series::var(s, 7, s.y(0)).pow(2));
        let g = Series::var(s, 7, s.w(0)).mul(&Series::var(s, 7, s.y(0)));
        let fg = table.bracket(&f, &g);
        let gf = table.bracket(&g, &f);
        assert!(fg.add(&gf).is_zero());
        assert!(table.bracket(&f, &f).is_zero());
    }

    #[test]
    fn leibniz_rule() {
        let s = sig1();
        let n = 8;
        let table = PoissonBivector::standard(s, n);
        let f = Series::var(s, n, s.x(0)).add(&Series::var(s, n, s.w(0)).pow(2));
        let g = Series::var(s, n, s.y(0));
        let h = Series::z_power(s, n, 0, -1);
        let lhs = table.bracket(&f, &g.mul(&h));
        let rhs = table
            .bracket(&f, &g)
            .mul(&h.truncate(n - 1))
            .add(&g.truncate(n - 1).mul(&table.bracket(&f, &h)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_identity_on_generators() {
        assert_eq!(jacobi_on_generators(sig1(), 5), None);
        assert_eq!(jacobi_on_generators(sig2(), 4), None);
    }

    #[test]
    fn hamiltonian_rejects_low_valuation() {
        let s = sig1();
        let x = Series::var(s, 5, s.x(0));
        assert!(matches!(
            Hamiltonian::new(x),
            Err(Error::HamiltonianValuation(1))
        ));
    }

    #[test]
    fn ad_of_log_product_hamiltonian() {
        // lam = 4 log z1 log z2 sends x1 to -2 x1 log z2.
        let s = sig2();
        let n = 8;
        let z1 = Series::z_power(s, n, 0, 1);
        let z2 = Series::z_power(s, n, 1, 1);
        let lam = Hamiltonian::new(
            z1.log_unit()
                .unwrap()
                .mul(&z2.log_unit().unwrap())
                .scale(&rat_int(4)),
        )
        .unwrap();
        let table = PoissonBivector::standard(s, n);
        let x1 = Series::var(s, n, s.x(0));
        let got = table.ad(&lam, &x1);
        let expected = x1.mul(&z2.log_unit().unwrap()).scale(&rat_int(-2));
        assert_eq!(got, expected);
    }

    #[test]
    fn ad_kills_constants() {
        let s = sig1();
        let lam =
            Hamiltonian::new(Series::var(s, 6, s.x(0)).mul(&Series::var(s, 6, s.y(0)))).unwrap();
        let table = PoissonBivector::standard(s, 6);
        let c = Series::constant(s, 6, rat(3, 7));
        assert!(table.ad(&lam, &c).is_zero());
    }

    #[test]
    fn flow_of_zero_is_identity() {
        let s = sig2();
        let table = PoissonBivector::standard(s, 7);
        let lam = Hamiltonian::new(Series::zero(s, 7)).unwrap();
        let m = table.flow(&lam, 6);
        assert!(m.is_identity());
    }

    #[test]
    fn flow_conserves_its_hamiltonian() {
        let s = sig2();
        let n = 7;
        let table = PoissonBivector::standard(s, n);
        let u = Series::z_power(s, n, 0, -1)
            .mul(&Series::var(s, n, s.x(0)))
            .mul(&Series::z_power(s, n, 1, 1))
            .mul(&Series::var(s, n, s.y(1)));
        let lam = Hamiltonian::new(u).unwrap();
        let m = table.flow(&lam, n - 1);
        let moved = m.apply(lam.generator());
        assert_eq!(moved, lam.generator().truncate(n - 1));
    }
}
