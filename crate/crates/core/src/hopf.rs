//! The topological Hopf structure of the dual-group function ring, tensor
//! leg machinery, and the braiding / Yang-Baxter axiom checkers.
//!
//! Everything acts through [`AlgebraMorphism`]: a continuous unital algebra
//! map between coordinate rings, stored as one image series per source
//! variable and applied by substitution.  The coproduct, the antipode, leg
//! flips and embeddings, the braidings and their inverses all live here.
//!
//! Composition is written like function composition: `f.compose(&g)`
//! applies `g` first.

use num::{One, Zero};

use crate::series::{Exponents, Rat, RingSignature, Series};
use crate::{Error, Result};

/// A continuous unital algebra morphism between dual-group coordinate
/// rings, determined by the images of the source variables.
///
/// Images must vanish at the origin (zero constant term) so that
/// substitution into formal series converges.
#[derive(Clone)]
pub struct AlgebraMorphism {
    source: RingSignature,
    target: RingSignature,
    order: usize,
    images: Vec<Series>,
}

impl AlgebraMorphism {
    pub fn new(source: RingSignature, target: RingSignature, images: Vec<Series>) -> Result<Self> {
        if images.len() != source.vars() {
            return Err(Error::MissingImage {
                expected: source.vars(),
                got: images.len(),
            });
        }
        let mut order = usize::MAX;
        for (i, img) in images.iter().enumerate() {
            assert_eq!(img.signature(), target, "image signature mismatch");
            if !img.constant_term().is_zero() {
                return Err(Error::ImageNotPointed(i));
            }
            order = order.min(img.order());
        }
        Ok(AlgebraMorphism {
            source,
            target,
            order,
            images,
        })
    }

    pub fn identity(sig: RingSignature, order: usize) -> Self {
        let images = (0..sig.vars()).map(|v| Series::var(sig, order, v)).collect();
        Self::new(sig, sig, images).unwrap()
    }

    pub fn source(&self) -> RingSignature {
        self.source
    }

    pub fn target(&self) -> RingSignature {
        self.target
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn image(&self, var: usize) -> &Series {
        &self.images[var]
    }

    pub fn images(&self) -> &[Series] {
        &self.images
    }

    /// Apply by substitution; the result is certified to the minimum of the
    /// argument's and the morphism's orders.
    pub fn apply(&self, a: &Series) -> Series {
        assert_eq!(a.signature(), self.source, "apply: signature mismatch");
        a.substitute(&self.images).expect("validated images")
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &AlgebraMorphism) -> AlgebraMorphism {
        assert_eq!(
            other.target, self.source,
            "compose: inner target must match outer source"
        );
        let images = other.images.iter().map(|s| self.apply(s)).collect();
        AlgebraMorphism::new(other.source, self.target, images).expect("composition stays pointed")
    }

    /// Truncate all images to `order`.
    pub fn truncate(&self, order: usize) -> AlgebraMorphism {
        let images = self.images.iter().map(|s| s.truncate(order)).collect();
        AlgebraMorphism::new(self.source, self.target, images).unwrap()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self
                .images
                .iter()
                .enumerate()
                .all(|(v, s)| *s == Series::var(self.source, self.order, v))
    }

    /// Coefficient-wise equality of generator images at order
    /// `min(self, other, order)`; on failure reports the first discrepancy.
    pub fn agrees_with(&self, other: &AlgebraMorphism, order: usize) -> std::result::Result<(), Mismatch> {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let n = order.min(self.order).min(other.order);
        for v in 0..self.source.vars() {
            let a = self.images[v].truncate(n);
            let b = other.images[v].truncate(n);
            if a != b {
                let diff = a.sub(&b);
                let (e, _) = diff.iter_terms().next().expect("nonzero difference");
                return Err(Mismatch {
                    context: format!("image of {}", self.source.var_name(v)),
                    monomial: monomial_name(self.target, e),
                    lhs: format!("{}/{}", a.coeff(e).numer(), a.coeff(e).denom()),
                    rhs: format!("{}/{}", b.coeff(e).numer(), b.coeff(e).denom()),
                });
            }
        }
        Ok(())
    }

    /// The matrix of the action on the degree-1 slice, in the canonical
    /// variable order: entry `(i, j)` is the coefficient of variable `i`
    /// in the image of variable `j`.
    pub fn linear_part(&self) -> Vec<Vec<Rat>> {
        let n = self.source.vars();
        let m = self.target.vars();
        let mut mat = vec![vec![Rat::zero(); n]; m];
        for (j, img) in self.images.iter().enumerate() {
            for (i, row) in mat.iter_mut().enumerate() {
                row[j] = img.coeff(&Exponents::unit(m, i));
            }
        }
        mat
    }

    /// Two-sided inverse to the truncation order, solved degree by degree.
    ///
    /// Requires the linear part to be invertible; with images
    /// `r_j = L x_j + higher`, the inverse's homogeneous slices satisfy
    /// `s_j^(d)(L x) = (x_j - s_j^(<d)(r(x)))_d`.
    pub fn invert(&self) -> Result<AlgebraMorphism> {
        assert_eq!(self.source, self.target, "only endomorphisms are inverted");
        let sig = self.source;
        let n = sig.vars();
        let order = self.order;
        let lin = self.linear_part();
        let lin_inv = invert_matrix(&lin).ok_or(Error::SingularLinearPart)?;

        // Inverse linear substitution x_i -> sum_j (L^-1)_{j i} ... as a
        // morphism: image of variable v is sum_i lin_inv[i][v] x_i.
        let lin_inv_images: Vec<Series> = (0..n)
            .map(|v| {
                let mut s = Series::zero(sig, order);
                for (i, row) in lin_inv.iter().enumerate() {
                    if !row[v].is_zero() {
                        s = s.add(&Series::var(sig, order, i).scale(&row[v]));
                    }
                }
                s
            })
            .collect();

        let mut inv_images: Vec<Series> = lin_inv_images.clone();
        for d in 2..=order {
            // defect_j = x_j - s^(<d)(r(x)), a series with valuation >= d
            // up to degree d.
            let mut defects = Vec::with_capacity(n);
            for (j, inv_image) in inv_images.iter().enumerate() {
                let composed = inv_image.substitute(&self.images).expect("pointed");
                defects.push(Series::var(sig, order, j).sub(&composed));
            }
            for (j, defect) in defects.iter().enumerate() {
                // Pull the degree-d slice back through the linear part.
                let mut slice = Series::zero(sig, order);
                for (e, c) in defect.homogeneous_part(d) {
                    slice = slice.add(&Series::monomial(
                        sig,
                        order,
                        &e.iter().collect::<Vec<_>>(),
                        c.clone(),
                    ));
                }
                if slice.is_zero() {
                    continue;
                }
                let corrected = slice.substitute(&lin_inv_images).expect("pointed");
                inv_images[j] = inv_images[j].add(&corrected);
            }
        }
        AlgebraMorphism::new(sig, sig, inv_images)
    }
}

/// A coefficient-level discrepancy between two morphisms or series, for
/// reporting.
#[derive(Debug, Clone)]
pub struct Mismatch {
    pub context: String,
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: first divergent monomial {} ({} vs {})",
            self.context, self.monomial, self.lhs, self.rhs
        )
    }
}

fn monomial_name(sig: RingSignature, e: &Exponents) -> String {
    if e.is_constant() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    for v in 0..e.len() {
        let k = e.get(v);
        if k > 0 {
            parts.push(format!("{}^{}", sig.var_name(v), k));
        }
    }
    parts.join(" ")
}

/// Gaussian elimination over the rationals; `None` when singular.
fn invert_matrix(mat: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = mat.len();
    let mut a: Vec<Vec<Rat>> = mat.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let av = &a[col][j] * &factor;
                a[r][j] = &a[r][j] - &av;
                let iv = &inv[col][j] * &factor;
                inv[r][j] = &inv[r][j] - &iv;
            }
        }
    }
    Some(inv)
}

pub fn is_identity_matrix(mat: &[Vec<Rat>]) -> bool {
    mat.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
    })
}

/// The coproduct as a morphism from the 1-factor ring to the 2-factor
/// ring:
///
/// ```text
/// x |-> x1 z2^-1 + z1 x2,   z |-> z1 z2  (so w |-> w1 + w2 + w1 w2),   y |-> y1 z2^-1 + z1 y2
/// ```
pub fn coproduct(order: usize) -> AlgebraMorphism {
    let s1 = RingSignature::new(1);
    let s2 = RingSignature::new(2);
    let x1 = Series::var(s2, order, s2.x(0));
    let y1 = Series::var(s2, order, s2.y(0));
    let w1 = Series::var(s2, order, s2.w(0));
    let x2 = Series::var(s2, order, s2.x(1));
    let y2 = Series::var(s2, order, s2.y(1));
    let w2 = Series::var(s2, order, s2.w(1));
    let z1 = Series::z_power(s2, order, 0, 1);
    let z2_inv = Series::z_power(s2, order, 1, -1);
    let images = vec![
        x1.mul(&z2_inv).add(&z1.mul(&x2)),
        w1.add(&w2).add(&w1.mul(&w2)),
        y1.mul(&z2_inv).add(&z1.mul(&y2)),
    ];
    AlgebraMorphism::new(s1, s2, images).unwrap()
}

/// Counit: evaluation at the identity point, i.e. the constant term.
pub fn counit(a: &Series) -> Rat {
    a.constant_term()
}

/// The antipode of the 1-factor ring: `x |-> -x`, `z |-> z^-1`, `y |-> -y`.
pub fn antipode(order: usize) -> AlgebraMorphism {
    let s = RingSignature::new(1);
    let images = vec![
        Series::var(s, order, s.x(0)).neg(),
        Series::z_power(s, order, 0, -1).sub(&Series::one(s, order)),
        Series::var(s, order, s.y(0)).neg(),
    ];
    AlgebraMorphism::new(s, s, images).unwrap()
}

/// The involution `x <-> y`, `z <-> z^-1` of the 1-factor ring; a Poisson
/// algebra automorphism exchanging the two triangular halves.
pub fn xy_involution(order: usize) -> AlgebraMorphism {
    let s = RingSignature::new(1);
    let images = vec![
        Series::var(s, order, s.y(0)),
        Series::z_power(s, order, 0, -1).sub(&Series::one(s, order)),
        Series::var(s, order, s.x(0)),
    ];
    AlgebraMorphism::new(s, s, images).unwrap()
}

/// The multiplication map of the function ring, i.e. pullback along the
/// diagonal: a morphism from the 2-factor ring to the 1-factor ring
/// sending both legs' coordinates to the same coordinates.
pub fn multiplication(order: usize) -> AlgebraMorphism {
    let s1 = RingSignature::new(1);
    let s2 = RingSignature::new(2);
    let images = (0..6).map(|v| Series::var(s1, order, v % 3)).collect();
    AlgebraMorphism::new(s2, s1, images).unwrap()
}

/// Pure leg relabeling: source factor `i` becomes target factor
/// `leg_map[i]`.
pub fn leg_relabel(
    source: RingSignature,
    target: RingSignature,
    leg_map: &[usize],
    order: usize,
) -> AlgebraMorphism {
    assert_eq!(leg_map.len(), source.factors());
    let images = (0..source.vars())
        .map(|v| {
            let factor = v / 3;
            Series::var(target, order, 3 * leg_map[factor] + v % 3)
        })
        .collect();
    AlgebraMorphism::new(source, target, images).unwrap()
}

/// The flip of the 2-factor ring (pullback of the swap of factors).
pub fn flip(order: usize) -> AlgebraMorphism {
    let s2 = RingSignature::new(2);
    leg_relabel(s2, s2, &[1, 0], order)
}

/// Embed an endomorphism of the `legs.len()`-factor ring into the
/// `arity`-factor ring, acting on the chosen legs and fixing the rest.
pub fn leg_embed(
    m: &AlgebraMorphism,
    arity: usize,
    legs: &[usize],
    order: usize,
) -> AlgebraMorphism {
    assert_eq!(m.source(), m.target(), "only endomorphisms embed into legs");
    let small = m.source();
    assert_eq!(small.factors(), legs.len(), "leg count mismatch");
    assert!(legs.iter().all(|&l| l < arity), "leg out of range");
    let big = RingSignature::new(arity);
    let mut images: Vec<Series> = (0..big.vars())
        .map(|v| Series::var(big, order, v))
        .collect();
    for (i, &leg) in legs.iter().enumerate() {
        for k in 0..3 {
            images[3 * leg + k] = m.image(3 * i + k).truncate(order.min(m.order())).relabel_factors(big, legs);
        }
    }
    AlgebraMorphism::new(big, big, images).unwrap()
}

/// Apply the coproduct to one leg of the `arity`-factor ring, yielding a
/// morphism into the `arity + 1`-factor ring.  `coproduct_leg(0, 2)` is
/// "coproduct tensor identity", `coproduct_leg(1, 2)` is "identity tensor
/// coproduct".
pub fn coproduct_leg(leg: usize, arity: usize, order: usize) -> AlgebraMorphism {
    assert!(leg < arity);
    let source = RingSignature::new(arity);
    let target = RingSignature::new(arity + 1);
    let delta = coproduct(order);
    let mut images = Vec::with_capacity(source.vars());
    for v in 0..source.vars() {
        let factor = v / 3;
        let image = if factor < leg {
            Series::var(target, order, v)
        } else if factor == leg {
            delta.image(v % 3).relabel_factors(target, &[leg, leg + 1])
        } else {
            Series::var(target, order, v + 3)
        };
        images.push(image);
    }
    AlgebraMorphism::new(source, target, images).unwrap()
}

/// Outcome of a single axiom check.
#[derive(Debug, Clone)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

impl AxiomCheck {
    pub fn pass(name: &'static str) -> Self {
        AxiomCheck {
            name,
            ok: true,
            detail: String::new(),
        }
    }

    pub fn from_result(name: &'static str, r: std::result::Result<(), Mismatch>) -> Self {
        match r {
            Ok(()) => Self::pass(name),
            Err(m) => AxiomCheck {
                name,
                ok: false,
                detail: m.to_string(),
            },
        }
    }
}

/// Verify the braiding axioms for an endomorphism `r` of the 2-factor
/// ring, to order `n` (hexagons to `hexagon_order`, which is cheaper on
/// the 9-variable ring):
///
/// 1. `r` intertwines the coproduct with its opposite;
/// 2. both hexagon identities on the 3-factor ring;
/// 3. `r` differs from the flip;
/// 4. `r` is invertible, with the inverse checked on both sides.
pub fn check_braiding(r: &AlgebraMorphism, n: usize, hexagon_order: usize) -> Vec<AxiomCheck> {
    let mut out = Vec::new();

    // r . Delta = Delta^op
    let delta = coproduct(n.min(r.order()));
    let lhs = r.truncate(n.min(r.order())).compose(&delta);
    let rhs = flip(n.min(r.order())).compose(&delta);
    out.push(AxiomCheck::from_result(
        "coproduct-intertwine",
        lhs.agrees_with(&rhs, n),
    ));

    // Hexagons.
    let h = hexagon_order;
    let rh = r.truncate(h.min(r.order()));
    let d_leg0 = coproduct_leg(0, 2, h);
    let d_leg1 = coproduct_leg(1, 2, h);
    let r13 = leg_embed(&rh, 3, &[0, 2], h);
    let r23 = leg_embed(&rh, 3, &[1, 2], h);
    let r12 = leg_embed(&rh, 3, &[0, 1], h);

    let lhs1 = d_leg0.compose(&rh);
    let rhs1 = r13.compose(&r23).compose(&d_leg0);
    out.push(AxiomCheck::from_result(
        "hexagon-coproduct-left",
        lhs1.agrees_with(&rhs1, h),
    ));

    let lhs2 = d_leg1.compose(&rh);
    let rhs2 = r13.compose(&r12).compose(&d_leg1);
    out.push(AxiomCheck::from_result(
        "hexagon-coproduct-right",
        lhs2.agrees_with(&rhs2, h),
    ));

    // Different from the flip.
    let distinct = r.agrees_with(&flip(r.order()), n).is_err();
    out.push(AxiomCheck {
        name: "distinct-from-flip",
        ok: distinct,
        detail: if distinct {
            String::new()
        } else {
            "braiding coincides with the flip".to_string()
        },
    });

    // Invertibility.
    match r.invert() {
        Ok(rinv) => {
            let id = AlgebraMorphism::identity(r.source(), n.min(r.order()));
            let left = rinv.compose(r).agrees_with(&id, n);
            let right = r.compose(&rinv).agrees_with(&id, n);
            out.push(AxiomCheck::from_result("invertible-left", left));
            out.push(AxiomCheck::from_result("invertible-right", right));
        }
        Err(e) => out.push(AxiomCheck {
            name: "invertible-left",
            ok: false,
            detail: e.to_string(),
        }),
    }

    out
}

/// The Yang-Baxter identity for leg operators on the 3-factor ring:
/// `r12 . r13 . r23 = r23 . r13 . r12`, checked to order `n`.
pub fn check_qybe(r: &AlgebraMorphism, n: usize) -> AxiomCheck {
    let rh = r.truncate(n.min(r.order()));
    let r12 = leg_embed(&rh, 3, &[0, 1], n);
    let r13 = leg_embed(&rh, 3, &[0, 2], n);
    let r23 = leg_embed(&rh, 3, &[1, 2], n);
    let lhs = r12.compose(&r13).compose(&r23);
    let rhs = r23.compose(&r13).compose(&r12);
    AxiomCheck::from_result("yang-baxter", lhs.agrees_with(&rhs, n))
}

/// Unitarity predicate `r^-1 = flip . r . flip` (informational; the
/// braidings built in this crate are not unitary).
pub fn check_unitary(r: &AlgebraMorphism, n: usize) -> bool {
    let rinv = match r.invert() {
        Ok(m) => m,
        Err(_) => return false,
    };
    let s = flip(r.order());
    let conj = s.compose(r).compose(&s);
    rinv.agrees_with(&conj, n).is_ok()
}

/// The induced matrix on the degree-1 slice in the basis
/// `(x1, w1, y1, x2, w2, y2)`.
pub fn infinitesimal_part(r: &AlgebraMorphism) -> Vec<Vec<Rat>> {
    r.linear_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rat, rat_int};



    #[test]
    fn unitarity_predicate() {
        // no construction in this crate produces a unitary braiding; the
        // predicate itself is sane on the trivial endomorphisms
        let n = 5;
        assert!(!check_unitary(&crate::braid_wx::closed_form(n), n));
        assert!(check_unitary(&flip(n), n));
        let s2 = RingSignature::new(2);
        assert!(check_unitary(&AlgebraMorphism::identity(s2, n), n));
    }
    #[test]
    fn coproduct_images() {
        let n = 6;
        let s2 = RingSignature::new(2);
        let d = coproduct(n);
        // Delta(w) = w1 + w2 + w1 w2
        let w1 = Series::var(s2, n, s2.w(0));
        let w2 = Series::var(s2, n, s2.w(1));
        assert_eq!(*d.image(1), w1.add(&w2).add(&w1.mul(&w2)));
        // Delta(x) = x1 z2^-1 + z1 x2
        let expected = Series::var(s2, n, s2.x(0))
            .mul(&Series::z_power(s2, n, 1, -1))
            .add(&Series::z_power(s2, n, 0, 1).mul(&Series::var(s2, n, s2.x(1))));
        assert_eq!(*d.image(0), expected);
    }

    #[test]
    fn counit_axiom() {
        // collapsing either leg of the coproduct gives the identity
        let n = 6;
        let s1 = RingSignature::new(1);
        let s2 = RingSignature::new(2);
        let d = coproduct(n);
        // (id x eps): kill leg 2
        let mut images: Vec<Series> = (0..3).map(|k| Series::var(s1, n, k)).collect();
        images.extend(std::iter::repeat_with(|| Series::zero(s1, n)).take(3));
        let collapse2 = AlgebraMorphism::new(s2, s1, images).unwrap();
        assert!(collapse2.compose(&d).is_identity());
    }

    #[test]
    fn coassociativity() {
        let n = 5;
        let d = coproduct(n);
        let lhs = coproduct_leg(0, 2, n).compose(&d);
        let rhs = coproduct_leg(1, 2, n).compose(&d);
        assert!(lhs.agrees_with(&rhs, n).is_ok());
    }

    #[test]
    fn antipode_is_involutive_here() {
        let n = 6;
        let s = antipode(n);
        assert!(s.compose(&s).is_identity());
    }

    #[test]
    fn antipode_axiom() {
        // m . (S x id) . Delta = unit . counit
        let n = 6;
        let s1 = RingSignature::new(1);
        let s2 = RingSignature::new(2);
        let d = coproduct(n);
        let s = antipode(n);
        let s_leg1 = {
            let mut images: Vec<Series> = Vec::new();
            for k in 0..3 {
                images.push(s.image(k).relabel_factors(s2, &[0]));
            }
            for k in 0..3 {
                images.push(Series::var(s2, n, 3 + k));
            }
            AlgebraMorphism::new(s2, s2, images).unwrap()
        };
        let m = multiplication(n);
        let total = m.compose(&s_leg1).compose(&d);
        for v in 0..3 {
            assert!(
                total.image(v).is_zero(),
                "antipode axiom fails on {}",
                s1.var_name(v)
            );
        }
    }

    #[test]
    fn flip_is_an_involution() {
        let f = flip(5);
        assert!(f.compose(&f).is_identity());
    }

    #[test]
    fn leg_embed_identity_leg() {
        let n = 4;
        let f = flip(n);
        let s3 = RingSignature::new(3);
        let m = leg_embed(&f, 3, &[0, 2], n);
        // w1 -> w3 under the (1,3) flip, x3 -> x1, x2 fixed
        assert_eq!(*m.image(s3.w(0)), Series::var(s3, n, s3.w(2)));
        assert_eq!(*m.image(s3.x(2)), Series::var(s3, n, s3.x(0)));
        assert_eq!(*m.image(s3.x(1)), Series::var(s3, n, s3.x(1)));
    }

    #[test]
    fn leg_embed_respects_composition() {
        let n = 4;
        let s2 = RingSignature::new(2);
        // two simple endomorphisms of the 2-factor ring
        let a = AlgebraMorphism::new(
            s2,
            s2,
            (0..6)
                .map(|v| {
                    if v == 0 {
                        Series::var(s2, n, 0).add(&Series::var(s2, n, 3).pow(2))
                    } else {
                        Series::var(s2, n, v)
                    }
                })
                .collect(),
        )
        .unwrap();
        let b = flip(n);
        let lhs = leg_embed(&a.compose(&b), 3, &[1, 2], n);
        let rhs = leg_embed(&a, 3, &[1, 2], n).compose(&leg_embed(&b, 3, &[1, 2], n));
        assert!(lhs.agrees_with(&rhs, n).is_ok());
    }

    #[test]
    fn qybe_holds_for_flip_and_identity() {
        let n = 4;
        assert!(check_qybe(&flip(n), n).ok);
        let s2 = RingSignature::new(2);
        assert!(check_qybe(&AlgebraMorphism::identity(s2, n), n).ok);
    }

    #[test]
    fn identity_fails_coproduct_intertwine() {
        let n = 4;
        let s2 = RingSignature::new(2);
        let id = AlgebraMorphism::identity(s2, n);
        let checks = check_braiding(&id, n, 3);
        let inter = checks
            .iter()
            .find(|c| c.name == "coproduct-intertwine")
            .unwrap();
        assert!(!inter.ok, "identity must not intertwine Delta with Delta-op");
    }

    #[test]
    fn flip_rejected_as_braiding() {
        let n = 4;
        let checks = check_braiding(&flip(n), n, 3);
        let distinct = checks
            .iter()
            .find(|c| c.name == "distinct-from-flip")
            .unwrap();
        assert!(!distinct.ok);
    }

    #[test]
    fn invert_identity_and_quadratic() {
        let n = 6;
        let s2 = RingSignature::new(2);
        let id = AlgebraMorphism::identity(s2, n);
        assert!(id.invert().unwrap().is_identity());

        // x1 -> x1 + y2^2, everything else fixed
        let mut images: Vec<Series> = (0..6).map(|v| Series::var(s2, n, v)).collect();
        images[0] = images[0].add(&Series::var(s2, n, s2.y(1)).pow(2));
        let m = AlgebraMorphism::new(s2, s2, images).unwrap();
        let minv = m.invert().unwrap();
        assert!(minv.compose(&m).is_identity());
        assert!(m.compose(&minv).is_identity());
    }

    #[test]
    fn singular_linear_part_is_reported() {
        let n = 4;
        let s = RingSignature::new(1);
        let images = vec![
            Series::var(s, n, 0),
            Series::var(s, n, 0),
            Series::var(s, n, 2),
        ];
        let m = AlgebraMorphism::new(s, s, images).unwrap();
        assert!(matches!(m.invert(), Err(Error::SingularLinearPart)));
    }

    #[test]
    fn infinitesimal_part_of_flip_swaps_blocks() {
        let f = flip(3);
        let mat = infinitesimal_part(&f);
        assert!(!is_identity_matrix(&mat));
        for (i, row) in mat.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let expected = if (i + 3) % 6 == j { rat_int(1) } else { rat_int(0) };
                assert_eq!(*entry, expected);
            }
        }
    }

    #[test]
    fn delta_is_multiplicative_spot_check() {
        let n = 6;
        let s1 = RingSignature::new(1);
        let d = coproduct(n);
        let f = Series::var(s1, n, 0).mul(&Series::var(s1, n, 2));
        let g = Series::z_power(s1, n, 0, -1).sub(&Series::one(s1, n));
        assert_eq!(d.apply(&f.mul(&g)), d.apply(&f).mul(&d.apply(&g)));
    }

    #[test]
    fn counit_extracts_constant() {
        let s1 = RingSignature::new(1);
        let f = Series::constant(s1, 4, rat(5, 3)).add(&Series::var(s1, 4, 1));
        assert_eq!(counit(&f), rat(5, 3));
    }
}
