//! Exhaustive checkers for derivation-like identities. Each returns
//! [`Verdict::Pass`] or the lexicographically first counterexample.
//!
//! Every checker also exposes its identity as a [`Law`], so the same identity
//! can be re-evaluated at a single tuple or sampled on larger instances.

use crate::abelian::{AbelianGroup, GroupElement, GroupHom};
use crate::finring::{Bimodule, FinRing};
use crate::graded::{Degree, GradedRing, Homogeneous};
use crate::maps::{inner_derivation, AdditiveMap, BiadditiveMap, GradedMap};
use crate::verdict::{Law, Verdict};

/// Where a derivation `R → X` lands: `R` itself or an `R`-bimodule.
pub trait DerivationTarget: Sync {
    fn source(&self) -> &FinRing;
    fn group(&self) -> &AbelianGroup;
    fn act_left(&self, r: &GroupElement, x: &GroupElement) -> GroupElement;
    fn act_right(&self, x: &GroupElement, r: &GroupElement) -> GroupElement;
}

impl DerivationTarget for FinRing {
    fn source(&self) -> &FinRing {
        self
    }
    fn group(&self) -> &AbelianGroup {
        self.carrier()
    }
    fn act_left(&self, r: &GroupElement, x: &GroupElement) -> GroupElement {
        self.mul(r, x)
    }
    fn act_right(&self, x: &GroupElement, r: &GroupElement) -> GroupElement {
        self.mul(x, r)
    }
}

/// Only meaningful for modules with the same ring on both sides.
impl DerivationTarget for Bimodule {
    fn source(&self) -> &FinRing {
        self.left()
    }
    fn group(&self) -> &AbelianGroup {
        self.carrier()
    }
    fn act_left(&self, r: &GroupElement, x: &GroupElement) -> GroupElement {
        self.left_act(r, x)
    }
    fn act_right(&self, x: &GroupElement, r: &GroupElement) -> GroupElement {
        self.right_act(x, r)
    }
}

fn assert_shape<T: DerivationTarget + ?Sized>(t: &T, d: &AdditiveMap) {
    assert!(
        d.src() == t.source().carrier() && d.dst() == t.group(),
        "map {} -> {} does not fit the derivation target",
        d.src(),
        d.dst()
    );
}

/// `d(ab) = d(a)b + a d(b)`.
pub fn derivation_law<'a, T: DerivationTarget + ?Sized>(
    t: &'a T,
    d: &'a AdditiveMap,
) -> Law<'a, GroupElement> {
    assert_shape(t, d);
    let r = t.source();
    let els = r.elements();
    Law::new(vec![els, els], move |x| {
        let (a, b) = (x[0], x[1]);
        let lhs = d.apply(&r.mul(a, b));
        let rhs = t
            .group()
            .add(&t.act_right(&d.apply(a), b), &t.act_left(a, &d.apply(b)));
        (lhs, rhs)
    })
}

/// `d(a∘b) = d(a)∘b + a∘d(b)`.
pub fn jordan_derivation_law<'a, T: DerivationTarget + ?Sized>(
    t: &'a T,
    d: &'a AdditiveMap,
) -> Law<'a, GroupElement> {
    assert_shape(t, d);
    let r = t.source();
    let els = r.elements();
    Law::new(vec![els, els], move |x| {
        let (a, b) = (x[0], x[1]);
        let g = t.group();
        let lhs = d.apply(&r.jordan(a, b));
        let (da, db) = (d.apply(a), d.apply(b));
        let da_b = g.add(&t.act_right(&da, b), &t.act_left(b, &da));
        let a_db = g.add(&t.act_left(a, &db), &t.act_right(&db, a));
        (lhs, g.add(&da_b, &a_db))
    })
}

pub fn is_derivation<T: DerivationTarget + ?Sized>(t: &T, d: &AdditiveMap) -> Verdict {
    derivation_law(t, d).check()
}

pub fn is_jordan_derivation<T: DerivationTarget + ?Sized>(t: &T, d: &AdditiveMap) -> Verdict {
    jordan_derivation_law(t, d).check()
}

/// `d(xy) = d(x)y + (−1)^{i|x|} x d(y)` on homogeneous pairs.
pub fn superderivation_law<'a>(g: &'a GradedRing, d: &'a GradedMap) -> Law<'a, Homogeneous> {
    let r = g.ring();
    let hs = g.homogeneous();
    let i = d.degree();
    Law::new(vec![hs, hs], move |t| {
        let (x, y) = (t[0], t[1]);
        let lhs = d.apply(&r.mul(&x.elem, &y.elem));
        let first = r.mul(&d.apply(&x.elem), &y.elem);
        let second = r.mul(&x.elem, &d.apply(&y.elem));
        let rhs = r.add(&first, &r.carrier().scale(i.sign(x.degree), &second));
        (lhs, rhs)
    })
}

/// `d(x∘ₛy) = d(x)∘ₛy + (−1)^{i|x|} x∘ₛd(y)` on homogeneous pairs, with
/// `|d(x)| = i + |x|`.
pub fn jordan_superderivation_law<'a>(g: &'a GradedRing, d: &'a GradedMap) -> Law<'a, Homogeneous> {
    let r = g.ring();
    let hs = g.homogeneous();
    let i = d.degree();
    Law::new(vec![hs, hs], move |t| {
        let (x, y) = (t[0], t[1]);
        let lhs = d.apply(&g.superproduct(x, y));
        let first = g.superproduct_raw(&d.apply(&x.elem), i + x.degree, &y.elem, y.degree);
        let second = g.superproduct_raw(&x.elem, x.degree, &d.apply(&y.elem), i + y.degree);
        let rhs = r.add(&first, &r.carrier().scale(i.sign(x.degree), &second));
        (lhs, rhs)
    })
}

pub fn is_superderivation(g: &GradedRing, d: &GradedMap) -> Verdict {
    superderivation_law(g, d).check()
}

pub fn is_jordan_superderivation(g: &GradedRing, d: &GradedMap) -> Verdict {
    jordan_superderivation_law(g, d).check()
}

/// `B(x∘y, z) = B(x,z)∘y + x∘B(y,z)`.
pub fn jordan_biderivation_first_law<'a>(
    r: &'a FinRing,
    b: &'a BiadditiveMap,
) -> Law<'a, GroupElement> {
    let els = r.elements();
    Law::new(vec![els, els, els], move |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        let lhs = b.apply(&r.jordan(x, y), z);
        let rhs = r.add(&r.jordan(&b.apply(x, z), y), &r.jordan(x, &b.apply(y, z)));
        (lhs, rhs)
    })
}

/// `B(x, y∘z) = B(x,y)∘z + y∘B(x,z)`.
pub fn jordan_biderivation_second_law<'a>(
    r: &'a FinRing,
    b: &'a BiadditiveMap,
) -> Law<'a, GroupElement> {
    let els = r.elements();
    Law::new(vec![els, els, els], move |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        let lhs = b.apply(x, &r.jordan(y, z));
        let rhs = r.add(&r.jordan(&b.apply(x, y), z), &r.jordan(y, &b.apply(x, z)));
        (lhs, rhs)
    })
}

pub fn is_jordan_biderivation(r: &FinRing, b: &BiadditiveMap) -> Verdict {
    jordan_biderivation_first_law(r, b)
        .check()
        .and(|| jordan_biderivation_second_law(r, b).check())
}

/// `B(x, y∘ₛz) = B(x,y)∘ₛz + (−1)^{|x||y|} y∘ₛB(x,z)`.
pub fn super_biderivation_right_law<'a>(
    g: &'a GradedRing,
    b: &'a BiadditiveMap,
) -> Law<'a, Homogeneous> {
    let r = g.ring();
    let hs = g.homogeneous();
    Law::new(vec![hs, hs, hs], move |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        let lhs = b.apply(&x.elem, &g.superproduct(y, z));
        let bxy = b.apply(&x.elem, &y.elem);
        let bxz = b.apply(&x.elem, &z.elem);
        let first = g.superproduct_raw(&bxy, x.degree + y.degree, &z.elem, z.degree);
        let second = g.superproduct_raw(&y.elem, y.degree, &bxz, x.degree + z.degree);
        let rhs = r.add(&first, &r.carrier().scale(x.degree.sign(y.degree), &second));
        (lhs, rhs)
    })
}

/// `B(x∘ₛy, z) = x∘ₛB(y,z) + (−1)^{|y||z|} B(x,z)∘ₛy`.
pub fn super_biderivation_left_law<'a>(
    g: &'a GradedRing,
    b: &'a BiadditiveMap,
) -> Law<'a, Homogeneous> {
    let r = g.ring();
    let hs = g.homogeneous();
    Law::new(vec![hs, hs, hs], move |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        let lhs = b.apply(&g.superproduct(x, y), &z.elem);
        let byz = b.apply(&y.elem, &z.elem);
        let bxz = b.apply(&x.elem, &z.elem);
        let first = g.superproduct_raw(&x.elem, x.degree, &byz, y.degree + z.degree);
        let second = g.superproduct_raw(&bxz, x.degree + z.degree, &y.elem, y.degree);
        let rhs = r.add(&first, &r.carrier().scale(y.degree.sign(z.degree), &second));
        (lhs, rhs)
    })
}

/// Both super-Leibniz identities over all homogeneous triples. The caller is
/// responsible for the block constraint (see [`crate::maps::check_biadditive_blocks`]).
pub fn is_jordan_super_biderivation(g: &GradedRing, b: &BiadditiveMap) -> Verdict {
    super_biderivation_right_law(g, b)
        .check()
        .and(|| super_biderivation_left_law(g, b).check())
}

/// The slice characterisation: for even `x₀`, `B(x₀,·)` and `B(·,x₀)` are
/// Jordan superderivations of degree 0; for odd `x₁`, `B(x₁,·)` and
/// `σ∘B(·,x₁)` are Jordan superderivations of degree 1. Slices are built as
/// additive maps and handed to [`is_jordan_superderivation`].
///
/// On failure the witness is the failing slice identity, prefixed with the
/// fixed argument.
pub fn is_jordan_super_biderivation_by_slices(g: &GradedRing, b: &BiadditiveMap) -> Verdict {
    let c = g.ring().carrier();
    let sigma = g.sigma();
    for fixed in g.homogeneous() {
        let a = &fixed.elem;
        let left = GroupHom::from_fn(c, c, |x| b.apply(a, x)).expect("slice of biadditive map");
        let right = GroupHom::from_fn(c, c, |x| b.apply(x, a)).expect("slice of biadditive map");
        let right = match fixed.degree {
            Degree::Even => right,
            Degree::Odd => right.then(&sigma).expect("endomorphisms"),
        };
        for slice in [left, right] {
            let d = GradedMap::unchecked(slice, fixed.degree);
            if let Verdict::Fail(mut w) = is_jordan_superderivation(g, &d) {
                w.inputs.insert(0, a.clone());
                if let Some(ds) = w.degrees.as_mut() {
                    ds.insert(0, fixed.degree as u8);
                }
                return Verdict::Fail(w);
            }
        }
    }
    Verdict::Pass
}

/// The lexicographically least `a` with `I_a = d`, if any.
pub fn find_inner(r: &std::sync::Arc<FinRing>, d: &AdditiveMap) -> Option<GroupElement> {
    r.elements()
        .iter()
        .find(|a| inner_derivation(r, a).is_ok_and(|ia| &ia == d))
        .cloned()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finring::{triangular_ring, trivial_extension, upper_triangular_tn, zn_ring};
    use crate::maps::graded_map;

    fn z(n: u64) -> Arc<FinRing> {
        zn_ring(n).unwrap()
    }

    fn t_zn(n: u64) -> Arc<FinRing> {
        let r = z(n);
        trivial_extension(&r, &Bimodule::regular(&r)).unwrap()
    }

    fn hom(r: &FinRing, rows: Vec<Vec<i64>>) -> AdditiveMap {
        GroupHom::new(r.carrier().clone(), r.carrier().clone(), rows).unwrap()
    }

    fn test_rings() -> Vec<Arc<FinRing>> {
        let z2 = z(2);
        vec![
            z(3),
            z(4),
            t_zn(2),
            t_zn(3),
            triangular_ring(&z2, &Bimodule::regular(&z2), &z2).unwrap(),
            upper_triangular_tn(&z(3), 2, 4096).unwrap(),
        ]
    }

    #[test]
    fn inner_derivations_are_derivations() {
        for r in test_rings() {
            for a in r.elements() {
                let d = inner_derivation(&r, a).unwrap();
                assert!(is_derivation(&*r, &d).passed(), "I_{a} on {r}");
                assert!(is_jordan_derivation(&*r, &d).passed());
            }
        }
    }

    #[test]
    fn zero_map_passes_everything() {
        for r in test_rings() {
            let zero = GroupHom::zero(r.carrier(), r.carrier());
            assert!(is_derivation(&*r, &zero).passed());
            assert!(is_jordan_derivation(&*r, &zero).passed());
            let g = GradedRing::standard(&r);
            for deg in [Degree::Even, Degree::Odd] {
                let d = graded_map(zero.clone(), deg, &g).unwrap();
                assert!(is_superderivation(&g, &d).passed());
                assert!(is_jordan_superderivation(&g, &d).passed());
            }
            let b = BiadditiveMap::zero(r.carrier(), r.carrier(), r.carrier());
            assert!(is_jordan_biderivation(&r, &b).passed());
            assert!(is_jordan_super_biderivation(&g, &b).passed());
            assert!(is_jordan_super_biderivation_by_slices(&g, &b).passed());
        }
    }

    #[test]
    fn identity_on_z3_is_not_a_derivation() {
        let r = z(3);
        let id = GroupHom::identity(r.carrier());
        let w = is_derivation(&*r, &id).witness().cloned().unwrap();
        let one = r.one().clone();
        assert_eq!(w.inputs, vec![one.clone(), one.clone()]);
        assert_eq!(w.lhs, one);
        assert_eq!(w.rhs, r.carrier().element(&[2]).unwrap());
    }

    #[test]
    fn module_projection_is_jordan_derivation_of_t_z3() {
        let t = t_zn(3);
        let d = hom(&t, vec![vec![0, 0], vec![0, 1]]);
        assert!(is_jordan_derivation(&*t, &d).passed());
        let g = GradedRing::standard(&t);
        let d0 = graded_map(d, Degree::Even, &g).unwrap();
        assert!(is_jordan_superderivation(&g, &d0).passed());
    }

    #[test]
    fn degree_one_identity_gamma_fails_on_t_z3() {
        // (r, m) ↦ (0, r): gamma = identity of Z3, not a Jordan derivation.
        let t = t_zn(3);
        let g = GradedRing::standard(&t);
        let d1 = graded_map(hom(&t, vec![vec![0, 1], vec![0, 0]]), Degree::Odd, &g).unwrap();
        let v = is_jordan_superderivation(&g, &d1);
        let w = v.witness().expect("must fail");
        let e = |c: &[i64]| t.carrier().element(c).unwrap();
        assert_eq!(w.inputs, vec![e(&[1, 0]), e(&[1, 0])]);
    }

    #[test]
    fn inner_by_e12_is_degree_one_superderivation_of_t2_z2() {
        let z2 = z(2);
        let t = triangular_ring(&z2, &Bimodule::regular(&z2), &z2).unwrap();
        let g = GradedRing::standard(&t);
        let e12 = t.carrier().element(&[0, 1, 0]).unwrap();
        let ia = inner_derivation(&t, &e12).unwrap();
        let d1 = graded_map(ia, Degree::Odd, &g).unwrap();
        assert!(is_superderivation(&g, &d1).passed());
        assert!(is_jordan_superderivation(&g, &d1).passed());
    }

    #[test]
    fn find_inner_examples() {
        let z2 = z(2);
        let t = triangular_ring(&z2, &Bimodule::regular(&z2), &z2).unwrap();
        let zero = GroupHom::zero(t.carrier(), t.carrier());
        assert_eq!(find_inner(&t, &zero), Some(t.zero()));
        let e12 = t.carrier().element(&[0, 1, 0]).unwrap();
        let ia = inner_derivation(&t, &e12).unwrap();
        let a = find_inner(&t, &ia).unwrap();
        assert_eq!(inner_derivation(&t, &a).unwrap(), ia);
        // Centre of T2(Z2) is {0, 1}: a differs from E12 by a central element.
        let diff = t.sub(&a, &e12);
        assert!(t
            .elements()
            .iter()
            .all(|x| t.commutator(x, &diff).is_zero()));

        let r = z(3);
        let id = GroupHom::identity(r.carrier());
        assert_eq!(find_inner(&r, &id), None);
    }

    #[test]
    fn corrupted_biderivation_is_caught() {
        let r = t_zn(3);
        let c = r.carrier();
        let mut rows = vec![vec![vec![0i64, 0]; 2]; 2];
        rows[0][0] = vec![1, 0];
        let b = BiadditiveMap::new(c.clone(), c.clone(), c.clone(), rows).unwrap();
        let v = is_jordan_biderivation(&r, &b);
        let w = v
            .witness()
            .expect("B(x,y) = (x_r y_r, 0) is no Jordan biderivation");
        // Re-evaluate at the witness.
        let (x, y, z) = (&w.inputs[0], &w.inputs[1], &w.inputs[2]);
        let lhs = b.apply(&r.jordan(x, y), z);
        let rhs = r.add(&r.jordan(&b.apply(x, z), y), &r.jordan(x, &b.apply(y, z)));
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn derivation_into_module() {
        // Z4 acting on Z2 by reduction mod 2.
        let z4 = z(4);
        let m = Bimodule::scalar(&z4, &z4, AbelianGroup::cyclic(2).unwrap()).unwrap();
        let zero = GroupHom::zero(z4.carrier(), m.carrier());
        assert!(is_jordan_derivation(&*m, &zero).passed());
        let red = GroupHom::new(z4.carrier().clone(), m.carrier().clone(), vec![vec![1]]).unwrap();
        // gamma(1∘1) = gamma(2) = 0 and gamma(1)∘1 + 1∘gamma(1) = 4·1 = 0, so
        // the Jordan identity holds; the Leibniz one fails at (1,1).
        assert!(is_jordan_derivation(&*m, &red).passed());
        assert!(!is_derivation(&*m, &red).passed());
    }
}
