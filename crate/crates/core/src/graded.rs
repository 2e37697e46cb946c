//! ℤ₂-gradings `A = A₀ ⊕ A₁` given by coordinate masks, homogeneous elements,
//! the Jordan superproduct and the automorphism `σ(a₀ + a₁) = a₀ − a₁`.

use std::fmt;
use std::ops::Add;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::abelian::{GroupElement, GroupHom};
use crate::error::{Error, Result};
use crate::finring::{FinRing, RingIso, RingKind};
use crate::verdict::{Law, Verdict};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[repr(u8)]
pub enum Degree {
    Even = 0,
    Odd = 1,
}

impl Degree {
    pub fn from_u8(d: u8) -> Result<Degree> {
        match d {
            0 => Ok(Degree::Even),
            1 => Ok(Degree::Odd),
            _ => Err(Error::Invalid(format!("degree must be 0 or 1, got {d}"))),
        }
    }

    /// `(-1)^(self·other)`.
    pub fn sign(self, other: Degree) -> i64 {
        if self == Degree::Odd && other == Degree::Odd {
            -1
        } else {
            1
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        if self == rhs {
            Degree::Even
        } else {
            Degree::Odd
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

/// An element tagged with the part it lies in. Zero occurs with both degrees.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Homogeneous {
    pub elem: GroupElement,
    pub degree: Degree,
}

#[derive(Debug)]
pub struct GradedRing {
    ring: Arc<FinRing>,
    /// `odd[i]` ⇔ carrier coordinate `i` belongs to `A₁`.
    odd: Vec<bool>,
    homogeneous: OnceLock<(Vec<Homogeneous>, usize)>,
}

impl GradedRing {
    fn build(ring: Arc<FinRing>, odd: Vec<bool>) -> GradedRing {
        GradedRing {
            ring,
            odd,
            homogeneous: OnceLock::new(),
        }
    }

    /// Grading from an arbitrary coordinate mask, fully validated.
    pub fn from_mask(ring: &Arc<FinRing>, odd: Vec<bool>) -> Result<GradedRing> {
        if odd.len() != ring.rank() {
            return Err(Error::Invalid(format!(
                "grading mask has {} entries, carrier has rank {}",
                odd.len(),
                ring.rank()
            )));
        }
        let g = Self::build(ring.clone(), odd);
        g.validate()?;
        Ok(g)
    }

    /// Everything even.
    pub fn trivial(ring: &Arc<FinRing>) -> GradedRing {
        Self::build(ring.clone(), vec![false; ring.rank()])
    }

    /// The natural grading of a builtin construction: the module coordinates of
    /// `T(R, M)`, the corner of `[R M; 0 S]`, and the off-diagonal first row of
    /// `Tₙ(R)` are odd. Other rings are graded trivially.
    pub fn standard(ring: &Arc<FinRing>) -> GradedRing {
        let odd = match ring.kind() {
            RingKind::TrivialExtension(m) => {
                let k = m.left().rank();
                (0..ring.rank()).map(|i| i >= k).collect()
            }
            RingKind::Triangular(m) => {
                let (a, b) = (m.left().rank(), m.carrier().rank());
                (0..ring.rank()).map(|i| i >= a && i < a + b).collect()
            }
            RingKind::UpperTriangular { base, n } => {
                let k = base.rank();
                (0..ring.rank()).map(|i| i >= k && i < n * k).collect()
            }
            _ => vec![false; ring.rank()],
        };
        Self::build(ring.clone(), odd)
    }

    /// Transports a grading along an isomorphism that maps coordinates to
    /// coordinates.
    pub fn transport(&self, iso: &RingIso) -> Result<GradedRing> {
        let mut odd = vec![false; iso.target.rank()];
        for (i, row) in iso.forward.images().iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    odd[j] = self.odd[i];
                }
            }
        }
        GradedRing::from_mask(&iso.target, odd)
    }

    pub fn ring(&self) -> &Arc<FinRing> {
        &self.ring
    }

    pub fn odd_mask(&self) -> &[bool] {
        &self.odd
    }

    pub fn is_odd_coord(&self, i: usize) -> bool {
        self.odd[i]
    }

    /// Even part followed by odd part, and the size of the even part.
    fn parts(&self) -> &(Vec<Homogeneous>, usize) {
        self.homogeneous.get_or_init(|| {
            let mut all = Vec::new();
            for d in [Degree::Even, Degree::Odd] {
                all.extend(
                    self.ring
                        .elements()
                        .iter()
                        .filter(|x| self.in_part(x, d))
                        .map(|x| Homogeneous {
                            elem: x.clone(),
                            degree: d,
                        }),
                );
            }
            let n_even = all.iter().filter(|h| h.degree == Degree::Even).count();
            (all, n_even)
        })
    }

    pub fn even_part(&self) -> &[Homogeneous] {
        let (all, n) = self.parts();
        &all[..*n]
    }

    pub fn odd_part(&self) -> &[Homogeneous] {
        let (all, n) = self.parts();
        &all[*n..]
    }

    /// `A₀ ∪ A₁` as one domain: the even part, then the odd part.
    pub fn homogeneous(&self) -> &[Homogeneous] {
        &self.parts().0
    }

    pub fn part(&self, d: Degree) -> &[Homogeneous] {
        match d {
            Degree::Even => self.even_part(),
            Degree::Odd => self.odd_part(),
        }
    }

    pub fn in_part(&self, x: &GroupElement, d: Degree) -> bool {
        x.coords()
            .iter()
            .zip(&self.odd)
            .all(|(&c, &o)| c == 0 || o == (d == Degree::Odd))
    }

    /// Degree of a nonzero homogeneous element; `Even` for zero.
    pub fn degree_of(&self, x: &GroupElement) -> Option<Degree> {
        if self.in_part(x, Degree::Even) {
            Some(Degree::Even)
        } else if self.in_part(x, Degree::Odd) {
            Some(Degree::Odd)
        } else {
            None
        }
    }

    pub fn homogeneous_of(&self, x: &GroupElement) -> Result<Homogeneous> {
        self.degree_of(x)
            .map(|degree| Homogeneous {
                elem: x.clone(),
                degree,
            })
            .ok_or_else(|| Error::NotHomogeneous(x.clone()))
    }

    /// Even and odd components of `x`.
    pub fn split(&self, x: &GroupElement) -> (GroupElement, GroupElement) {
        let g = self.ring.carrier();
        let pick = |want_odd: bool| {
            let c: Vec<i64> = x
                .coords()
                .iter()
                .zip(&self.odd)
                .map(|(&c, &o)| if o == want_odd { c as i64 } else { 0 })
                .collect();
            g.element(&c).expect("same rank")
        };
        (pick(false), pick(true))
    }

    /// `x ∘ₛ y = xy + (−1)^{|x||y|} yx` on elements of the stated degrees.
    pub fn superproduct_raw(
        &self,
        x: &GroupElement,
        dx: Degree,
        y: &GroupElement,
        dy: Degree,
    ) -> GroupElement {
        let r = &self.ring;
        let xy = r.mul(x, y);
        let yx = r.mul(y, x);
        if dx.sign(dy) < 0 {
            r.sub(&xy, &yx)
        } else {
            r.add(&xy, &yx)
        }
    }

    pub fn superproduct(&self, x: &Homogeneous, y: &Homogeneous) -> GroupElement {
        self.superproduct_raw(&x.elem, x.degree, &y.elem, y.degree)
    }

    /// Superproduct on untagged inputs; non-homogeneous inputs are rejected.
    pub fn try_superproduct(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let hx = self.homogeneous_of(x)?;
        let hy = self.homogeneous_of(y)?;
        Ok(self.superproduct(&hx, &hy))
    }

    /// `σ`, negating the odd coordinates.
    pub fn sigma(&self) -> GroupHom {
        let g = self.ring.carrier();
        GroupHom::from_fn(g, g, |e| {
            let (even, odd) = self.split(e);
            g.sub(&even, &odd)
        })
        .expect("sigma is diagonal")
    }

    /// Exhaustive check that `σ` is an involutive ring automorphism fixing 1.
    pub fn verify_sigma(&self) -> Verdict {
        let s = self.sigma();
        let r = &self.ring;
        let els = r.elements();
        let one = [r.one().clone()];
        let verdict = Law::new(vec![&one[..]], |t| (s.apply(t[0]), t[0].clone()))
            .check()
            .and(|| Law::new(vec![els], |t| (s.apply(&s.apply(t[0])), t[0].clone())).check())
            .and(|| {
                Law::new(vec![els, els], |t| {
                    (
                        s.apply(&r.mul(t[0], t[1])),
                        r.mul(&s.apply(t[0]), &s.apply(t[1])),
                    )
                })
                .check()
            });
        verdict
    }

    /// Exhaustive check of `A_i A_j ⊆ A_{i+j}` and `1 ∈ A₀`.
    pub fn validate(&self) -> Result<()> {
        let r = &self.ring;
        if !self.in_part(r.one(), Degree::Even) {
            return Err(Error::Invalid(format!(
                "identity {} is not even under the grading",
                r.one()
            )));
        }
        for dx in [Degree::Even, Degree::Odd] {
            for dy in [Degree::Even, Degree::Odd] {
                let (px, py) = (self.part(dx), self.part(dy));
                let v = Law::new(vec![px, py], |t| {
                    let p = r.mul(&t[0].elem, &t[1].elem);
                    let (even, odd) = self.split(&p);
                    // The component outside A_{dx+dy} must vanish.
                    let stray = if dx + dy == Degree::Even { odd } else { even };
                    (stray, r.zero())
                })
                .check();
                if let Verdict::Fail(witness) = v {
                    return Err(Error::Axiom {
                        law: "grading closure A_i A_j in A_(i+j)",
                        witness,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Grading of `T(R, M)` with `A₀ = R × 0` and `A₁ = 0 × M`.
pub fn grade_trivial_extension(t: &Arc<FinRing>) -> Result<GradedRing> {
    if t.as_trivial_extension().is_none() {
        return Err(Error::RingMismatch(format!(
            "{t} is not a trivial extension"
        )));
    }
    Ok(GradedRing::standard(t))
}

/// `x ∘ y = xy + yx`.
pub fn jordan_product(r: &FinRing, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
    r.carrier().check(x)?;
    r.carrier().check(y)?;
    Ok(r.jordan(x, y))
}

/// `[x, y] = xy − yx`.
pub fn commutator(r: &FinRing, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
    r.carrier().check(x)?;
    r.carrier().check(y)?;
    Ok(r.commutator(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{block_split_iso, triangular_ring, trivial_extension, zn_ring, Bimodule};

    fn t_zn(n: u64) -> Arc<FinRing> {
        let z = zn_ring(n).unwrap();
        trivial_extension(&z, &Bimodule::regular(&z)).unwrap()
    }

    #[test]
    fn trivial_extension_parts() {
        let t = t_zn(3);
        let g = grade_trivial_extension(&t).unwrap();
        let e = |c: &[i64]| t.carrier().element(c).unwrap();
        assert_eq!(g.degree_of(&e(&[2, 0])), Some(Degree::Even));
        assert_eq!(g.degree_of(&e(&[0, 1])), Some(Degree::Odd));
        assert_eq!(g.degree_of(&e(&[1, 1])), None);
        assert!(g.try_superproduct(&e(&[1, 1]), &e(&[1, 0])).is_err());
        assert_eq!(g.even_part().len(), 3);
        assert_eq!(g.odd_part().len(), 3);
        g.validate().unwrap();
        for x in g.odd_part() {
            for y in g.odd_part() {
                assert!(t.mul(&x.elem, &y.elem).is_zero());
                assert!(g.superproduct(x, y).is_zero());
            }
        }
        assert!(grade_trivial_extension(&zn_ring(3).unwrap()).is_err());
    }

    #[test]
    fn jordan_and_commutator_examples() {
        let z3 = zn_ring(3).unwrap();
        let e3 = |v| z3.carrier().element(&[v]).unwrap();
        assert_eq!(jordan_product(&z3, &e3(1), &e3(2)).unwrap(), e3(1));
        let z4 = zn_ring(4).unwrap();
        let e4 = |v| z4.carrier().element(&[v]).unwrap();
        assert_eq!(jordan_product(&z4, &e4(2), &e4(2)).unwrap(), e4(0));
        for x in z3.elements() {
            for y in z3.elements() {
                assert_eq!(z3.jordan(x, y), z3.carrier().scale(2, &z3.mul(x, y)));
                assert!(z3.commutator(x, y).is_zero());
            }
        }
        assert!(jordan_product(&z3, &e3(1), &e4(3)).is_err());
    }

    #[test]
    fn triangular_commutator_and_superproduct() {
        let z2 = zn_ring(2).unwrap();
        let t = triangular_ring(&z2, &Bimodule::regular(&z2), &z2).unwrap();
        let e = |c: &[i64]| t.carrier().element(c).unwrap();
        let (e11, e12) = (e(&[1, 0, 0]), e(&[0, 1, 0]));
        assert_eq!(commutator(&t, &e11, &e12).unwrap(), e12);
        let g = GradedRing::standard(&t);
        g.validate().unwrap();
        for x in g.odd_part() {
            for y in g.odd_part() {
                assert_eq!(g.superproduct(x, y), t.commutator(&x.elem, &y.elem));
            }
        }
        for x in g.even_part() {
            for y in g.homogeneous() {
                assert_eq!(g.superproduct(x, y), t.jordan(&x.elem, &y.elem));
            }
        }
    }

    #[test]
    fn sigma_is_involutive_automorphism() {
        for t in [t_zn(2), t_zn(3), t_zn(4)] {
            let g = GradedRing::standard(&t);
            let s = g.sigma();
            let e = |c: &[i64]| t.carrier().element(c).unwrap();
            assert_eq!(s.apply(&e(&[1, 0])), e(&[1, 0]));
            assert_eq!(s.apply(&e(&[0, 1])), e(&[0, -1]));
            assert!(g.verify_sigma().passed());
        }
    }

    #[test]
    fn bad_mask_rejected() {
        let t = t_zn(3);
        // Declaring R odd breaks 1 ∈ A₀.
        assert!(GradedRing::from_mask(&t, vec![true, false]).is_err());
        assert!(GradedRing::from_mask(&t, vec![false]).is_err());
    }

    #[test]
    fn upper_triangular_standard_grading_matches_transport() {
        let z2 = zn_ring(2).unwrap();
        let iso = block_split_iso(&z2, 3, 4096).unwrap();
        let g = GradedRing::standard(&iso.source);
        g.validate().unwrap();
        let h = g.transport(&iso).unwrap();
        assert_eq!(h.odd_mask(), GradedRing::standard(&iso.target).odd_mask());
    }
}
