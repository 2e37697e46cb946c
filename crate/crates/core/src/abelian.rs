//! Finite abelian groups `ℤ_{n₁} × … × ℤ_{n_k}` kept in the factor order they
//! were built with, and homomorphisms between them stored as generator-image
//! matrices.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Element of an [`AbelianGroup`]; coordinates are always reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Coordinates `range` as a standalone element.
    pub fn slice(&self, range: std::ops::Range<usize>) -> GroupElement {
        GroupElement(self.0[range].to_vec())
    }

    pub fn concat(parts: &[&GroupElement]) -> GroupElement {
        GroupElement(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidFactor(bad));
        }
        Ok(AbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        AbelianGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &n| acc.saturating_mul(n as u128))
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, &n| lcm(acc, n))
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        AbelianGroup { factors }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.0.len() == self.factors.len() && x.0.iter().zip(&self.factors).all(|(&c, &n)| c < n)
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                element: x.0.clone(),
                factors: self.factors.clone(),
            })
        }
    }

    /// Builds an element from arbitrary integer coordinates, reducing each one.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::GroupMismatch {
                element: coords.iter().map(|&c| c as u64).collect(),
                factors: self.factors.clone(),
            });
        }
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// The `i`-th standard generator (1 in factor `i`, reduced).
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut c = vec![0; self.rank()];
        c[i] = 1 % self.factors[i];
        GroupElement(c)
    }

    pub fn generators(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.rank()).map(|i| self.generator(i))
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        debug_assert!(self.contains(x) && self.contains(y));
        GroupElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.factors)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect(),
        )
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&self.factors)
                .map(|(&a, &n)| (n - a) % n)
                .collect(),
        )
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.add(x, &self.neg(y))
    }

    /// `k·x` for any integer `k`.
    pub fn scale(&self, k: i64, x: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&self.factors)
                .map(|(&a, &n)| {
                    let k = k.rem_euclid(n as i64) as u128;
                    ((k * a as u128) % n as u128) as u64
                })
                .collect(),
        )
    }

    /// Sum of an iterator of elements.
    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// All elements in lexicographic coordinate order (first coordinate most significant).
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let order = self.order();
        (0..order).map(move |k| self.element_at(k))
    }

    pub fn element_at(&self, mut index: u128) -> GroupElement {
        let mut c = vec![0; self.rank()];
        for (slot, &n) in self.factors.iter().enumerate().rev() {
            c[slot] = (index % n as u128) as u64;
            index /= n as u128;
        }
        GroupElement(c)
    }

    pub fn index_of(&self, x: &GroupElement) -> u128 {
        x.0.iter()
            .zip(&self.factors)
            .fold(0u128, |acc, (&c, &n)| acc * n as u128 + c as u128)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

/// Values `v` in `ℤ_m` with `order·v ≡ 0 (mod m)`, ascending.
fn admissible_values(order: u64, modulus: u64) -> Vec<u64> {
    let g = gcd(order, modulus);
    let step = modulus / g;
    (0..g).map(|k| k * step).collect()
}

/// Additive map between two groups, given by the images of the source generators.
///
/// Row `i` holds the image of generator `i` as coordinates in the destination.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupHom {
    src: AbelianGroup,
    dst: AbelianGroup,
    images: Vec<Vec<u64>>,
}

impl GroupHom {
    /// Validates the generator-order constraint `nᵢ·m_{ij} ≡ 0 (mod m_j)`.
    pub fn new(src: AbelianGroup, dst: AbelianGroup, images: Vec<Vec<i64>>) -> Result<Self> {
        if images.len() != src.rank() || images.iter().any(|row| row.len() != dst.rank()) {
            return Err(Error::Shape {
                expected: (src.rank(), dst.rank()),
                got: (images.len(), images.first().map_or(0, Vec::len)),
            });
        }
        let mut reduced = Vec::with_capacity(images.len());
        for (i, row) in images.iter().enumerate() {
            let n = src.factors[i];
            let mut r = Vec::with_capacity(row.len());
            for (&v, &m) in row.iter().zip(&dst.factors) {
                let v = v.rem_euclid(m as i64) as u64;
                if !(n as u128 * v as u128).is_multiple_of(m as u128) {
                    return Err(Error::NotWellDefined {
                        generator: i,
                        order: n,
                        value: v,
                        modulus: m,
                    });
                }
                r.push(v);
            }
            reduced.push(r);
        }
        Ok(GroupHom {
            src,
            dst,
            images: reduced,
        })
    }

    fn from_reduced(src: AbelianGroup, dst: AbelianGroup, images: Vec<Vec<u64>>) -> Self {
        GroupHom { src, dst, images }
    }

    /// Builds a hom from the values of an additive function on the generators.
    pub fn from_fn(
        src: &AbelianGroup,
        dst: &AbelianGroup,
        f: impl Fn(&GroupElement) -> GroupElement,
    ) -> Result<Self> {
        let images = src
            .generators()
            .map(|g| f(&g).0.iter().map(|&c| c as i64).collect())
            .collect();
        Self::new(src.clone(), dst.clone(), images)
    }

    pub fn identity(g: &AbelianGroup) -> Self {
        let images = (0..g.rank())
            .map(|i| {
                (0..g.rank())
                    .map(|j| u64::from(i == j) % g.factors[j])
                    .collect()
            })
            .collect();
        Self::from_reduced(g.clone(), g.clone(), images)
    }

    pub fn zero(src: &AbelianGroup, dst: &AbelianGroup) -> Self {
        Self::from_reduced(
            src.clone(),
            dst.clone(),
            vec![vec![0; dst.rank()]; src.rank()],
        )
    }

    pub fn src(&self) -> &AbelianGroup {
        &self.src
    }

    pub fn dst(&self) -> &AbelianGroup {
        &self.dst
    }

    pub fn images(&self) -> &[Vec<u64>] {
        &self.images
    }

    pub fn image_of_generator(&self, i: usize) -> GroupElement {
        GroupElement(self.images[i].clone())
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        debug_assert!(self.src.contains(x), "{x} not in {}", self.src);
        let mut out = vec![0u64; self.dst.rank()];
        for (xi, row) in x.0.iter().zip(&self.images) {
            if *xi == 0 {
                continue;
            }
            for ((o, &m), &n) in out.iter_mut().zip(row).zip(&self.dst.factors) {
                *o = ((*o as u128 + *xi as u128 * m as u128) % n as u128) as u64;
            }
        }
        GroupElement(out)
    }

    pub fn try_apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.src.check(x)?;
        Ok(self.apply(x))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.dst != other.src {
            return Err(Error::RingMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.src, self.dst, other.src, other.dst
            )));
        }
        let images = self
            .src
            .generators()
            .map(|g| other.apply(&self.apply(&g)).0)
            .collect();
        Ok(Self::from_reduced(
            self.src.clone(),
            other.dst.clone(),
            images,
        ))
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::RingMismatch(
                "adding homs with different shapes".into(),
            ));
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .zip(&self.dst.factors)
                    .map(|((&x, &y), &n)| (x + y) % n)
                    .collect()
            })
            .collect();
        Ok(Self::from_reduced(
            self.src.clone(),
            self.dst.clone(),
            images,
        ))
    }

    pub fn neg(&self) -> GroupHom {
        let images = self
            .images
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.dst.factors)
                    .map(|(&x, &n)| (n - x) % n)
                    .collect()
            })
            .collect();
        Self::from_reduced(self.src.clone(), self.dst.clone(), images)
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().flatten().all(|&v| v == 0)
    }
}

impl Serialize for GroupHom {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

/// Biadditive map `G × H → K`, given by the images of generator pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bilinear {
    left: AbelianGroup,
    right: AbelianGroup,
    dst: AbelianGroup,
    /// `images[i][j]` = image of (generator i, generator j).
    images: Vec<Vec<GroupElement>>,
}

impl Bilinear {
    /// Validates `gcd(nᵢ, n'ⱼ)·B(eᵢ, e'ⱼ) = 0` for every generator pair.
    pub fn new(
        left: AbelianGroup,
        right: AbelianGroup,
        dst: AbelianGroup,
        images: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        if images.len() != left.rank() || images.iter().any(|row| row.len() != right.rank()) {
            return Err(Error::Shape {
                expected: (left.rank(), right.rank()),
                got: (images.len(), images.first().map_or(0, Vec::len)),
            });
        }
        let mut out = Vec::with_capacity(images.len());
        for (i, row) in images.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, img) in row.iter().enumerate() {
                let g = gcd(left.factors[i], right.factors[j]);
                let e = dst.element(img)?;
                if !dst.scale(g as i64, &e).is_zero() {
                    let k = e.0.iter().position(|&c| c != 0).unwrap_or(0);
                    return Err(Error::NotWellDefined {
                        generator: i * right.rank() + j,
                        order: g,
                        value: e.0[k],
                        modulus: dst.factors[k],
                    });
                }
                r.push(e);
            }
            out.push(r);
        }
        Ok(Bilinear {
            left,
            right,
            dst,
            images: out,
        })
    }

    pub fn from_fn(
        left: &AbelianGroup,
        right: &AbelianGroup,
        dst: &AbelianGroup,
        f: impl Fn(&GroupElement, &GroupElement) -> GroupElement,
    ) -> Result<Self> {
        let images = left
            .generators()
            .map(|a| {
                right
                    .generators()
                    .map(|b| f(&a, &b).0.iter().map(|&c| c as i64).collect())
                    .collect()
            })
            .collect();
        Self::new(left.clone(), right.clone(), dst.clone(), images)
    }

    pub fn zero(left: &AbelianGroup, right: &AbelianGroup, dst: &AbelianGroup) -> Self {
        Bilinear {
            left: left.clone(),
            right: right.clone(),
            dst: dst.clone(),
            images: vec![vec![dst.zero(); right.rank()]; left.rank()],
        }
    }

    pub(crate) fn from_reduced(
        left: AbelianGroup,
        right: AbelianGroup,
        dst: AbelianGroup,
        images: Vec<Vec<GroupElement>>,
    ) -> Self {
        Bilinear {
            left,
            right,
            dst,
            images,
        }
    }

    pub fn left(&self) -> &AbelianGroup {
        &self.left
    }

    pub fn right(&self) -> &AbelianGroup {
        &self.right
    }

    pub fn dst(&self) -> &AbelianGroup {
        &self.dst
    }

    pub fn images(&self) -> &[Vec<GroupElement>] {
        &self.images
    }

    pub fn apply(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let mut out = vec![0u64; self.dst.rank()];
        for (i, &xi) in x.0.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.0.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let k = xi as u128 * yj as u128;
                for ((o, &c), &n) in out
                    .iter_mut()
                    .zip(&self.images[i][j].0)
                    .zip(&self.dst.factors)
                {
                    *o = ((*o as u128 + k * c as u128) % n as u128) as u64;
                }
            }
        }
        GroupElement(out)
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().flatten().all(GroupElement::is_zero)
    }

    pub fn neg(&self) -> Bilinear {
        let images = self
            .images
            .iter()
            .map(|row| row.iter().map(|e| self.dst.neg(e)).collect())
            .collect();
        Self::from_reduced(
            self.left.clone(),
            self.right.clone(),
            self.dst.clone(),
            images,
        )
    }
}

impl Serialize for Bilinear {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

/// Cartesian product of per-slot value lists, indexed in mixed radix with
/// slot 0 most significant. Backs every enumeration in the crate.
#[derive(Clone, Debug)]
pub struct ChoiceSpace {
    slots: Vec<Vec<u64>>,
}

impl ChoiceSpace {
    pub fn new(slots: Vec<Vec<u64>>) -> Self {
        debug_assert!(slots.iter().all(|s| !s.is_empty()));
        ChoiceSpace { slots }
    }

    pub fn len(&self) -> u128 {
        self.slots
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn slots(&self) -> &[Vec<u64>] {
        &self.slots
    }

    pub fn decode(&self, mut index: u128) -> Vec<u64> {
        let mut out = vec![0; self.slots.len()];
        for (slot, choices) in self.slots.iter().enumerate().rev() {
            let n = choices.len() as u128;
            out[slot] = choices[(index % n) as usize];
            index /= n;
        }
        out
    }

    pub fn ensure_within(&self, what: &str, bound: u64) -> Result<()> {
        let size = self.len();
        if size > bound as u128 {
            return Err(Error::BoundExceeded {
                what: what.to_string(),
                size,
                bound,
            });
        }
        Ok(())
    }
}

/// Homs `src → dst` whose entry `(i, j)` is allowed to be nonzero only when
/// `allowed(i, j)`; deterministic lexicographic order of the image matrix.
#[derive(Clone, Debug)]
pub struct HomSpace {
    src: AbelianGroup,
    dst: AbelianGroup,
    space: ChoiceSpace,
}

impl HomSpace {
    pub fn masked(
        src: &AbelianGroup,
        dst: &AbelianGroup,
        allowed: impl Fn(usize, usize) -> bool,
    ) -> Self {
        let mut slots = Vec::with_capacity(src.rank() * dst.rank());
        for (i, &n) in src.factors.iter().enumerate() {
            for (j, &m) in dst.factors.iter().enumerate() {
                slots.push(if allowed(i, j) {
                    admissible_values(n, m)
                } else {
                    vec![0]
                });
            }
        }
        HomSpace {
            src: src.clone(),
            dst: dst.clone(),
            space: ChoiceSpace::new(slots),
        }
    }

    pub fn len(&self) -> u128 {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn space(&self) -> &ChoiceSpace {
        &self.space
    }

    pub fn get(&self, index: u128) -> GroupHom {
        let flat = self.space.decode(index);
        let k = self.dst.rank().max(1);
        let images = if self.dst.rank() == 0 {
            vec![vec![]; self.src.rank()]
        } else {
            flat.chunks(k).map(<[u64]>::to_vec).collect()
        };
        GroupHom::from_reduced(self.src.clone(), self.dst.clone(), images)
    }

    /// Homs with index in `range`, in order. Used to partition work.
    pub fn range(&self, range: std::ops::Range<u128>) -> impl Iterator<Item = GroupHom> + '_ {
        range.map(move |k| self.get(k))
    }

    pub fn iter(&self) -> impl Iterator<Item = GroupHom> + '_ {
        self.range(0..self.len())
    }
}

/// All homs `src → dst`; errors if there are more than `bound` of them.
pub fn enumerate_homs(src: &AbelianGroup, dst: &AbelianGroup, bound: u64) -> Result<HomSpace> {
    let space = HomSpace::masked(src, dst, |_, _| true);
    space
        .space
        .ensure_within(&format!("Hom({src}, {dst})"), bound)?;
    Ok(space)
}

/// `∏ gcd(nᵢ, m_j)`.
pub fn hom_count(src: &AbelianGroup, dst: &AbelianGroup) -> u128 {
    src.factors
        .iter()
        .flat_map(|&n| dst.factors.iter().map(move |&m| gcd(n, m) as u128))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn direct_sum_orders() {
        assert_eq!(g(&[2]).direct_sum(&g(&[2])).order(), 4);
        assert_eq!(g(&[3]).direct_sum(&AbelianGroup::trivial()), g(&[3]));
        let s = g(&[2, 3]).direct_sum(&g(&[4]));
        assert_eq!(s.factors(), &[2, 3, 4]);
        assert_eq!(s.order(), 24);
    }

    #[test]
    fn zero_factor_rejected() {
        assert!(matches!(
            AbelianGroup::new(vec![2, 0]),
            Err(Error::InvalidFactor(0))
        ));
    }

    #[test]
    fn hom_apply_examples() {
        let z4 = g(&[4]);
        let x = z4.element(&[3]).unwrap();
        assert_eq!(GroupHom::identity(&z4).apply(&x), x);
        assert!(GroupHom::zero(&z4, &g(&[6])).apply(&x).is_zero());

        let h = GroupHom::new(g(&[2]), z4.clone(), vec![vec![2]]).unwrap();
        assert_eq!(h.apply(&g(&[2]).generator(0)).coords(), &[2]);
    }

    #[test]
    fn hom_order_constraint() {
        let err = GroupHom::new(g(&[2]), g(&[4]), vec![vec![1]]).unwrap_err();
        assert!(matches!(err, Error::NotWellDefined { .. }));
    }

    #[test]
    fn hom_apply_rejects_foreign_element() {
        let h = GroupHom::identity(&g(&[4]));
        assert!(h.try_apply(&g(&[2, 2]).zero()).is_err());
    }

    #[test]
    fn small_hom_counts() {
        let z2 = g(&[2]);
        let homs: Vec<_> = enumerate_homs(&z2, &z2, 100).unwrap().iter().collect();
        assert_eq!(homs.len(), 2);
        assert!(homs[0].is_zero());
        assert_eq!(homs[1], GroupHom::identity(&z2));

        let only = enumerate_homs(&z2, &g(&[3]), 100).unwrap();
        assert_eq!(only.len(), 1);
        assert!(only.get(0).is_zero());
    }

    #[test]
    fn klein_endomorphisms_by_direct_enumeration() {
        // Oracle: every 2x2 matrix over Z2 is a hom of Z2 x Z2.
        let v = g(&[2, 2]);
        let mut direct = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        direct.push(vec![vec![a, b], vec![c, d]]);
                    }
                }
            }
        }
        let listed: Vec<Vec<Vec<u64>>> = enumerate_homs(&v, &v, 100)
            .unwrap()
            .iter()
            .map(|h| h.images().to_vec())
            .collect();
        assert_eq!(listed.len(), 16);
        assert_eq!(listed, direct);
    }

    #[test]
    fn bound_exceeded() {
        let v = g(&[2, 2, 2]);
        assert!(matches!(
            enumerate_homs(&v, &v, 511),
            Err(Error::BoundExceeded { size: 512, .. })
        ));
    }

    #[test]
    fn composition_and_sum() {
        let z4 = g(&[4]);
        let two = GroupHom::new(z4.clone(), z4.clone(), vec![vec![2]]).unwrap();
        assert!(two.then(&two).unwrap().is_zero());
        assert!(two.add(&two).unwrap().is_zero());
        assert_eq!(two.neg(), two);
    }

    #[test]
    fn bilinear_constraint() {
        let z2 = g(&[2]);
        let z4 = g(&[4]);
        assert!(Bilinear::new(z2.clone(), z4.clone(), z4.clone(), vec![vec![vec![1]]]).is_err());
        let b = Bilinear::new(z2.clone(), z4.clone(), z4.clone(), vec![vec![vec![2]]]).unwrap();
        let x = z2.generator(0);
        let y = z4.element(&[3]).unwrap();
        assert_eq!(b.apply(&x, &y).coords(), &[2]);
    }

    #[test]
    fn element_indexing_round_trip() {
        let v = g(&[2, 3, 4]);
        for (k, x) in v.elements().enumerate() {
            assert_eq!(v.index_of(&x), k as u128);
        }
    }
}
