//! Additive and biadditive maps on ring carriers. These are the candidate
//! spaces for every derivation-like object in the crate.

use std::sync::Arc;

use serde::Serialize;

use crate::abelian::{AbelianGroup, Bilinear, ChoiceSpace, GroupElement, GroupHom};
use crate::error::{Error, Result};
use crate::finring::FinRing;
use crate::graded::{Degree, GradedRing};

/// An additive map, stored by generator images.
pub type AdditiveMap = GroupHom;

/// A biadditive map, stored by generator-pair images.
pub type BiadditiveMap = Bilinear;

pub fn map_from_generator_images(
    src: &AbelianGroup,
    dst: &AbelianGroup,
    images: Vec<Vec<i64>>,
) -> Result<AdditiveMap> {
    GroupHom::new(src.clone(), dst.clone(), images)
}

pub fn biadditive_from_images(
    left: &AbelianGroup,
    right: &AbelianGroup,
    dst: &AbelianGroup,
    images: Vec<Vec<Vec<i64>>>,
) -> Result<BiadditiveMap> {
    Bilinear::new(left.clone(), right.clone(), dst.clone(), images)
}

/// An endomorphism of a graded ring shifting degrees by `degree`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GradedMap {
    map: AdditiveMap,
    degree: Degree,
}

impl GradedMap {
    pub fn map(&self) -> &AdditiveMap {
        &self.map
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        self.map.apply(x)
    }

    pub(crate) fn unchecked(map: AdditiveMap, degree: Degree) -> GradedMap {
        GradedMap { map, degree }
    }
}

/// Accepts `d` as a map of the given degree iff `d(A_j) ⊆ A_{i+j}`. Gradings
/// are coordinate masks, so it suffices to look at generator images; the
/// witness is the first generator whose image leaves the expected part.
pub fn graded_map(d: AdditiveMap, degree: Degree, g: &GradedRing) -> Result<GradedMap> {
    let carrier = g.ring().carrier();
    if d.src() != carrier || d.dst() != carrier {
        return Err(Error::RingMismatch(
            "graded map must be an endomorphism of the ring carrier".into(),
        ));
    }
    for (i, row) in d.images().iter().enumerate() {
        let expect_odd = g.is_odd_coord(i) != (degree == Degree::Odd);
        if row
            .iter()
            .enumerate()
            .any(|(j, &v)| v != 0 && g.is_odd_coord(j) != expect_odd)
        {
            return Err(Error::BlockViolation {
                degree: degree as u8,
                witness: carrier.generator(i),
            });
        }
    }
    Ok(GradedMap { map: d, degree })
}

/// Whether entry `(i, j)` of the image matrix may be nonzero for a map of
/// degree `degree`.
pub(crate) fn graded_entry_allowed(g: &GradedRing, degree: Degree, i: usize, j: usize) -> bool {
    (g.is_odd_coord(i) != g.is_odd_coord(j)) == (degree == Degree::Odd)
}

/// Checks the block constraint `B(A_i, A_j) ⊆ A_{i+j}` on generator pairs.
pub fn check_biadditive_blocks(b: &BiadditiveMap, g: &GradedRing) -> Result<()> {
    let carrier = g.ring().carrier();
    if b.left() != carrier || b.right() != carrier || b.dst() != carrier {
        return Err(Error::RingMismatch(
            "graded biadditive map must act on the ring carrier".into(),
        ));
    }
    for (i, row) in b.images().iter().enumerate() {
        for (j, img) in row.iter().enumerate() {
            let want_odd = g.is_odd_coord(i) != g.is_odd_coord(j);
            let bad = img
                .coords()
                .iter()
                .enumerate()
                .any(|(k, &v)| v != 0 && g.is_odd_coord(k) != want_odd);
            if bad {
                let degree = u8::from(want_odd);
                let witness = GroupElement::concat(&[&carrier.generator(i), &carrier.generator(j)]);
                return Err(Error::BlockViolation { degree, witness });
            }
        }
    }
    Ok(())
}

/// Biadditive maps on a graded ring satisfying the block constraint, listed in
/// lexicographic order of their generator-pair images.
#[derive(Clone, Debug)]
pub struct GradedBiadditiveSpace {
    carrier: AbelianGroup,
    space: ChoiceSpace,
}

impl GradedBiadditiveSpace {
    pub fn new(g: &GradedRing) -> Self {
        let c = g.ring().carrier().clone();
        let f = c.factors();
        let mut slots = Vec::new();
        for i in 0..c.rank() {
            for j in 0..c.rank() {
                let pair = crate::abelian::gcd(f[i], f[j]);
                let want_odd = g.is_odd_coord(i) != g.is_odd_coord(j);
                for (k, &fk) in f.iter().enumerate() {
                    if g.is_odd_coord(k) != want_odd {
                        slots.push(vec![0]);
                    } else {
                        let gk = crate::abelian::gcd(pair, fk);
                        let step = fk / gk;
                        slots.push((0..gk).map(|t| t * step).collect());
                    }
                }
            }
        }
        GradedBiadditiveSpace {
            carrier: c,
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

    pub fn get(&self, index: u128) -> BiadditiveMap {
        let flat = self.space.decode(index);
        let k = self.carrier.rank();
        let images = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let start = (i * k + j) * k;
                        let c: Vec<i64> =
                            flat[start..start + k].iter().map(|&v| v as i64).collect();
                        self.carrier.element(&c).expect("reduced")
                    })
                    .collect()
            })
            .collect();
        Bilinear::from_reduced(
            self.carrier.clone(),
            self.carrier.clone(),
            self.carrier.clone(),
            images,
        )
    }
}

/// `I_a(x) = [x, a] = xa − ax`.
pub fn inner_derivation(ring: &Arc<FinRing>, a: &GroupElement) -> Result<AdditiveMap> {
    ring.carrier().check(a)?;
    GroupHom::from_fn(ring.carrier(), ring.carrier(), |x| ring.commutator(x, a))
}

/// Serializable form of a map: generator images as coordinate tuples.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MapListing {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u8>,
    pub images: Vec<Vec<u64>>,
}

impl From<&GroupHom> for MapListing {
    fn from(h: &GroupHom) -> Self {
        MapListing {
            degree: None,
            images: h.images().to_vec(),
        }
    }
}

impl From<&GradedMap> for MapListing {
    fn from(d: &GradedMap) -> Self {
        MapListing {
            degree: Some(d.degree() as u8),
            images: d.map().images().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BiadditiveListing {
    pub pair_images: Vec<Vec<GroupElement>>,
}

impl From<&Bilinear> for BiadditiveListing {
    fn from(b: &Bilinear) -> Self {
        BiadditiveListing {
            pair_images: b.images().to_vec(),
        }
    }
}
