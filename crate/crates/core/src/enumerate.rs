//! Brute-force oracle: every map of a derivation-like class on a small
//! instance, found by filtering the full candidate space.
//!
//! Candidate spaces already respect the generator orders and, for graded
//! classes, the block shape, so the filter only tests the identity itself.
//! Candidates are indexed in mixed radix; workers take index ranges and rayon
//! reassembles survivors in index order, so output never depends on the
//! number of threads.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{enumerate_homs, AbelianGroup, HomSpace};
use crate::axioms::{
    is_derivation, is_jordan_derivation, is_jordan_super_biderivation, is_jordan_superderivation,
    DerivationTarget,
};
use crate::error::Result;
use crate::graded::{Degree, GradedRing};
use crate::maps::{
    graded_entry_allowed, AdditiveMap, BiadditiveMap, GradedBiadditiveSpace, GradedMap,
};
use crate::structure::{
    f_symmetry_law, g_condition_law, jordan_module_hom_law, TrivialExtDecomposition,
    TrivialPresentation,
};

/// Survivors of a filter together with the size of the space searched.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration<T> {
    pub candidates: u128,
    pub survivors: Vec<T>,
}

impl<T> Enumeration<T> {
    pub fn count(&self) -> usize {
        self.survivors.len()
    }
}

/// Keeps `produce(k)` for every index `k < len` that yields a value, in index order.
fn filter_indexed<T: Send>(len: u128, produce: impl Fn(u128) -> Option<T> + Sync) -> Vec<T> {
    let len = u64::try_from(len).expect("bounded candidate space");
    (0..len)
        .into_par_iter()
        .filter_map(|k| produce(k as u128))
        .collect()
}

/// Homs of the carrier of `g` shifting degrees by `degree`.
pub fn graded_candidates(g: &GradedRing, degree: Degree) -> HomSpace {
    let c = g.ring().carrier();
    HomSpace::masked(c, c, |i, j| graded_entry_allowed(g, degree, i, j))
}

pub fn enumerate_jordan_superderivations(
    g: &GradedRing,
    degree: Degree,
    bound: u64,
) -> Result<Enumeration<GradedMap>> {
    let space = graded_candidates(g, degree);
    space
        .space()
        .ensure_within(&format!("degree-{degree} maps on {}", g.ring()), bound)?;
    let survivors = filter_indexed(space.len(), |k| {
        let d = GradedMap::unchecked(space.get(k), degree);
        is_jordan_superderivation(g, &d).passed().then_some(d)
    });
    Ok(Enumeration {
        candidates: space.len(),
        survivors,
    })
}

fn enumerate_by<T: DerivationTarget + ?Sized>(
    t: &T,
    bound: u64,
    keep: impl Fn(&T, &AdditiveMap) -> bool + Sync,
) -> Result<Enumeration<AdditiveMap>> {
    let space = enumerate_homs(t.source().carrier(), t.group(), bound)?;
    let survivors = filter_indexed(space.len(), |k| {
        let d = space.get(k);
        keep(t, &d).then_some(d)
    });
    Ok(Enumeration {
        candidates: space.len(),
        survivors,
    })
}

/// Derivations `R → R` or `R → M`.
pub fn enumerate_derivations<T: DerivationTarget + ?Sized>(
    t: &T,
    bound: u64,
) -> Result<Enumeration<AdditiveMap>> {
    enumerate_by(t, bound, |t, d| is_derivation(t, d).passed())
}

/// Jordan derivations `R → R` or `R → M`.
pub fn enumerate_jordan_derivations<T: DerivationTarget + ?Sized>(
    t: &T,
    bound: u64,
) -> Result<Enumeration<AdditiveMap>> {
    enumerate_by(t, bound, |t, d| is_jordan_derivation(t, d).passed())
}

pub fn enumerate_jordan_super_biderivations(
    g: &GradedRing,
    bound: u64,
) -> Result<Enumeration<BiadditiveMap>> {
    let space = GradedBiadditiveSpace::new(g);
    space
        .space()
        .ensure_within(&format!("graded biadditive maps on {}", g.ring()), bound)?;
    let survivors = filter_indexed(space.len(), |k| {
        let b = space.get(k);
        is_jordan_super_biderivation(g, &b).passed().then_some(b)
    });
    Ok(Enumeration {
        candidates: space.len(),
        survivors,
    })
}

/// The maps obtained by assembling components `(δ, g)` and `(γ, f)` that
/// satisfy the classification conditions on `T(R, M)`, pulled back to the
/// presented ring.
#[derive(Clone, Debug)]
pub struct ComponentFamily {
    pub even: Vec<GradedMap>,
    pub odd: Vec<GradedMap>,
}

/// Builds every degree-0 and degree-1 map allowed by the classification:
/// `δ` a Jordan derivation of `R` with `g(r∘m) = r∘g(m) + δ(r)∘m`, and `γ` a
/// Jordan derivation `R → M` with `f(r∘m) = r∘f(m)` and `m∘f(m') = f(m)∘m'`.
/// Nothing here consults the superderivation checker.
pub fn generate_from_components(p: &TrivialPresentation, bound: u64) -> Result<ComponentFamily> {
    let (r, m) = (p.base(), &p.module);
    let (rc, mc) = (r.carrier(), m.carrier());

    let deltas = enumerate_jordan_derivations(&**r, bound)?.survivors;
    let gs = enumerate_homs(mc, mc, bound)?;
    let gammas = enumerate_jordan_derivations(&**m, bound)?.survivors;
    let fs = enumerate_homs(mc, rc, bound)?;

    let zero = |a: &AbelianGroup, b: &AbelianGroup| AdditiveMap::zero(a, b);
    let mut even = Vec::new();
    for delta in &deltas {
        let ok = filter_indexed(gs.len(), |k| {
            let g = gs.get(k);
            let ok = g_condition_law(m, delta, &g).check().passed();
            ok.then_some(g)
        });
        for g in ok {
            let c = TrivialExtDecomposition {
                delta: delta.clone(),
                g,
                gamma: zero(rc, mc),
                f: zero(mc, rc),
            };
            even.push(GradedMap::unchecked(
                p.pull_back_map(&c.even_map(p))?,
                Degree::Even,
            ));
        }
    }
    let valid_fs = filter_indexed(fs.len(), |k| {
        let f = fs.get(k);
        let ok =
            jordan_module_hom_law(m, &f).check().passed() && f_symmetry_law(m, &f).check().passed();
        ok.then_some(f)
    });
    let mut odd = Vec::new();
    for gamma in &gammas {
        for f in &valid_fs {
            let c = TrivialExtDecomposition {
                delta: zero(rc, rc),
                g: zero(mc, mc),
                gamma: gamma.clone(),
                f: f.clone(),
            };
            odd.push(GradedMap::unchecked(
                p.pull_back_map(&c.odd_map(p))?,
                Degree::Odd,
            ));
        }
    }
    Ok(ComponentFamily { even, odd })
}

/// Canonical set form of a list of maps, for order-free comparison.
pub fn map_set<'a>(maps: impl IntoIterator<Item = &'a GradedMap>) -> BTreeSet<Vec<Vec<u64>>> {
    maps.into_iter()
        .map(|d| d.map().images().to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::abelian::AbelianGroup;
    use crate::axioms::is_jordan_biderivation;
    use crate::finring::{trivial_extension, upper_triangular, zn_ring, Bimodule, FinRing};
    use crate::DEFAULT_BOUND;

    fn t_zn(n: u64) -> Arc<FinRing> {
        let z = zn_ring(n).unwrap();
        trivial_extension(&z, &Bimodule::regular(&z)).unwrap()
    }

    fn std(ring: &Arc<FinRing>) -> GradedRing {
        GradedRing::standard(ring)
    }

    #[test]
    fn t_z2_survivors_match_plain_filter() {
        let g = std(&t_zn(2));
        for degree in [Degree::Even, Degree::Odd] {
            let e = enumerate_jordan_superderivations(&g, degree, DEFAULT_BOUND).unwrap();
            assert_eq!(e.candidates, 4);
            let plain: Vec<_> = graded_candidates(&g, degree)
                .iter()
                .map(|h| GradedMap::unchecked(h, degree))
                .filter(|d| is_jordan_superderivation(&g, d).passed())
                .collect();
            assert_eq!(e.survivors, plain);
            // Every block-shaped map survives on this ring.
            assert_eq!(e.count(), 4);
        }
    }

    #[test]
    fn t_z3_counts() {
        // Degree 0: δ = 0 (the only Jordan derivation of Z3), any Z3-linear g.
        // Degree 1: γ = 0 since γ(1) = 4γ(1); any f(m) = cm.
        let g = std(&t_zn(3));
        let even = enumerate_jordan_superderivations(&g, Degree::Even, DEFAULT_BOUND).unwrap();
        let odd = enumerate_jordan_superderivations(&g, Degree::Odd, DEFAULT_BOUND).unwrap();
        assert_eq!((even.count(), odd.count()), (3, 3));
    }

    #[test]
    fn zero_map_always_survives() {
        let g = std(&t_zn(3));
        for degree in [Degree::Even, Degree::Odd] {
            let e = enumerate_jordan_superderivations(&g, degree, DEFAULT_BOUND).unwrap();
            assert!(e.survivors[0].map().is_zero());
        }
        let b = enumerate_jordan_super_biderivations(&g, DEFAULT_BOUND).unwrap();
        assert!(b.survivors[0].is_zero());
    }

    #[test]
    fn odd_survivors_closed_under_negation() {
        let g = std(&t_zn(3));
        let odd = enumerate_jordan_superderivations(&g, Degree::Odd, DEFAULT_BOUND).unwrap();
        let set = map_set(&odd.survivors);
        for d in &odd.survivors {
            assert!(set.contains(d.map().neg().images()));
        }
    }

    #[test]
    fn derivations_of_prime_fields_vanish() {
        for p in [2, 3, 5, 7] {
            let r = zn_ring(p).unwrap();
            let e = enumerate_derivations(&*r, DEFAULT_BOUND).unwrap();
            assert_eq!(e.count(), 1);
            assert!(e.survivors[0].is_zero());
        }
    }

    #[test]
    fn derivations_within_jordan_derivations() {
        let t = upper_triangular(&zn_ring(2).unwrap(), 2).unwrap();
        let d = enumerate_derivations(&*t, DEFAULT_BOUND).unwrap();
        let j = enumerate_jordan_derivations(&*t, DEFAULT_BOUND).unwrap();
        assert!(d.count() <= j.count());
        assert!(d.survivors.iter().all(|x| j.survivors.contains(x)));
    }

    #[test]
    fn t_z2_biderivations_are_jordan_biderivations() {
        let t = t_zn(2);
        let b = enumerate_jordan_super_biderivations(&std(&t), DEFAULT_BOUND).unwrap();
        assert!(b.count() > 1);
        for m in &b.survivors {
            assert!(is_jordan_biderivation(&t, m).passed());
        }
    }

    #[test]
    fn bound_is_enforced() {
        let z2 = zn_ring(2).unwrap();
        let t3 = upper_triangular(&z2, 3).unwrap();
        let r = enumerate_jordan_superderivations(&std(&t3), Degree::Even, DEFAULT_BOUND);
        assert!(matches!(r, Err(crate::Error::BoundExceeded { .. })));
        let big = AbelianGroup::new(vec![2; 7]).unwrap();
        assert!(enumerate_homs(&big, &big, DEFAULT_BOUND).is_err());
    }

    #[test]
    fn components_rebuild_survivors() {
        let t = t_zn(3);
        let p = TrivialPresentation::of(&t, DEFAULT_BOUND).unwrap();
        let fam = generate_from_components(&p, DEFAULT_BOUND).unwrap();
        let even =
            enumerate_jordan_superderivations(&p.source, Degree::Even, DEFAULT_BOUND).unwrap();
        let odd = enumerate_jordan_superderivations(&p.source, Degree::Odd, DEFAULT_BOUND).unwrap();
        assert_eq!(map_set(&fam.even), map_set(&even.survivors));
        assert_eq!(map_set(&fam.odd), map_set(&odd.survivors));
    }

    #[test]
    fn order_independent_of_pool_size() {
        let g = std(&t_zn(3));
        let run = |n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| enumerate_jordan_super_biderivations(&g, DEFAULT_BOUND).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
