//! Verdicts of universally quantified identities, and the quantifier engine
//! every checker in the crate runs on.
//!
//! A [`Law`] is a family of finite domains together with an evaluator that
//! returns both sides of an identity for one tuple. Exhaustive checking walks
//! the product of the domains in lexicographic order (first domain most
//! significant) and reports the first failing tuple in that order, regardless
//! of how the work is split across rayon workers.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::GroupElement;
use crate::graded::{Degree, Homogeneous};

/// Concrete counterexample to an identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub inputs: Vec<GroupElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u8>>,
    pub lhs: GroupElement,
    pub rhs: GroupElement,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at (")?;
        for (i, x) in self.inputs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
            if let Some(d) = self.degrees.as_ref().and_then(|d| d.get(i)) {
                write!(f, "|{d}")?;
            }
        }
        write!(f, "): {} != {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail(Witness),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }

    /// Keeps the first failure.
    pub fn and(self, other: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Pass => other(),
            fail => fail,
        }
    }
}

/// Something that can appear as an input in a witness.
pub trait WitnessInput {
    fn element(&self) -> &GroupElement;
    fn degree(&self) -> Option<Degree> {
        None
    }
}

impl WitnessInput for GroupElement {
    fn element(&self) -> &GroupElement {
        self
    }
}

impl WitnessInput for Homogeneous {
    fn element(&self) -> &GroupElement {
        &self.elem
    }
    fn degree(&self) -> Option<Degree> {
        Some(self.degree)
    }
}

type Evaluator<'a, T> = dyn Fn(&[&T]) -> (GroupElement, GroupElement) + Sync + 'a;

/// An identity `lhs(x₁,…,x_k) = rhs(x₁,…,x_k)` quantified over finite domains.
pub struct Law<'a, T> {
    domains: Vec<&'a [T]>,
    eval: Box<Evaluator<'a, T>>,
}

impl<'a, T: WitnessInput + Sync> Law<'a, T> {
    pub fn new<F>(domains: Vec<&'a [T]>, eval: F) -> Self
    where
        F: Fn(&[&T]) -> (GroupElement, GroupElement) + Sync + 'a,
    {
        Law {
            domains,
            eval: Box::new(eval),
        }
    }

    /// Number of tuples in the quantification domain.
    pub fn size(&self) -> u128 {
        self.domains.iter().map(|d| d.len() as u128).product()
    }

    fn decode(&self, mut k: u128, out: &mut Vec<&'a T>) {
        out.clear();
        let mut idx = vec![0usize; self.domains.len()];
        for (slot, d) in self.domains.iter().enumerate().rev() {
            let n = d.len() as u128;
            idx[slot] = (k % n) as usize;
            k /= n;
        }
        out.extend(idx.iter().zip(&self.domains).map(|(&i, d)| &d[i]));
    }

    fn test(&self, k: u128) -> Option<Witness> {
        let mut tuple = Vec::with_capacity(self.domains.len());
        self.decode(k, &mut tuple);
        self.test_tuple(&tuple)
    }

    fn test_tuple(&self, tuple: &[&T]) -> Option<Witness> {
        let (lhs, rhs) = (self.eval)(tuple);
        if lhs == rhs {
            return None;
        }
        let degrees: Option<Vec<u8>> = tuple.iter().map(|x| x.degree().map(|d| d as u8)).collect();
        Some(Witness {
            inputs: tuple.iter().map(|x| x.element().clone()).collect(),
            degrees,
            lhs,
            rhs,
        })
    }

    /// Exhaustive check; the reported witness is the lexicographically first one.
    pub fn check(&self) -> Verdict {
        let total = self.size();
        if total == 0 {
            return Verdict::Pass;
        }
        // Sequential below this size: rayon's split overhead dominates.
        const PAR_THRESHOLD: u128 = 4096;
        let found = if total < PAR_THRESHOLD {
            (0..total).find_map(|k| self.test(k))
        } else {
            let total = u64::try_from(total).expect("quantification domain fits in u64");
            (0..total)
                .into_par_iter()
                .find_map_first(|k| self.test(k as u128))
        };
        match found {
            None => Verdict::Pass,
            Some(w) => Verdict::Fail(w),
        }
    }

    /// Random-sample check, for instances too large to quantify exhaustively.
    /// A pass here is evidence, not proof.
    pub fn sample(&self, samples: usize, seed: u64) -> Verdict {
        if self.domains.iter().any(|d| d.is_empty()) {
            return Verdict::Pass;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let tuple: Vec<&T> = self
                .domains
                .iter()
                .map(|d| &d[rng.gen_range(0..d.len())])
                .collect();
            if let Some(w) = self.test_tuple(&tuple) {
                return Verdict::Fail(w);
            }
        }
        Verdict::Pass
    }
}
