//! The acceptance suite: enumerations on a matrix of small rings, cross-checked
//! against the decomposition procedures, isomorphism checks, mutation testing
//! of the checkers and a thread-count determinism check.
//!
//! Reports are plain data; everything except `timing_ms` is a deterministic
//! function of the matrix, the bound and the seed.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::{Bilinear, GroupElement, GroupHom};
use crate::axioms::{is_jordan_super_biderivation, is_jordan_superderivation};
use crate::enumerate::{
    enumerate_jordan_super_biderivations, enumerate_jordan_superderivations,
    generate_from_components, graded_candidates, map_set, Enumeration,
};
use crate::error::{Error, Result};
use crate::finring::{
    is_faithful, is_two_torsion_free, block_split_iso, triangular_ring, triangular_to_trivial_iso,
    trivial_extension, upper_triangular, zn_ring, Bimodule, FinRing, RingIso, RingKind,
};
use crate::graded::{Degree, GradedRing, Homogeneous};
use crate::maps::{BiadditiveMap, GradedBiadditiveSpace, GradedMap};
use crate::structure::{
    check_faithful_case, check_two_torsion_case, decompose_super_biderivation,
    decompose_triangular, decompose_trivial_ext, match_inner_degree1, Decomposition,
    TriangularPresentation, TrivialPresentation,
};
use crate::verdict::{Verdict, Witness};

pub const SCHEMA_VERSION: u32 = 1;

/// A named ring in the suite matrix.
#[derive(Clone, Debug)]
pub struct MatrixEntry {
    pub name: String,
    pub ring: Arc<FinRing>,
}

impl MatrixEntry {
    pub fn new(name: impl Into<String>, ring: Arc<FinRing>) -> MatrixEntry {
        MatrixEntry {
            name: name.into(),
            ring,
        }
    }
}

/// T(Z2,Z2), T(Z3,Z3), T(Z4,Z2), the triangular rings over Z2 and Z3, and
/// T2(Z2), T2(Z3), T3(Z2).
pub fn default_matrix() -> Result<Vec<MatrixEntry>> {
    let z2 = zn_ring(2)?;
    let z3 = zn_ring(3)?;
    let z4 = zn_ring(4)?;
    let regular_ext = |r: &Arc<FinRing>| trivial_extension(r, &Bimodule::regular(r));
    let mod2 = Bimodule::scalar(&z4, &z4, crate::abelian::AbelianGroup::cyclic(2)?)?;
    let tri = |r: &Arc<FinRing>| triangular_ring(r, &Bimodule::regular(r), r);
    Ok(vec![
        MatrixEntry::new("T(Z2,Z2)", regular_ext(&z2)?),
        MatrixEntry::new("T(Z3,Z3)", regular_ext(&z3)?),
        MatrixEntry::new("T(Z4,Z2)", trivial_extension(&z4, &mod2)?),
        MatrixEntry::new("Tri(Z2,Z2,Z2)", tri(&z2)?),
        MatrixEntry::new("Tri(Z3,Z3,Z3)", tri(&z3)?),
        MatrixEntry::new("T2(Z2)", upper_triangular(&z2, 2)?),
        MatrixEntry::new("T2(Z3)", upper_triangular(&z3, 2)?),
        MatrixEntry::new("T3(Z2)", upper_triangular(&z2, 3)?),
    ])
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub bound: u64,
    pub seed: u64,
    pub mutations: usize,
    /// Pool sizes compared by the determinism criterion.
    pub determinism_workers: (usize, usize),
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            bound: crate::DEFAULT_BOUND,
            seed: 0x5eed,
            mutations: 100,
            determinism_workers: (1, 8),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exception {
    pub entry: String,
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Exception {
    fn witness(entry: &str, check: impl Into<String>, witness: Option<&Witness>) -> Exception {
        Exception {
            entry: entry.to_string(),
            check: check.into(),
            witness: witness.cloned(),
            detail: None,
        }
    }

    fn detail(entry: &str, check: impl Into<String>, detail: impl Into<String>) -> Exception {
        Exception {
            entry: entry.to_string(),
            check: check.into(),
            witness: None,
            detail: Some(detail.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub counts: BTreeMap<String, u64>,
    pub exceptions: Vec<Exception>,
    pub notices: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl CriterionReport {
    fn new(id: u8, name: &'static str) -> CriterionReport {
        CriterionReport {
            id,
            name,
            passed: true,
            counts: BTreeMap::new(),
            exceptions: Vec::new(),
            notices: Vec::new(),
            timing_ms: None,
        }
    }

    fn bump(&mut self, key: impl Into<String>, by: u64) {
        *self.counts.entry(key.into()).or_default() += by;
    }

    fn fail(&mut self, e: Exception) {
        self.exceptions.push(e);
    }

    fn finish(mut self, started: Instant) -> CriterionReport {
        self.passed = self.exceptions.is_empty();
        self.timing_ms = Some(started.elapsed().as_millis() as u64);
        self
    }

    /// One-line summary, e.g. `PASS [3] ...`.
    pub fn summary_line(&self) -> String {
        let mut parts: Vec<String> = self
            .counts
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if parts.is_empty() {
            parts.push("no applicable entries".into());
        }
        parts.push(format!("exceptions={}", self.exceptions.len()));
        format!(
            "{} [{}] {} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            parts.join(", ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntrySummary {
    pub name: String,
    pub ring: String,
    pub order: u128,
    pub skipped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub even_candidates: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub even_survivors: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub odd_candidates: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub odd_survivors: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub bound: u64,
    pub seed: u64,
    pub passed: bool,
    pub entries: Vec<EntrySummary>,
    pub notices: Vec<String>,
    pub criteria: Vec<CriterionReport>,
}

impl SuiteReport {
    pub fn without_timings(&self) -> SuiteReport {
        let mut r = self.clone();
        for c in &mut r.criteria {
            c.timing_ms = None;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn criterion(&self, id: u8) -> Option<&CriterionReport> {
        self.criteria.iter().find(|c| c.id == id)
    }
}

/// Everything computed once per matrix entry and shared by the criteria.
struct Prepared {
    entry: MatrixEntry,
    presentation: Option<TrivialPresentation>,
    triangular: Option<TriangularPresentation>,
    even: Option<Enumeration<GradedMap>>,
    odd: Option<Enumeration<GradedMap>>,
    biderivations: Option<Enumeration<BiadditiveMap>>,
}

impl Prepared {
    fn graded(&self) -> Option<&GradedRing> {
        self.presentation.as_ref().map(|p| &p.source)
    }

    fn enumerated(&self) -> Option<(&TrivialPresentation, &[GradedMap], &[GradedMap])> {
        match (&self.presentation, &self.even, &self.odd) {
            (Some(p), Some(e), Some(o)) => Some((p, &e.survivors, &o.survivors)),
            _ => None,
        }
    }

    fn is_trivial_extension(&self) -> bool {
        matches!(self.entry.ring.kind(), RingKind::TrivialExtension(_))
    }

    /// A triangular presentation over 2-torsion-free corner rings.
    fn torsion_free_triangular(&self) -> Option<&TriangularPresentation> {
        self.triangular.as_ref().filter(|tp| {
            is_two_torsion_free(tp.left_ring().carrier())
                && is_two_torsion_free(tp.right_ring().carrier())
        })
    }
}

fn prepare(entry: &MatrixEntry, bound: u64, notices: &mut Vec<String>) -> Prepared {
    let name = &entry.name;
    let mut notice = |what: &str, e: &Error| notices.push(format!("{name}: {what} skipped: {e}"));
    let presentation = match TrivialPresentation::of(&entry.ring, bound) {
        Ok(p) => Some(p),
        Err(e) => {
            notice("decomposition", &e);
            None
        }
    };
    let triangular = match entry.ring.kind() {
        RingKind::Triangular(_) | RingKind::UpperTriangular { .. } => {
            TriangularPresentation::of(&entry.ring, bound).ok()
        }
        _ => None,
    };
    let (mut even, mut odd, mut biderivations) = (None, None, None);
    if let Some(g) = presentation.as_ref().map(|p| &p.source) {
        for (degree, slot) in [(Degree::Even, &mut even), (Degree::Odd, &mut odd)] {
            match enumerate_jordan_superderivations(g, degree, bound) {
                Ok(e) => *slot = Some(e),
                Err(e) => notice(&format!("degree-{degree} enumeration"), &e),
            }
        }
        if matches!(entry.ring.kind(), RingKind::TrivialExtension(_)) {
            match enumerate_jordan_super_biderivations(g, bound) {
                Ok(e) => biderivations = Some(e),
                Err(e) => notice("super-biderivation enumeration", &e),
            }
        }
    }
    Prepared {
        entry: entry.clone(),
        presentation,
        triangular,
        even,
        odd,
        biderivations,
    }
}

fn record<D>(report: &mut CriterionReport, entry: &str, dec: &Decomposition<D>) {
    report.bump("checks", dec.checks.len() as u64);
    for c in dec.violations() {
        report.fail(Exception::witness(entry, c.id, c.verdict.witness()));
    }
}

fn zero_graded(p: &TrivialPresentation, degree: Degree) -> GradedMap {
    let c = p.ring().carrier();
    GradedMap::unchecked(GroupHom::zero(c, c), degree)
}

fn criterion_components(prepared: &[Prepared]) -> CriterionReport {
    let started = Instant::now();
    let mut rep = CriterionReport::new(
        1,
        "superderivations of T(R,M) equal the component-built maps",
    );
    for p in prepared.iter().filter(|p| p.is_trivial_extension()) {
        let name = &p.entry.name;
        let Some((pres, even, odd)) = p.enumerated() else {
            rep.notices.push(format!("{name}: not enumerated"));
            continue;
        };
        rep.bump("entries", 1);
        let family = match generate_from_components(pres, u64::MAX) {
            Ok(f) => f,
            Err(e) => {
                rep.fail(Exception::detail(
                    name,
                    "component-generation",
                    e.to_string(),
                ));
                continue;
            }
        };
        for (label, found, built) in [
            ("degree-0", even, &family.even),
            ("degree-1", odd, &family.odd),
        ] {
            let (a, b) = (map_set(found), map_set(built));
            rep.bump(format!("{label} survivors"), a.len() as u64);
            rep.bump(format!("{label} component-built"), b.len() as u64);
            let missing = a.symmetric_difference(&b).count() as u64;
            rep.bump("mismatches", missing);
            if missing > 0 || b.len() != built.len() {
                rep.fail(Exception::detail(
                    name,
                    format!("{label}-set-equality"),
                    format!(
                        "{} survivors vs {} built, {missing} in only one set",
                        a.len(),
                        built.len()
                    ),
                ));
            }
        }
        let (z0, z1) = (
            zero_graded(pres, Degree::Even),
            zero_graded(pres, Degree::Odd),
        );
        let pairs = even
            .iter()
            .map(|d| (d, &z1))
            .chain(odd.iter().map(|d| (&z0, d)));
        for (d0, d1) in pairs {
            rep.bump("decompositions", 1);
            match decompose_trivial_ext(pres, d0, d1) {
                Ok(dec) => record(&mut rep, name, &dec),
                Err(e) => rep.fail(Exception::detail(name, "decomposition", e.to_string())),
            }
        }
    }
    rep.finish(started)
}

fn criterion_two_torsion(prepared: &[Prepared]) -> CriterionReport {
    let started = Instant::now();
    let mut rep =
        CriterionReport::new(2, "degree-1 part is a Jordan derivation iff 2(m∘f(m')) = 0");
    for p in prepared {
        let name = &p.entry.name;
        let Some((pres, _, odd)) = p.enumerated() else {
            continue;
        };
        let two_torsion = crate::finring::is_two_torsion(pres.module.carrier());
        rep.bump("entries", 1);
        rep.bump("two-torsion entries", u64::from(two_torsion));
        let z0 = zero_graded(pres, Degree::Even);
        for d1 in odd {
            rep.bump("candidates", 1);
            let dec = match decompose_trivial_ext(pres, &z0, d1) {
                Ok(d) => d,
                Err(e) => {
                    rep.fail(Exception::detail(name, "decomposition", e.to_string()));
                    continue;
                }
            };
            let t = check_two_torsion_case(pres, &dec.components);
            rep.bump(
                "jordan derivations",
                u64::from(t.jordan_derivation.passed()),
            );
            if !t.implication_holds() {
                rep.fail(Exception::witness(
                    name,
                    "two-torsion-implies-jordan-derivation",
                    t.jordan_derivation.witness(),
                ));
            }
            if !t.equivalence_holds() {
                rep.bump("disagreements", 1);
                rep.fail(Exception::witness(
                    name,
                    "equivalence",
                    t.verdict().witness(),
                ));
            }
        }
    }
    rep.counts.entry("disagreements".into()).or_default();
    rep.finish(started)
}

fn criterion_triangular(prepared: &[Prepared]) -> CriterionReport {
    let started = Instant::now();
    let mut rep = CriterionReport::new(3, "triangular decomposition over 2-torsion-free rings");
    for p in prepared {
        let (Some(tp), Some((_, even, odd))) = (p.torsion_free_triangular(), p.enumerated()) else {
            continue;
        };
        let name = &p.entry.name;
        rep.bump("entries", 1);
        for d0 in even {
            for d1 in odd {
                rep.bump("pairs", 1);
                match decompose_triangular(tp, d0, d1) {
                    Ok(dec) => record(&mut rep, name, &dec),
                    Err(e) => rep.fail(Exception::detail(name, "decomposition", e.to_string())),
                }
            }
        }
    }
    rep.finish(started)
}

fn criterion_faithful(prepared: &[Prepared]) -> CriterionReport {
    let started = Instant::now();
    let mut rep = CriterionReport::new(
        4,
        "faithful corner: Jordan superderivations are derivations",
    );
    for p in prepared {
        let (Some(tp), Some((_, even, odd))) = (p.torsion_free_triangular(), p.enumerated()) else {
            continue;
        };
        let name = &p.entry.name;
        if is_faithful(&tp.corner) != (true, true) {
            rep.notices.push(format!(
                "{name}: corner module not faithful, not applicable"
            ));
            continue;
        }
        rep.bump("entries", 1);
        match check_faithful_case(tp, even, odd) {
            Ok(r) => {
                rep.bump("sums checked", r.checked as u64);
                for ex in r.exceptions {
                    rep.fail(Exception::witness(
                        name,
                        format!("derivation[{},{}]", ex.even_index, ex.odd_index),
                        Some(&ex.witness),
                    ));
                }
            }
            Err(e) => rep.fail(Exception::detail(name, "precondition", e.to_string())),
        }
    }
    rep.finish(started)
}

fn criterion_inner(prepared: &[Prepared]) -> CriterionReport {
    let started = Instant::now();
    let mut rep = CriterionReport::new(5, "degree-1 Jordan superderivations are inner");
    for p in prepared {
        let (Some(tp), Some((pres, _, odd))) = (p.torsion_free_triangular(), p.enumerated()) else {
            continue;
        };
        let name = &p.entry.name;
        rep.bump("entries", 1);
        let z0 = zero_graded(pres, Degree::Even);
        for d1 in odd {
            rep.bump("maps", 1);
            let matched = decompose_triangular(tp, &z0, d1)
                .and_then(|dec| match_inner_degree1(tp, d1, &dec.components));
            match matched {
                Ok(m) if m.verdict.passed() => {}
                Ok(m) => rep.fail(Exception::witness(name, "inner-match", m.verdict.witness())),
                Err(e) => rep.fail(Exception::detail(name, "decomposition", e.to_string())),
            }
        }
    }
    rep.finish(started)
}

fn criterion_biderivations(prepared: &[Prepared]) -> CriterionReport {
    let started = Instant::now();
    let mut rep = CriterionReport::new(6, "Jordan super-biderivations of T(R,M) decompose");
    for p in prepared.iter().filter(|p| p.is_trivial_extension()) {
        let name = &p.entry.name;
        let (Some(pres), Some(en)) = (&p.presentation, &p.biderivations) else {
            continue;
        };
        rep.bump("entries", 1);
        rep.bump("candidates", en.candidates as u64);
        for b in &en.survivors {
            rep.bump("survivors", 1);
            match decompose_super_biderivation(pres, b) {
                Ok(dec) => record(&mut rep, name, &dec),
                Err(e) => rep.fail(Exception::detail(name, "decomposition", e.to_string())),
            }
        }
    }
    rep.finish(started)
}

fn criterion_isomorphisms(bound: u64) -> CriterionReport {
    let started = Instant::now();
    let mut rep = CriterionReport::new(7, "ring isomorphisms verified exhaustively");
    let verify = |rep: &mut CriterionReport, label: String, iso: Result<RingIso>| match iso {
        Ok(iso) => {
            let n = iso.source.order() as u64;
            rep.bump("isomorphisms", 1);
            rep.bump("pairs", n * n);
            for (check, v) in iso.verify() {
                if !v.passed() {
                    rep.fail(Exception::witness(&label, check, v.witness()));
                }
            }
        }
        Err(e) => rep.fail(Exception::detail(&label, "construction", e.to_string())),
    };
    let rings = [zn_ring(2), zn_ring(3)];
    for base in rings.iter() {
        let base = match base {
            Ok(b) => b,
            Err(e) => {
                rep.fail(Exception::detail("Z_n", "construction", e.to_string()));
                continue;
            }
        };
        let label = format!("T2({base}) -> T({base}x{base},{base})");
        let iso = block_split_iso(base, 2, bound)
            .and_then(|r| triangular_to_trivial_iso(&r.target).map(|t| (r, t)));
        match iso {
            Ok((split, coords)) => {
                verify(&mut rep, label.clone(), Ok(coords.clone()));
                verify(&mut rep, label, split.then(&coords));
            }
            Err(e) => verify(&mut rep, label, Err(e)),
        }
    }
    for (base, n) in [(&rings[0], 2), (&rings[1], 2), (&rings[0], 3)] {
        if let Ok(base) = base {
            verify(
                &mut rep,
                format!("T{n}({base}) first-row split"),
                block_split_iso(base, n, bound),
            );
        }
    }
    rep.finish(started)
}

// ---------------------------------------------------------------------------
// Mutation testing

/// `x ∘ₛ y` straight from the ring multiplication.
fn naive_super(r: &FinRing, x: &GroupElement, dx: u8, y: &GroupElement, dy: u8) -> GroupElement {
    let xy = r.mul(x, y);
    let yx = r.mul(y, x);
    if dx & dy & 1 == 1 {
        r.sub(&xy, &yx)
    } else {
        r.add(&xy, &yx)
    }
}

fn signed(r: &FinRing, odd: bool, x: &GroupElement) -> GroupElement {
    if odd {
        r.neg(x)
    } else {
        x.clone()
    }
}

fn naive_jsd(
    r: &FinRing,
    d: &GroupHom,
    i: u8,
    x: (&GroupElement, u8),
    y: (&GroupElement, u8),
) -> (GroupElement, GroupElement) {
    let lhs = d.apply(&naive_super(r, x.0, x.1, y.0, y.1));
    let a = naive_super(r, &d.apply(x.0), i ^ x.1, y.0, y.1);
    let b = naive_super(r, x.0, x.1, &d.apply(y.0), i ^ y.1);
    (lhs, r.add(&a, &signed(r, i & x.1 == 1, &b)))
}

fn naive_bider(
    r: &FinRing,
    b: &Bilinear,
    x: (&GroupElement, u8),
    y: (&GroupElement, u8),
    z: (&GroupElement, u8),
) -> [(GroupElement, GroupElement); 2] {
    let right = {
        let lhs = b.apply(x.0, &naive_super(r, y.0, y.1, z.0, z.1));
        let p = naive_super(r, &b.apply(x.0, y.0), x.1 ^ y.1, z.0, z.1);
        let q = naive_super(r, y.0, y.1, &b.apply(x.0, z.0), x.1 ^ z.1);
        (lhs, r.add(&p, &signed(r, x.1 & y.1 == 1, &q)))
    };
    let left = {
        let lhs = b.apply(&naive_super(r, x.0, x.1, y.0, y.1), z.0);
        let p = naive_super(r, x.0, x.1, &b.apply(y.0, z.0), y.1 ^ z.1);
        let q = naive_super(r, &b.apply(x.0, z.0), x.1 ^ z.1, y.0, y.1);
        (lhs, r.add(&p, &signed(r, y.1 & z.1 == 1, &q)))
    };
    [right, left]
}

fn homogeneous(g: &GradedRing) -> Vec<(GroupElement, u8)> {
    g.homogeneous()
        .iter()
        .map(|h: &Homogeneous| (h.elem.clone(), h.degree as u8))
        .collect()
}

/// Does the witness really falsify the identity?
fn witness_checks_out(w: &Witness, sides: &[(GroupElement, GroupElement)]) -> bool {
    w.lhs != w.rhs
        && sides
            .iter()
            .any(|(l, r)| l != r && *l == w.lhs && *r == w.rhs)
}

fn witness_inputs(w: &Witness, n: usize) -> Option<Vec<(GroupElement, u8)>> {
    let degrees = w.degrees.as_ref()?;
    (w.inputs.len() == n && degrees.len() == n).then(|| {
        w.inputs
            .iter()
            .cloned()
            .zip(degrees.iter().copied())
            .collect()
    })
}

enum Outcome {
    ConfirmedFail,
    ConfirmedPass,
    Wrong(String),
}

fn mutate_slot(rng: &mut ChaCha8Rng, flat: &mut [u64], slots: &[Vec<u64>]) -> bool {
    let open: Vec<usize> = (0..slots.len()).filter(|&k| slots[k].len() > 1).collect();
    if open.is_empty() {
        return false;
    }
    let k = open[rng.gen_range(0..open.len())];
    let others: Vec<u64> = slots[k].iter().copied().filter(|&v| v != flat[k]).collect();
    flat[k] = others[rng.gen_range(0..others.len())];
    true
}

fn mutate_graded(
    g: &GradedRing,
    d: &GradedMap,
    survivors: &BTreeSet<Vec<Vec<u64>>>,
    rng: &mut ChaCha8Rng,
) -> Option<Outcome> {
    let space = graded_candidates(g, d.degree());
    let c = g.ring().carrier();
    let k = c.rank();
    let mut flat: Vec<u64> = d.map().images().concat();
    if !mutate_slot(rng, &mut flat, space.space().slots()) {
        return None;
    }
    let images: Vec<Vec<i64>> = flat
        .chunks(k.max(1))
        .map(|row| row.iter().map(|&v| v as i64).collect())
        .collect();
    let m = GroupHom::new(c.clone(), c.clone(), images).ok()?;
    let member = survivors.contains(m.images());
    let mutated = GradedMap::unchecked(m, d.degree());
    let r = g.ring();
    let i = d.degree() as u8;
    let verdict = is_jordan_superderivation(g, &mutated);
    Some(match (&verdict, member) {
        (Verdict::Pass, false) => {
            Outcome::Wrong("checker passed a map outside the survivor set".into())
        }
        (Verdict::Fail(_), true) => Outcome::Wrong("checker failed a survivor".into()),
        (Verdict::Fail(w), false) => match witness_inputs(w, 2) {
            Some(t)
                if witness_checks_out(
                    w,
                    &[naive_jsd(
                        r,
                        mutated.map(),
                        i,
                        (&t[0].0, t[0].1),
                        (&t[1].0, t[1].1),
                    )],
                ) =>
            {
                Outcome::ConfirmedFail
            }
            _ => Outcome::Wrong(format!("witness does not re-verify: {w}")),
        },
        (Verdict::Pass, true) => {
            let hs = homogeneous(g);
            let ok = hs.iter().all(|x| {
                hs.iter().all(|y| {
                    let (l, rr) = naive_jsd(r, mutated.map(), i, (&x.0, x.1), (&y.0, y.1));
                    l == rr
                })
            });
            if ok {
                Outcome::ConfirmedPass
            } else {
                Outcome::Wrong("pass not confirmed by re-evaluation".into())
            }
        }
    })
}

fn mutate_biadditive(
    g: &GradedRing,
    b: &BiadditiveMap,
    survivors: &BTreeSet<Vec<Vec<GroupElement>>>,
    rng: &mut ChaCha8Rng,
) -> Option<Outcome> {
    let space = GradedBiadditiveSpace::new(g);
    let c = g.ring().carrier();
    let k = c.rank();
    let mut flat: Vec<u64> = b
        .images()
        .iter()
        .flat_map(|row| row.iter().flat_map(|e| e.coords().iter().copied()))
        .collect();
    if !mutate_slot(rng, &mut flat, space.space().slots()) {
        return None;
    }
    let images: Vec<Vec<Vec<i64>>> = flat
        .chunks(k * k)
        .map(|row| {
            row.chunks(k)
                .map(|e| e.iter().map(|&v| v as i64).collect())
                .collect()
        })
        .collect();
    let m = Bilinear::new(c.clone(), c.clone(), c.clone(), images).ok()?;
    let member = survivors.contains(m.images());
    let r = g.ring();
    let verdict = is_jordan_super_biderivation(g, &m);
    Some(match (&verdict, member) {
        (Verdict::Pass, false) => {
            Outcome::Wrong("checker passed a map outside the survivor set".into())
        }
        (Verdict::Fail(_), true) => Outcome::Wrong("checker failed a survivor".into()),
        (Verdict::Fail(w), false) => match witness_inputs(w, 3) {
            Some(t)
                if witness_checks_out(
                    w,
                    &naive_bider(
                        r,
                        &m,
                        (&t[0].0, t[0].1),
                        (&t[1].0, t[1].1),
                        (&t[2].0, t[2].1),
                    ),
                ) =>
            {
                Outcome::ConfirmedFail
            }
            _ => Outcome::Wrong(format!("witness does not re-verify: {w}")),
        },
        (Verdict::Pass, true) => {
            let hs = homogeneous(g);
            let ok = hs.iter().all(|x| {
                hs.iter().all(|y| {
                    hs.iter().all(|z| {
                        naive_bider(r, &m, (&x.0, x.1), (&y.0, y.1), (&z.0, z.1))
                            .iter()
                            .all(|(l, rr)| l == rr)
                    })
                })
            });
            if ok {
                Outcome::ConfirmedPass
            } else {
                Outcome::Wrong("pass not confirmed by re-evaluation".into())
            }
        }
    })
}

fn criterion_mutations(prepared: &[Prepared], config: &SuiteConfig) -> CriterionReport {
    let started = Instant::now();
    let mut rep = CriterionReport::new(8, "checker soundness under single-image mutations");
    for (idx, p) in prepared.iter().enumerate() {
        let (Some(g), Some((_, even, odd))) = (p.graded(), p.enumerated()) else {
            continue;
        };
        let name = &p.entry.name;
        let biders: &[BiadditiveMap] = p.biderivations.as_ref().map_or(&[], |e| &e.survivors);
        let even_set = map_set(even);
        let odd_set = map_set(odd);
        let bider_set: BTreeSet<Vec<Vec<GroupElement>>> =
            biders.iter().map(|b| b.images().to_vec()).collect();
        let pools: Vec<usize> = [even.len(), odd.len(), biders.len()]
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(k, _)| k)
            .collect();
        if pools.is_empty() {
            continue;
        }
        rep.bump("entries", 1);
        let mut rng = ChaCha8Rng::seed_from_u64(
            config.seed ^ (idx as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
        );
        let mut done = 0;
        let mut attempts = 0;
        while done < config.mutations && attempts < config.mutations * 10 {
            attempts += 1;
            let pool = pools[rng.gen_range(0..pools.len())];
            let outcome = match pool {
                0 => mutate_graded(g, &even[rng.gen_range(0..even.len())], &even_set, &mut rng),
                1 => mutate_graded(g, &odd[rng.gen_range(0..odd.len())], &odd_set, &mut rng),
                _ => mutate_biadditive(
                    g,
                    &biders[rng.gen_range(0..biders.len())],
                    &bider_set,
                    &mut rng,
                ),
            };
            let Some(outcome) = outcome else { continue };
            done += 1;
            match outcome {
                Outcome::ConfirmedFail => rep.bump("confirmed failures", 1),
                Outcome::ConfirmedPass => rep.bump("confirmed passes", 1),
                Outcome::Wrong(why) => rep.fail(Exception::detail(name, "mutation", why)),
            }
        }
        rep.bump("mutations", done as u64);
        if done < config.mutations {
            rep.notices
                .push(format!("{name}: only {done} distinct mutations available"));
        }
    }
    rep.finish(started)
}

// ---------------------------------------------------------------------------

fn run_criteria(
    matrix: &[MatrixEntry],
    config: &SuiteConfig,
) -> (Vec<EntrySummary>, Vec<String>, Vec<CriterionReport>) {
    let mut notices = Vec::new();
    let prepared: Vec<Prepared> = matrix
        .iter()
        .map(|e| prepare(e, config.bound, &mut notices))
        .collect();
    let entries = prepared
        .iter()
        .map(|p| EntrySummary {
            name: p.entry.name.clone(),
            ring: p.entry.ring.name(),
            order: p.entry.ring.order(),
            skipped: p.enumerated().is_none(),
            even_candidates: p.even.as_ref().map(|e| e.candidates),
            even_survivors: p.even.as_ref().map(|e| e.count()),
            odd_candidates: p.odd.as_ref().map(|e| e.candidates),
            odd_survivors: p.odd.as_ref().map(|e| e.count()),
        })
        .collect();
    let criteria = vec![
        criterion_components(&prepared),
        criterion_two_torsion(&prepared),
        criterion_triangular(&prepared),
        criterion_faithful(&prepared),
        criterion_inner(&prepared),
        criterion_biderivations(&prepared),
        criterion_isomorphisms(config.bound),
        criterion_mutations(&prepared, config),
    ];
    (entries, notices, criteria)
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invalid(format!("cannot build a pool of {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

fn assemble(
    config: &SuiteConfig,
    run: (Vec<EntrySummary>, Vec<String>, Vec<CriterionReport>),
) -> SuiteReport {
    let (entries, notices, criteria) = run;
    SuiteReport {
        schema_version: SCHEMA_VERSION,
        bound: config.bound,
        seed: config.seed,
        passed: criteria.iter().all(|c| c.passed),
        entries,
        notices,
        criteria,
    }
}

/// Criteria 1 to 8 only, in the current rayon pool.
pub fn run_core(matrix: &[MatrixEntry], config: &SuiteConfig) -> SuiteReport {
    assemble(config, run_criteria(matrix, config))
}

/// Re-runs criteria 1 to 8 in two pools of different sizes and compares the
/// timing-free JSON.
pub fn criterion_determinism(matrix: &[MatrixEntry], config: &SuiteConfig) -> CriterionReport {
    let started = Instant::now();
    let mut rep = CriterionReport::new(9, "reports identical across worker counts");
    let (a, b) = config.determinism_workers;
    let runs: Result<Vec<String>> = [a, b]
        .iter()
        .map(|&n| in_pool(n, || run_core(matrix, config).without_timings().to_json()))
        .collect();
    match runs {
        Ok(runs) => {
            rep.bump("runs", runs.len() as u64);
            rep.bump("bytes", runs[0].len() as u64);
            if runs[0] != runs[1] {
                let at = runs[0]
                    .bytes()
                    .zip(runs[1].bytes())
                    .position(|(x, y)| x != y)
                    .unwrap_or(runs[0].len().min(runs[1].len()));
                rep.fail(Exception::detail(
                    "suite",
                    format!("workers {a} vs {b}"),
                    format!("reports differ from byte {at}"),
                ));
            }
        }
        Err(e) => rep.fail(Exception::detail("suite", "pool", e.to_string())),
    }
    rep.finish(started)
}

/// All nine criteria.
pub fn run_suite(matrix: &[MatrixEntry], config: &SuiteConfig) -> SuiteReport {
    let (entries, notices, mut criteria) = run_criteria(matrix, config);
    criteria.push(criterion_determinism(matrix, config));
    assemble(config, (entries, notices, criteria))
}
