use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};
use superder::abelian::GroupHom;
use superder::axioms::{
    derivation_law, jordan_biderivation_first_law, jordan_biderivation_second_law,
    jordan_derivation_law, jordan_superderivation_law, super_biderivation_left_law,
    super_biderivation_right_law, superderivation_law,
};
use superder::enumerate::{
    enumerate_derivations, enumerate_jordan_derivations, enumerate_jordan_super_biderivations,
    enumerate_jordan_superderivations,
};
use superder::finring::{is_faithful, is_two_torsion, is_two_torsion_free, RingKind};
use superder::graded::Degree;
use superder::maps::{
    check_biadditive_blocks, graded_map, BiadditiveListing, GradedMap, MapListing,
};
use superder::structure::{
    check_two_torsion_case, decompose_super_biderivation, decompose_triangular,
    decompose_trivial_ext, match_inner_degree1, Check, TriangularPresentation, TrivialPresentation,
};
use superder::suite::{run_suite, MatrixEntry, SuiteConfig, SCHEMA_VERSION};
use superder::verdict::{Law, Verdict, WitnessInput};

use crate::config::{Config, LoadedMap};
use crate::{CliError, Report};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Derivation,
    JordanDerivation,
    #[value(name = "superderivation-deg0")]
    #[serde(rename = "superderivation-deg0")]
    SuperderivationDeg0,
    #[value(name = "superderivation-deg1")]
    #[serde(rename = "superderivation-deg1")]
    SuperderivationDeg1,
    #[value(name = "jordan-superderivation-deg0")]
    #[serde(rename = "jordan-superderivation-deg0")]
    JordanSuperderivationDeg0,
    #[value(name = "jordan-superderivation-deg1")]
    #[serde(rename = "jordan-superderivation-deg1")]
    JordanSuperderivationDeg1,
    JordanBiderivation,
    JordanSuperBiderivation,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Class {
    Derivation,
    JordanDerivation,
    #[value(name = "jordan-superderivation-deg0")]
    #[serde(rename = "jordan-superderivation-deg0")]
    JordanSuperderivationDeg0,
    #[value(name = "jordan-superderivation-deg1")]
    #[serde(rename = "jordan-superderivation-deg1")]
    JordanSuperderivationDeg1,
    JordanSuperBiderivation,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail(w) => format!("fail {w}"),
    }
}

pub fn describe(cfg: &Config) -> Result<Report, CliError> {
    let r = &cfg.ring;
    let g = &cfg.graded;
    let (even, odd) = (g.even_part().len(), g.odd_part().len());
    let mut text = String::new();
    let _ = writeln!(
        text,
        "ring {}  carrier {}  order {}",
        r.name(),
        r.carrier(),
        r.order()
    );
    let _ = writeln!(text, "|A0| = {even}, |A1| = {odd}");
    let _ = writeln!(text, "commutative: {}", yes(r.is_commutative()));
    let _ = writeln!(
        text,
        "2-torsion-free: {}",
        yes(is_two_torsion_free(r.carrier()))
    );
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "ring": r.name(),
        "carrier": r.carrier().factors(),
        "order": r.order(),
        "commutative": r.is_commutative(),
        "two_torsion_free": is_two_torsion_free(r.carrier()),
        "grading": { "odd_mask": g.odd_mask(), "even_size": even, "odd_size": odd },
    });
    if let Some(m) = r.as_trivial_extension() {
        let tt = is_two_torsion(m.carrier());
        let _ = writeln!(
            text,
            "module {} of order {}, 2-torsion: {}",
            m.name(),
            m.order(),
            yes(tt)
        );
        out["module"] = json!({ "name": m.name(), "order": m.order(), "two_torsion": tt });
    }
    if matches!(
        r.kind(),
        RingKind::Triangular(_) | RingKind::UpperTriangular { .. }
    ) {
        if let Ok(tp) = TriangularPresentation::of(r, u64::MAX) {
            let (lt, rt) = (
                is_two_torsion_free(tp.left_ring().carrier()),
                is_two_torsion_free(tp.right_ring().carrier()),
            );
            let (fl, fr) = is_faithful(&tp.corner);
            let _ = writeln!(
                text,
                "corner {} over ({}, {}): faithful ({}, {}), R 2-torsion-free: {}, S 2-torsion-free: {}",
                tp.corner.name(),
                tp.left_ring().name(),
                tp.right_ring().name(),
                yes(fl),
                yes(fr),
                yes(lt),
                yes(rt)
            );
            out["corner"] = json!({
                "module": tp.corner.name(),
                "left_ring": tp.left_ring().name(),
                "right_ring": tp.right_ring().name(),
                "faithful": [fl, fr],
                "left_two_torsion_free": lt,
                "right_two_torsion_free": rt,
            });
        }
    }
    Ok(Report {
        json: out,
        text,
        passed: true,
    })
}

fn run_laws<T: WitnessInput + Sync>(
    laws: Vec<Law<'_, T>>,
    sample: Option<(usize, u64)>,
) -> Verdict {
    let mut verdict = Verdict::Pass;
    for law in laws {
        verdict = verdict.and(|| match sample {
            Some((n, seed)) => law.sample(n, seed),
            None => law.check(),
        });
    }
    verdict
}

fn axiom_degree(axiom: Axiom) -> Option<Degree> {
    match axiom {
        Axiom::SuperderivationDeg0 | Axiom::JordanSuperderivationDeg0 => Some(Degree::Even),
        Axiom::SuperderivationDeg1 | Axiom::JordanSuperderivationDeg1 => Some(Degree::Odd),
        _ => None,
    }
}

pub fn verify(
    cfg: &Config,
    map: &LoadedMap,
    axiom: Axiom,
    sample: Option<(usize, u64)>,
) -> Result<Report, CliError> {
    let r = &*cfg.ring;
    let g = &cfg.graded;
    let verdict = match (axiom, map) {
        (Axiom::Derivation, LoadedMap::Additive { map, .. }) => {
            run_laws(vec![derivation_law(r, map)], sample)
        }
        (Axiom::JordanDerivation, LoadedMap::Additive { map, .. }) => {
            run_laws(vec![jordan_derivation_law(r, map)], sample)
        }
        (
            Axiom::SuperderivationDeg0
            | Axiom::SuperderivationDeg1
            | Axiom::JordanSuperderivationDeg0
            | Axiom::JordanSuperderivationDeg1,
            LoadedMap::Additive { map, degree },
        ) => {
            let want = axiom_degree(axiom).expect("graded axiom");
            if degree.is_some_and(|d| d != want) {
                return Err(CliError::Input(format!(
                    "map is declared with degree {}, axiom expects degree {want}",
                    degree.expect("checked")
                )));
            }
            let d = graded_map(map.clone(), want, g)?;
            let law = match axiom {
                Axiom::SuperderivationDeg0 | Axiom::SuperderivationDeg1 => {
                    superderivation_law(g, &d)
                }
                _ => jordan_superderivation_law(g, &d),
            };
            run_laws(vec![law], sample)
        }
        (Axiom::JordanBiderivation, LoadedMap::Biadditive(b)) => run_laws(
            vec![
                jordan_biderivation_first_law(r, b),
                jordan_biderivation_second_law(r, b),
            ],
            sample,
        ),
        (Axiom::JordanSuperBiderivation, LoadedMap::Biadditive(b)) => {
            check_biadditive_blocks(b, g)?;
            run_laws(
                vec![
                    super_biderivation_right_law(g, b),
                    super_biderivation_left_law(g, b),
                ],
                sample,
            )
        }
        (_, LoadedMap::Additive { .. }) => {
            return Err(CliError::Input(format!(
                "{axiom:?} needs a biadditive map (pair_images)"
            )))
        }
        (_, LoadedMap::Biadditive(_)) => {
            return Err(CliError::Input(format!(
                "{axiom:?} needs an additive map (images)"
            )))
        }
    };
    let mode = if sample.is_some() {
        "sampled"
    } else {
        "exhaustive"
    };
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "axiom": axiom,
        "ring": cfg.ring.name(),
        "mode": mode,
    });
    if let Some((n, seed)) = sample {
        out["samples"] = json!(n);
        out["seed"] = json!(seed);
    }
    merge(
        &mut out,
        serde_json::to_value(&verdict).expect("verdict serializes"),
    );
    let text = format!("{} ({mode}): {}\n", cfg.ring.name(), verdict_text(&verdict));
    Ok(Report {
        json: out,
        text,
        passed: verdict.passed(),
    })
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn checks_text(text: &mut String, checks: &[Check]) {
    for c in checks {
        match &c.verdict {
            Verdict::Pass => {
                let _ = writeln!(text, "  ok   {}: {}", c.id, c.statement);
            }
            Verdict::Fail(w) => {
                let _ = writeln!(text, "  THEOREM VIOLATION {}: {} {w}", c.id, c.statement);
            }
        }
    }
}

/// Degree-0 and degree-1 parts from the given maps; an absent part is zero.
fn graded_pair(
    p: &TrivialPresentation,
    maps: &[LoadedMap],
) -> Result<(GradedMap, GradedMap), CliError> {
    let c = p.ring().carrier();
    let mut parts: [Option<GradedMap>; 2] = [None, None];
    for m in maps {
        let LoadedMap::Additive { map, degree } = m else {
            return Err(CliError::Input(
                "cannot mix biadditive and additive maps".into(),
            ));
        };
        let degree = degree
            .ok_or_else(|| CliError::Input("maps to decompose must declare a degree".into()))?;
        let slot = &mut parts[degree as usize];
        if slot.is_some() {
            return Err(CliError::Input(format!("two maps of degree {degree}")));
        }
        *slot = Some(graded_map(map.clone(), degree, &p.source)?);
    }
    let zero = |d| graded_map(GroupHom::zero(c, c), d, &p.source);
    let [d0, d1] = parts;
    Ok((
        d0.map_or_else(|| zero(Degree::Even), Ok)?,
        d1.map_or_else(|| zero(Degree::Odd), Ok)?,
    ))
}

pub fn decompose(cfg: &Config, maps: &[LoadedMap], bound: u64) -> Result<Report, CliError> {
    let p = TrivialPresentation::of(&cfg.ring, bound)?;
    if p.source.odd_mask() != cfg.graded.odd_mask() {
        return Err(CliError::Input(
            "decomposition works with the standard grading of the ring".into(),
        ));
    }
    let mut text = String::new();
    let mut notices = Vec::new();

    if let [LoadedMap::Biadditive(b)] = maps {
        let dec = decompose_super_biderivation(&p, b)?;
        let _ = writeln!(text, "super-biderivation on {}", cfg.ring.name());
        checks_text(&mut text, &dec.checks);
        return Ok(Report {
            json: json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "super_biderivation",
                "ring": cfg.ring.name(),
                "holds": dec.holds(),
                "components": dec.components,
                "checks": dec.checks,
            }),
            text,
            passed: dec.holds(),
        });
    }

    let (d0, d1) = graded_pair(&p, maps)?;
    let triangular = match cfg.ring.kind() {
        RingKind::Triangular(_) | RingKind::UpperTriangular { .. } => {
            Some(TriangularPresentation::of(&cfg.ring, bound)?)
        }
        _ => None,
    };
    if let Some(tp) = triangular.as_ref().filter(|tp| {
        is_two_torsion_free(tp.left_ring().carrier())
            && is_two_torsion_free(tp.right_ring().carrier())
    }) {
        let dec = decompose_triangular(tp, &d0, &d1)?;
        let inner = match_inner_degree1(tp, &d1, &dec.components)?;
        let _ = writeln!(text, "triangular decomposition on {}", cfg.ring.name());
        let _ = writeln!(text, "  m* = {}", dec.components.m_star);
        checks_text(&mut text, &dec.checks);
        let _ = writeln!(
            text,
            "  inner: I_{} = d1: {}",
            inner.element,
            verdict_text(&inner.verdict)
        );
        let passed = dec.holds() && inner.verdict.passed();
        return Ok(Report {
            json: json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "triangular",
                "ring": cfg.ring.name(),
                "holds": passed,
                "components": dec.components,
                "checks": dec.checks,
                "inner": inner,
            }),
            text,
            passed,
        });
    }
    if triangular.is_some() {
        notices
            .push("corner rings have 2-torsion; using the trivial-extension form only".to_string());
    }

    let dec = decompose_trivial_ext(&p, &d0, &d1)?;
    let tt = check_two_torsion_case(&p, &dec.components);
    let _ = writeln!(
        text,
        "trivial-extension decomposition on {}",
        cfg.ring.name()
    );
    for n in &notices {
        let _ = writeln!(text, "  notice: {n}");
    }
    checks_text(&mut text, &dec.checks);
    let _ = writeln!(
        text,
        "  degree-1 part Jordan derivation: {}; 2(m∘f(m')) = 0: {}; module 2-torsion: {}",
        verdict_text(&tt.jordan_derivation),
        verdict_text(&tt.condition),
        yes(tt.module_two_torsion)
    );
    if !tt.holds() {
        let _ = writeln!(text, "  THEOREM VIOLATION two-torsion analysis");
    }
    let passed = dec.holds() && tt.holds();
    Ok(Report {
        json: json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "trivial_extension",
            "ring": cfg.ring.name(),
            "holds": passed,
            "components": dec.components,
            "checks": dec.checks,
            "two_torsion": tt,
            "notices": notices,
        }),
        text,
        passed,
    })
}

pub fn enumerate(cfg: &Config, class: Class, bound: u64) -> Result<Report, CliError> {
    let r = &*cfg.ring;
    let g = &cfg.graded;
    let (candidates, listings): (u128, Vec<Value>) = match class {
        Class::Derivation | Class::JordanDerivation => {
            let e = if class == Class::Derivation {
                enumerate_derivations(r, bound)?
            } else {
                enumerate_jordan_derivations(r, bound)?
            };
            let l = e
                .survivors
                .iter()
                .map(|m| json!(MapListing::from(m)))
                .collect();
            (e.candidates, l)
        }
        Class::JordanSuperderivationDeg0 | Class::JordanSuperderivationDeg1 => {
            let d = if class == Class::JordanSuperderivationDeg0 {
                Degree::Even
            } else {
                Degree::Odd
            };
            let e = enumerate_jordan_superderivations(g, d, bound)?;
            let l = e
                .survivors
                .iter()
                .map(|m| json!(MapListing::from(m)))
                .collect();
            (e.candidates, l)
        }
        Class::JordanSuperBiderivation => {
            let e = enumerate_jordan_super_biderivations(g, bound)?;
            let l = e
                .survivors
                .iter()
                .map(|m| json!(BiadditiveListing::from(m)))
                .collect();
            (e.candidates, l)
        }
    };
    let mut text = format!(
        "{}: {} of {} candidates\n",
        cfg.ring.name(),
        listings.len(),
        candidates
    );
    for l in &listings {
        let _ = writeln!(text, "  {l}");
    }
    Ok(Report {
        json: json!({
            "schema_version": SCHEMA_VERSION,
            "class": class,
            "ring": cfg.ring.name(),
            "candidates": candidates,
            "count": listings.len(),
            "maps": listings,
        }),
        text,
        passed: true,
    })
}

pub fn suite(entries: &[MatrixEntry], cfg: &SuiteConfig) -> Report {
    let report = run_suite(entries, cfg);
    let mut text = String::new();
    for n in &report.notices {
        let _ = writeln!(text, "notice: {n}");
    }
    for c in &report.criteria {
        let _ = writeln!(text, "{}", c.summary_line());
        for n in &c.notices {
            let _ = writeln!(text, "  notice: {n}");
        }
        for e in &c.exceptions {
            let what = e
                .witness
                .as_ref()
                .map(|w| w.to_string())
                .or_else(|| e.detail.clone())
                .unwrap_or_default();
            let _ = writeln!(text, "  exception {} / {}: {what}", e.entry, e.check);
        }
    }
    let _ = writeln!(
        text,
        "{}",
        if report.passed {
            "ALL PASS"
        } else {
            "FAILURES"
        }
    );
    Report {
        json: serde_json::to_value(&report).expect("report serializes"),
        text,
        passed: report.passed,
    }
}
