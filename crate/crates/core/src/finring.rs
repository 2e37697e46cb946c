//! Finite unital rings and bimodules over abelian-group carriers, and the
//! constructions built from them: `ℤₙ`, direct products, trivial extensions
//! `T(R, M)`, triangular rings `[R M; 0 S]` and upper triangular matrix rings
//! `Tₙ(R)`.
//!
//! Builtin constructions multiply by closed-form rules and are checked only on
//! request ([`FinRing::validate`]); rings and modules given by structure
//! constants are validated when they are built.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::abelian::{AbelianGroup, Bilinear, GroupElement, GroupHom};
use crate::error::{Error, Result};
use crate::verdict::{Law, Verdict};

/// How a ring multiplies.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RingKind {
    Zn(u64),
    Product(Arc<FinRing>, Arc<FinRing>),
    /// `T(R, M)` with `R` the module's (two-sided) ring.
    TrivialExtension(Arc<Bimodule>),
    /// `[R M; 0 S]` with `R`, `S` the module's left and right rings.
    Triangular(Arc<Bimodule>),
    /// `n × n` upper triangular matrices, entries stored row-major.
    UpperTriangular {
        base: Arc<FinRing>,
        n: usize,
    },
    /// Structure constants on carrier generators.
    Table(Bilinear),
}

#[derive(Debug)]
pub struct FinRing {
    carrier: AbelianGroup,
    kind: RingKind,
    one: GroupElement,
    elements: OnceLock<Vec<GroupElement>>,
}

impl PartialEq for FinRing {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier && self.one == other.one && self.kind == other.kind
    }
}

impl Eq for FinRing {}

fn split3(x: &GroupElement, a: usize, b: usize) -> (GroupElement, GroupElement, GroupElement) {
    let n = x.coords().len();
    (x.slice(0..a), x.slice(a..a + b), x.slice(a + b..n))
}

fn split2(x: &GroupElement, a: usize) -> (GroupElement, GroupElement) {
    let n = x.coords().len();
    (x.slice(0..a), x.slice(a..n))
}

/// Position of entry `(i, j)`, `i ≤ j`, in row-major upper triangular storage.
fn upper_pos(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i.saturating_sub(1)) / 2 + (j - i)
}

fn upper_entry(x: &GroupElement, n: usize, rank: usize, i: usize, j: usize) -> GroupElement {
    let p = upper_pos(n, i, j) * rank;
    x.slice(p..p + rank)
}

impl FinRing {
    fn build(carrier: AbelianGroup, kind: RingKind, one: GroupElement) -> Arc<FinRing> {
        Arc::new(FinRing {
            carrier,
            kind,
            one,
            elements: OnceLock::new(),
        })
    }

    pub fn carrier(&self) -> &AbelianGroup {
        &self.carrier
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn one(&self) -> &GroupElement {
        &self.one
    }

    pub fn zero(&self) -> GroupElement {
        self.carrier.zero()
    }

    pub fn order(&self) -> u128 {
        self.carrier.order()
    }

    pub fn rank(&self) -> usize {
        self.carrier.rank()
    }

    /// All elements in lexicographic order, computed once.
    pub fn elements(&self) -> &[GroupElement] {
        self.elements
            .get_or_init(|| self.carrier.elements().collect())
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.carrier.add(x, y)
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.carrier.sub(x, y)
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        self.carrier.neg(x)
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        match &self.kind {
            RingKind::Zn(n) => {
                let v = (x.coords()[0] as u128 * y.coords()[0] as u128) % *n as u128;
                self.carrier.element(&[v as i64]).expect("rank 1")
            }
            RingKind::Product(r, s) => {
                let (a, b) = split2(x, r.rank());
                let (c, d) = split2(y, r.rank());
                GroupElement::concat(&[&r.mul(&a, &c), &s.mul(&b, &d)])
            }
            RingKind::TrivialExtension(m) => {
                let r = m.left();
                let (a, u) = split2(x, r.rank());
                let (b, v) = split2(y, r.rank());
                let module = m.carrier().add(&m.left_act(&a, &v), &m.right_act(&u, &b));
                GroupElement::concat(&[&r.mul(&a, &b), &module])
            }
            RingKind::Triangular(m) => {
                let (r, s) = (m.left(), m.right());
                let (a, u, c) = split3(x, r.rank(), m.carrier().rank());
                let (b, v, d) = split3(y, r.rank(), m.carrier().rank());
                let corner = m.carrier().add(&m.left_act(&a, &v), &m.right_act(&u, &d));
                GroupElement::concat(&[&r.mul(&a, &b), &corner, &s.mul(&c, &d)])
            }
            RingKind::UpperTriangular { base, n } => {
                let k = base.rank();
                let mut parts = Vec::with_capacity(n * (n + 1) / 2);
                for i in 0..*n {
                    for j in i..*n {
                        let mut acc = base.zero();
                        for l in i..=j {
                            let p = base
                                .mul(&upper_entry(x, *n, k, i, l), &upper_entry(y, *n, k, l, j));
                            acc = base.add(&acc, &p);
                        }
                        parts.push(acc);
                    }
                }
                GroupElement::concat(&parts.iter().collect::<Vec<_>>())
            }
            RingKind::Table(t) => t.apply(x, y),
        }
    }

    pub fn jordan(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.add(&self.mul(x, y), &self.mul(y, x))
    }

    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.sub(&self.mul(x, y), &self.mul(y, x))
    }

    /// Ring given by structure constants `products[i][j] = eᵢ·eⱼ` on the carrier
    /// generators. Associativity, distributivity and the identity are checked
    /// before the ring is returned.
    pub fn from_table(
        carrier: AbelianGroup,
        products: Bilinear,
        one: GroupElement,
    ) -> Result<Arc<FinRing>> {
        if products.left() != &carrier || products.right() != &carrier || products.dst() != &carrier
        {
            return Err(Error::RingMismatch(
                "structure constants do not live on the carrier".into(),
            ));
        }
        carrier.check(&one)?;
        let ring = Self::build(carrier, RingKind::Table(products), one);
        ring.validate()?;
        Ok(ring)
    }

    /// Exhaustive check of the unital ring axioms. Distributivity is implied by
    /// the bilinear representation of every builtin rule; it is still checked.
    pub fn validate(&self) -> Result<()> {
        let els = self.elements();
        let one = [self.one.clone()];
        let checks: [(&'static str, Verdict); 5] = [
            (
                "left identity",
                Law::new(vec![els, &one], |t| (self.mul(t[1], t[0]), t[0].clone())).check(),
            ),
            (
                "right identity",
                Law::new(vec![els, &one], |t| (self.mul(t[0], t[1]), t[0].clone())).check(),
            ),
            (
                "associativity",
                Law::new(vec![els, els, els], |t| {
                    (
                        self.mul(&self.mul(t[0], t[1]), t[2]),
                        self.mul(t[0], &self.mul(t[1], t[2])),
                    )
                })
                .check(),
            ),
            (
                "left distributivity",
                Law::new(vec![els, els, els], |t| {
                    (
                        self.mul(t[0], &self.add(t[1], t[2])),
                        self.add(&self.mul(t[0], t[1]), &self.mul(t[0], t[2])),
                    )
                })
                .check(),
            ),
            (
                "right distributivity",
                Law::new(vec![els, els, els], |t| {
                    (
                        self.mul(&self.add(t[0], t[1]), t[2]),
                        self.add(&self.mul(t[0], t[2]), &self.mul(t[1], t[2])),
                    )
                })
                .check(),
            ),
        ];
        for (law, v) in checks {
            if let Verdict::Fail(witness) = v {
                return Err(Error::Axiom { law, witness });
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        let els = self.elements();
        Law::new(vec![els, els], |t| {
            (self.mul(t[0], t[1]), self.mul(t[1], t[0]))
        })
        .check()
        .passed()
    }

    /// Short human-readable name of the construction.
    pub fn name(&self) -> String {
        match &self.kind {
            RingKind::Zn(n) => format!("Z{n}"),
            RingKind::Product(r, s) => format!("{}x{}", r.name(), s.name()),
            RingKind::TrivialExtension(m) => format!("T({},{})", m.left().name(), m.name()),
            RingKind::Triangular(m) => {
                format!("Tri({},{},{})", m.left().name(), m.name(), m.right().name())
            }
            RingKind::UpperTriangular { base, n } => format!("T{n}({})", base.name()),
            RingKind::Table(_) => format!("Table[{}]", self.carrier),
        }
    }

    /// The `(R, M)` of a trivial extension.
    pub fn as_trivial_extension(&self) -> Option<&Arc<Bimodule>> {
        match &self.kind {
            RingKind::TrivialExtension(m) => Some(m),
            _ => None,
        }
    }

    /// The `(R, M, S)` module of a triangular ring.
    pub fn as_triangular(&self) -> Option<&Arc<Bimodule>> {
        match &self.kind {
            RingKind::Triangular(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for FinRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// How a bimodule is acted on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Action {
    /// `R` over itself.
    Regular,
    /// `ℤₙ` and `ℤₖ` acting on an abelian group by integer multiples.
    Scalar,
    /// An `(R, S)`-bimodule regarded as an `R×S`-bimodule: `(r,s)m = rm`, `m(r,s) = ms`.
    Product(Arc<Bimodule>),
    /// `Rⁿ` as row vectors: `R` on the left, `Tₙ(R)` on the right.
    RowVectors {
        base: Arc<FinRing>,
        len: usize,
    },
    Table {
        left: Bilinear,
        right: Bilinear,
    },
}

#[derive(Debug)]
pub struct Bimodule {
    carrier: AbelianGroup,
    left: Arc<FinRing>,
    right: Arc<FinRing>,
    action: Action,
    elements: OnceLock<Vec<GroupElement>>,
}

impl PartialEq for Bimodule {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier
            && self.left == other.left
            && self.right == other.right
            && self.action == other.action
    }
}

impl Eq for Bimodule {}

impl Bimodule {
    fn build(
        carrier: AbelianGroup,
        left: Arc<FinRing>,
        right: Arc<FinRing>,
        action: Action,
    ) -> Arc<Bimodule> {
        Arc::new(Bimodule {
            carrier,
            left,
            right,
            action,
            elements: OnceLock::new(),
        })
    }

    pub fn regular(ring: &Arc<FinRing>) -> Arc<Bimodule> {
        Self::build(
            ring.carrier().clone(),
            ring.clone(),
            ring.clone(),
            Action::Regular,
        )
    }

    /// `carrier` as a `(ℤₙ, ℤₖ)`-bimodule via integer multiples; the exponent
    /// of `carrier` must divide both `n` and `k`.
    pub fn scalar(
        left: &Arc<FinRing>,
        right: &Arc<FinRing>,
        carrier: AbelianGroup,
    ) -> Result<Arc<Bimodule>> {
        let e = carrier.exponent();
        for ring in [left, right] {
            match ring.kind() {
                RingKind::Zn(n) if n % e == 0 => {}
                RingKind::Zn(n) => {
                    return Err(Error::RingMismatch(format!(
                        "Z{n} cannot act by integer multiples on {carrier} (exponent {e})"
                    )))
                }
                _ => {
                    return Err(Error::RingMismatch(format!(
                        "integer-multiple action needs a ring Z_n, got {ring}"
                    )))
                }
            }
        }
        Ok(Self::build(
            carrier,
            left.clone(),
            right.clone(),
            Action::Scalar,
        ))
    }

    /// `Rⁿ` as an `(R, Tₙ(R))`-bimodule of row vectors.
    pub fn row_vectors(base: &Arc<FinRing>, len: usize) -> Result<Arc<Bimodule>> {
        let right = upper_triangular(base, len)?;
        let carrier = (0..len).fold(AbelianGroup::trivial(), |acc, _| {
            acc.direct_sum(base.carrier())
        });
        Ok(Self::build(
            carrier,
            base.clone(),
            right,
            Action::RowVectors {
                base: base.clone(),
                len,
            },
        ))
    }

    /// Bimodule given by structure constants for both actions, validated here.
    pub fn from_tables(
        left_ring: &Arc<FinRing>,
        right_ring: &Arc<FinRing>,
        carrier: AbelianGroup,
        left: Bilinear,
        right: Bilinear,
    ) -> Result<Arc<Bimodule>> {
        let shapes_ok = left.left() == left_ring.carrier()
            && left.right() == &carrier
            && left.dst() == &carrier
            && right.left() == &carrier
            && right.right() == right_ring.carrier()
            && right.dst() == &carrier;
        if !shapes_ok {
            return Err(Error::RingMismatch(
                "action tables do not match the rings and carrier".into(),
            ));
        }
        let m = Self::build(
            carrier,
            left_ring.clone(),
            right_ring.clone(),
            Action::Table { left, right },
        );
        m.validate()?;
        Ok(m)
    }

    pub fn carrier(&self) -> &AbelianGroup {
        &self.carrier
    }

    pub fn left(&self) -> &Arc<FinRing> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FinRing> {
        &self.right
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn order(&self) -> u128 {
        self.carrier.order()
    }

    pub fn elements(&self) -> &[GroupElement] {
        self.elements
            .get_or_init(|| self.carrier.elements().collect())
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.carrier.add(x, y)
    }

    pub fn left_act(&self, r: &GroupElement, m: &GroupElement) -> GroupElement {
        match &self.action {
            Action::Regular => self.left.mul(r, m),
            Action::Scalar => self.carrier.scale(r.coords()[0] as i64, m),
            Action::Product(inner) => {
                let r1 = r.slice(0..inner.left().rank());
                inner.left_act(&r1, m)
            }
            Action::RowVectors { base, len } => {
                let k = base.rank();
                let parts: Vec<GroupElement> = (0..*len)
                    .map(|j| base.mul(r, &m.slice(j * k..(j + 1) * k)))
                    .collect();
                GroupElement::concat(&parts.iter().collect::<Vec<_>>())
            }
            Action::Table { left, .. } => left.apply(r, m),
        }
    }

    pub fn right_act(&self, m: &GroupElement, s: &GroupElement) -> GroupElement {
        match &self.action {
            Action::Regular => self.right.mul(m, s),
            Action::Scalar => self.carrier.scale(s.coords()[0] as i64, m),
            Action::Product(inner) => {
                let n = s.coords().len();
                let s1 = s.slice(inner.left().rank()..n);
                inner.right_act(m, &s1)
            }
            Action::RowVectors { base, len } => {
                let k = base.rank();
                let parts: Vec<GroupElement> = (0..*len)
                    .map(|j| {
                        (0..=j).fold(base.zero(), |acc, l| {
                            let v = m.slice(l * k..(l + 1) * k);
                            base.add(&acc, &base.mul(&v, &upper_entry(s, *len, k, l, j)))
                        })
                    })
                    .collect();
                GroupElement::concat(&parts.iter().collect::<Vec<_>>())
            }
            Action::Table { right, .. } => right.apply(m, s),
        }
    }

    /// `r∘m = rm + mr`; needs the same ring on both sides.
    pub fn jordan(&self, r: &GroupElement, m: &GroupElement) -> GroupElement {
        self.add(&self.left_act(r, m), &self.right_act(m, r))
    }

    pub fn is_two_sided(&self) -> bool {
        self.left == self.right
    }

    pub fn name(&self) -> String {
        match &self.action {
            Action::Regular => self.left.name(),
            Action::Scalar => self.carrier.to_string().replace(' ', ""),
            Action::Product(inner) => inner.name(),
            Action::RowVectors { base, len } => format!("{}^{len}", base.name()),
            Action::Table { .. } => format!("Table[{}]", self.carrier),
        }
    }

    /// Exhaustive check of unitarity, action associativity and distributivity.
    pub fn validate(&self) -> Result<()> {
        let (r, s) = (&self.left, &self.right);
        let (rs, ss, ms) = (r.elements(), s.elements(), self.elements());
        let one_r = [r.one().clone()];
        let one_s = [s.one().clone()];
        let checks: Vec<(&'static str, Verdict)> = vec![
            (
                "left unitary",
                Law::new(vec![ms, &one_r], |t| {
                    (self.left_act(t[1], t[0]), t[0].clone())
                })
                .check(),
            ),
            (
                "right unitary",
                Law::new(vec![ms, &one_s], |t| {
                    (self.right_act(t[0], t[1]), t[0].clone())
                })
                .check(),
            ),
            (
                "left action associativity",
                Law::new(vec![rs, rs, ms], |t| {
                    (
                        self.left_act(&r.mul(t[0], t[1]), t[2]),
                        self.left_act(t[0], &self.left_act(t[1], t[2])),
                    )
                })
                .check(),
            ),
            (
                "right action associativity",
                Law::new(vec![ms, ss, ss], |t| {
                    (
                        self.right_act(t[0], &s.mul(t[1], t[2])),
                        self.right_act(&self.right_act(t[0], t[1]), t[2]),
                    )
                })
                .check(),
            ),
            (
                "bimodule compatibility",
                Law::new(vec![rs, ms, ss], |t| {
                    (
                        self.right_act(&self.left_act(t[0], t[1]), t[2]),
                        self.left_act(t[0], &self.right_act(t[1], t[2])),
                    )
                })
                .check(),
            ),
            (
                "left action distributivity",
                Law::new(vec![rs, rs, ms], |t| {
                    (
                        self.left_act(&r.add(t[0], t[1]), t[2]),
                        self.add(&self.left_act(t[0], t[2]), &self.left_act(t[1], t[2])),
                    )
                })
                .check()
                .and(|| {
                    Law::new(vec![rs, ms, ms], |t| {
                        (
                            self.left_act(t[0], &self.add(t[1], t[2])),
                            self.add(&self.left_act(t[0], t[1]), &self.left_act(t[0], t[2])),
                        )
                    })
                    .check()
                }),
            ),
            (
                "right action distributivity",
                Law::new(vec![ms, ms, ss], |t| {
                    (
                        self.right_act(&self.add(t[0], t[1]), t[2]),
                        self.add(&self.right_act(t[0], t[2]), &self.right_act(t[1], t[2])),
                    )
                })
                .check()
                .and(|| {
                    Law::new(vec![ms, ss, ss], |t| {
                        (
                            self.right_act(t[0], &s.add(t[1], t[2])),
                            self.add(&self.right_act(t[0], t[1]), &self.right_act(t[0], t[2])),
                        )
                    })
                    .check()
                }),
            ),
        ];
        for (law, v) in checks {
            if let Verdict::Fail(witness) = v {
                return Err(Error::Axiom { law, witness });
            }
        }
        Ok(())
    }
}

/// `ℤₙ`; `n = 1` gives the zero ring, whose identity is 0.
pub fn zn_ring(n: u64) -> Result<Arc<FinRing>> {
    let carrier = AbelianGroup::cyclic(n)?;
    let one = carrier.element(&[1])?;
    Ok(FinRing::build(carrier, RingKind::Zn(n), one))
}

pub fn product_ring(r: &Arc<FinRing>, s: &Arc<FinRing>) -> Arc<FinRing> {
    FinRing::build(
        r.carrier().direct_sum(s.carrier()),
        RingKind::Product(r.clone(), s.clone()),
        GroupElement::concat(&[r.one(), s.one()]),
    )
}

/// `T(R, M)`: `(r,m)(r',m') = (rr', rm' + mr')`, identity `(1, 0)`.
pub fn trivial_extension(r: &Arc<FinRing>, m: &Arc<Bimodule>) -> Result<Arc<FinRing>> {
    if m.left() != r || m.right() != r {
        return Err(Error::RingMismatch(format!(
            "module {} is not an {}-bimodule",
            m.name(),
            r.name()
        )));
    }
    Ok(FinRing::build(
        r.carrier().direct_sum(m.carrier()),
        RingKind::TrivialExtension(m.clone()),
        GroupElement::concat(&[r.one(), &m.carrier().zero()]),
    ))
}

/// `[R M; 0 S]` with matrix multiplication, identity `(1, 0, 1)`.
pub fn triangular_ring(
    r: &Arc<FinRing>,
    m: &Arc<Bimodule>,
    s: &Arc<FinRing>,
) -> Result<Arc<FinRing>> {
    if m.left() != r || m.right() != s {
        return Err(Error::RingMismatch(format!(
            "module {} is not an ({}, {})-bimodule",
            m.name(),
            r.name(),
            s.name()
        )));
    }
    Ok(FinRing::build(
        r.carrier().direct_sum(m.carrier()).direct_sum(s.carrier()),
        RingKind::Triangular(m.clone()),
        GroupElement::concat(&[r.one(), &m.carrier().zero(), s.one()]),
    ))
}

/// An `(R, S)`-bimodule regarded as an `R×S`-bimodule.
pub fn product_bimodule(m: &Arc<Bimodule>) -> Arc<Bimodule> {
    let ring = product_ring(m.left(), m.right());
    Bimodule::build(
        m.carrier().clone(),
        ring.clone(),
        ring,
        Action::Product(m.clone()),
    )
}

/// `n × n` upper triangular matrices over `R` (`n ≥ 1`; `T₁(R)` is `R` as matrices).
pub fn upper_triangular(base: &Arc<FinRing>, n: usize) -> Result<Arc<FinRing>> {
    if n == 0 {
        return Err(Error::Invalid("matrix size must be at least 1".into()));
    }
    let entries = n * (n + 1) / 2;
    let carrier = (0..entries).fold(AbelianGroup::trivial(), |acc, _| {
        acc.direct_sum(base.carrier())
    });
    let k = base.rank();
    let mut one = vec![0i64; carrier.rank()];
    for i in 0..n {
        let p = upper_pos(n, i, i) * k;
        for (c, v) in one[p..p + k].iter_mut().zip(base.one().coords()) {
            *c = *v as i64;
        }
    }
    let one = carrier.element(&one)?;
    Ok(FinRing::build(
        carrier,
        RingKind::UpperTriangular {
            base: base.clone(),
            n,
        },
        one,
    ))
}

/// `Tₙ(R)` for `n ≥ 2`, refusing instances with more than `bound` elements.
pub fn upper_triangular_tn(base: &Arc<FinRing>, n: usize, bound: u64) -> Result<Arc<FinRing>> {
    if n < 2 {
        return Err(Error::Invalid(format!("T_n(R) needs n >= 2, got {n}")));
    }
    let entries = (n * (n + 1) / 2) as u32;
    let size = base.order().checked_pow(entries).unwrap_or(u128::MAX);
    if size > bound as u128 {
        return Err(Error::BoundExceeded {
            what: format!("T{n}({})", base.name()),
            size,
            bound,
        });
    }
    upper_triangular(base, n)
}

/// A ring isomorphism stored as a pair of additive maps.
#[derive(Clone, Debug)]
pub struct RingIso {
    pub source: Arc<FinRing>,
    pub target: Arc<FinRing>,
    pub forward: GroupHom,
    pub inverse: GroupHom,
}

impl RingIso {
    pub fn identity(ring: &Arc<FinRing>) -> RingIso {
        let id = GroupHom::identity(ring.carrier());
        RingIso {
            source: ring.clone(),
            target: ring.clone(),
            forward: id.clone(),
            inverse: id,
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingIso) -> Result<RingIso> {
        if self.target != other.source {
            return Err(Error::RingMismatch(format!(
                "cannot compose isomorphisms through {} and {}",
                self.target, other.source
            )));
        }
        Ok(RingIso {
            source: self.source.clone(),
            target: other.target.clone(),
            forward: self.forward.then(&other.forward)?,
            inverse: other.inverse.then(&self.inverse)?,
        })
    }

    /// Checks, exhaustively: `forward(1) = 1`, `forward(xy) = forward(x)·forward(y)`
    /// for all pairs, and that the two maps are mutually inverse. Additivity
    /// holds by construction.
    pub fn verify(&self) -> Vec<(&'static str, Verdict)> {
        let (a, b) = (&self.source, &self.target);
        let one = [a.one().clone()];
        let (ea, eb) = (a.elements(), b.elements());
        let checks = vec![
            (
                "forward(1) = 1",
                Law::new(vec![&one[..]], |t| {
                    (self.forward.apply(t[0]), b.one().clone())
                })
                .check(),
            ),
            (
                "forward(xy) = forward(x) forward(y)",
                Law::new(vec![ea, ea], |t| {
                    (
                        self.forward.apply(&a.mul(t[0], t[1])),
                        b.mul(&self.forward.apply(t[0]), &self.forward.apply(t[1])),
                    )
                })
                .check(),
            ),
            (
                "inverse(forward(x)) = x",
                Law::new(vec![ea], |t| {
                    (self.inverse.apply(&self.forward.apply(t[0])), t[0].clone())
                })
                .check(),
            ),
            (
                "forward(inverse(y)) = y",
                Law::new(vec![eb], |t| {
                    (self.forward.apply(&self.inverse.apply(t[0])), t[0].clone())
                })
                .check(),
            ),
        ];
        checks
    }

    pub fn is_verified(&self) -> bool {
        self.verify().iter().all(|(_, v)| v.passed())
    }
}

/// Coordinate permutation `out[i] = x[perm[i]]` as a hom `src → dst`.
fn permutation(src: &AbelianGroup, dst: &AbelianGroup, perm: &[usize]) -> GroupHom {
    let mut images = vec![vec![0i64; dst.rank()]; src.rank()];
    for (i, &p) in perm.iter().enumerate() {
        images[p][i] = 1;
    }
    GroupHom::new(src.clone(), dst.clone(), images).expect("permutation of equal factors")
}

/// `[r m; 0 s] ↦ ((r, s), m)`, onto `T(R×S, M)`.
pub fn triangular_to_trivial_iso(tri: &Arc<FinRing>) -> Result<RingIso> {
    let m = tri
        .as_triangular()
        .ok_or_else(|| Error::RingMismatch(format!("{tri} is not a triangular ring")))?;
    let pm = product_bimodule(m);
    let target = trivial_extension(pm.left(), &pm)?;
    let (kr, km, ks) = (m.left().rank(), m.carrier().rank(), m.right().rank());
    // target coords: r (kr), s (ks), m (km); source coords: r, m, s.
    let fwd: Vec<usize> = (0..kr)
        .chain(kr + km..kr + km + ks)
        .chain(kr..kr + km)
        .collect();
    let mut inv = vec![0; fwd.len()];
    for (i, &p) in fwd.iter().enumerate() {
        inv[p] = i;
    }
    Ok(RingIso {
        forward: permutation(tri.carrier(), target.carrier(), &fwd),
        inverse: permutation(target.carrier(), tri.carrier(), &inv),
        source: tri.clone(),
        target,
    })
}

/// `Tₙ(R) ≅ [R  Rⁿ⁻¹; 0  Tₙ₋₁(R)]`, splitting off the first row.
pub fn block_split_iso(base: &Arc<FinRing>, n: usize, bound: u64) -> Result<RingIso> {
    let tn = upper_triangular_tn(base, n, bound)?;
    let module = Bimodule::row_vectors(base, n - 1)?;
    let tri = triangular_ring(base, &module, module.right())?;
    // Row-major upper storage already lists (0,0), the rest of row 0, then
    // the lower block row by row.
    let id: Vec<usize> = (0..tn.rank()).collect();
    Ok(RingIso {
        forward: permutation(tn.carrier(), tri.carrier(), &id),
        inverse: permutation(tri.carrier(), tn.carrier(), &id),
        source: tn,
        target: tri,
    })
}

/// `2x = 0 ⇒ x = 0`.
pub fn is_two_torsion_free(g: &AbelianGroup) -> bool {
    g.elements()
        .all(|x| x.is_zero() || !g.scale(2, &x).is_zero())
}

/// `2m = 0` for every `m`.
pub fn is_two_torsion(g: &AbelianGroup) -> bool {
    g.elements().all(|x| g.scale(2, &x).is_zero())
}

/// Whether only `0` annihilates `M` from the left, and from the right.
pub fn is_faithful(m: &Bimodule) -> (bool, bool) {
    let ms = m.elements();
    let left = m
        .left()
        .elements()
        .iter()
        .all(|r| r.is_zero() || ms.iter().any(|x| !m.left_act(r, x).is_zero()));
    let right = m
        .right()
        .elements()
        .iter()
        .all(|s| s.is_zero() || ms.iter().any(|x| !m.right_act(x, s).is_zero()));
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(r: &FinRing, c: &[i64]) -> GroupElement {
        r.carrier().element(c).unwrap()
    }

    fn z(n: u64) -> Arc<FinRing> {
        zn_ring(n).unwrap()
    }

    #[test]
    fn zn_arithmetic() {
        assert!(zn_ring(0).is_err());
        let z1 = z(1);
        assert!(z1.one().is_zero());
        z1.validate().unwrap();
        let z3 = z(3);
        assert_eq!(z3.mul(&el(&z3, &[2]), &el(&z3, &[2])), el(&z3, &[1]));
        let z4 = z(4);
        assert_eq!(z4.mul(&el(&z4, &[2]), &el(&z4, &[2])), el(&z4, &[0]));
    }

    #[test]
    fn products() {
        let p = product_ring(&z(2), &z(3));
        assert_eq!(p.mul(&el(&p, &[1, 2]), &el(&p, &[1, 2])), el(&p, &[1, 1]));
        for x in p.elements() {
            assert_eq!(&p.mul(p.one(), x), x);
            assert_eq!(&p.mul(x, p.one()), x);
        }
        let q = product_ring(&z(2), &z(2));
        assert!(q.mul(&el(&q, &[1, 0]), &el(&q, &[0, 1])).is_zero());
        p.validate().unwrap();
    }

    #[test]
    fn trivial_extension_examples() {
        let z2 = z(2);
        let t = trivial_extension(&z2, &Bimodule::regular(&z2)).unwrap();
        assert_eq!(t.mul(&el(&t, &[1, 1]), &el(&t, &[1, 1])), el(&t, &[1, 0]));
        for a in 0..2 {
            for b in 0..2 {
                assert!(t.mul(&el(&t, &[0, a]), &el(&t, &[0, b])).is_zero());
            }
        }
        let z3 = z(3);
        let t3 = trivial_extension(&z3, &Bimodule::regular(&z3)).unwrap();
        assert_eq!(
            t3.mul(&el(&t3, &[2, 1]), &el(&t3, &[1, 2])),
            el(&t3, &[2, 2])
        );
        t3.validate().unwrap();
        assert_eq!(t3.one(), &el(&t3, &[1, 0]));
    }

    #[test]
    fn trivial_extension_mismatch() {
        let m = Bimodule::regular(&z(2));
        assert!(matches!(
            trivial_extension(&z(3), &m),
            Err(Error::RingMismatch(_))
        ));
    }

    #[test]
    fn triangular_matrix_units() {
        let z2 = z(2);
        let t = triangular_ring(&z2, &Bimodule::regular(&z2), &z2).unwrap();
        let (e11, e12) = (el(&t, &[1, 0, 0]), el(&t, &[0, 1, 0]));
        assert!(t.mul(&e12, &e12).is_zero());
        assert_eq!(t.mul(&e11, &e12), e12);
        assert!(t.mul(&e12, &e11).is_zero());
        assert_eq!(t.one(), &el(&t, &[1, 0, 1]));
        t.validate().unwrap();
    }

    #[test]
    fn product_bimodule_actions() {
        let z2 = z(2);
        let m = Bimodule::regular(&z2);
        let pm = product_bimodule(&m);
        let ring = pm.left();
        let x = el(ring, &[1, 0]);
        for v in pm.elements() {
            assert_eq!(&pm.left_act(&el(ring, &[1, 1]), v), v);
            assert_eq!(&pm.left_act(&x, v), v);
            assert!(pm.left_act(&el(ring, &[0, 1]), v).is_zero());
            assert_eq!(&pm.right_act(v, &el(ring, &[0, 1])), v);
        }
        pm.validate().unwrap();
    }

    #[test]
    fn scalar_module_over_z4() {
        let z4 = z(4);
        let m = Bimodule::scalar(&z4, &z4, AbelianGroup::cyclic(2).unwrap()).unwrap();
        m.validate().unwrap();
        assert!(Bimodule::scalar(&z(3), &z(3), AbelianGroup::cyclic(2).unwrap()).is_err());
        let t = trivial_extension(&z4, &m).unwrap();
        t.validate().unwrap();
        assert_eq!(t.order(), 8);
    }

    #[test]
    fn triangular_iso_on_t2_z2() {
        let z2 = z(2);
        let t = triangular_ring(&z2, &Bimodule::regular(&z2), &z2).unwrap();
        let iso = triangular_to_trivial_iso(&t).unwrap();
        let tgt = &iso.target;
        assert_eq!(iso.forward.apply(t.one()), *tgt.one());
        assert_eq!(iso.forward.apply(&el(&t, &[0, 1, 0])), el(tgt, &[0, 0, 1]));
        assert_eq!(iso.forward.apply(&el(&t, &[1, 0, 1])), el(tgt, &[1, 1, 0]));
        for (law, v) in iso.verify() {
            assert!(v.passed(), "{law}");
        }
    }

    #[test]
    fn upper_triangular_orders() {
        let z2 = z(2);
        let t2 = upper_triangular_tn(&z2, 2, 4096).unwrap();
        assert_eq!(t2.order(), 8);
        let t3 = upper_triangular_tn(&z2, 3, 4096).unwrap();
        assert_eq!(t3.order(), 64);
        for x in t3.elements() {
            assert_eq!(&t3.mul(t3.one(), x), x);
            assert_eq!(&t3.mul(x, t3.one()), x);
        }
        assert!(matches!(
            upper_triangular_tn(&z2, 4, 512),
            Err(Error::BoundExceeded { size: 1024, .. })
        ));
        assert!(upper_triangular_tn(&z2, 1, 4096).is_err());
        t2.validate().unwrap();
    }

    #[test]
    fn block_split_iso_small_cases() {
        let iso = block_split_iso(&z(2), 2, 4096).unwrap();
        assert_eq!(iso.forward.apply(iso.source.one()), *iso.target.one());
        assert!(iso.is_verified());
        let iso = block_split_iso(&z(2), 3, 4096).unwrap();
        assert!(iso.is_verified());
    }

    #[test]
    fn row_vectors_bimodule_is_valid() {
        let m = Bimodule::row_vectors(&z(2), 2).unwrap();
        m.validate().unwrap();
    }

    #[test]
    fn torsion_flags() {
        let g = |f: &[u64]| AbelianGroup::new(f.to_vec()).unwrap();
        assert!(is_two_torsion_free(&g(&[3])));
        assert!(!is_two_torsion_free(&g(&[2])));
        assert!(!is_two_torsion_free(&g(&[6])));
        assert!(is_two_torsion(&g(&[2])));
        assert!(is_two_torsion(&g(&[2, 2])));
        assert!(!is_two_torsion(&g(&[4])));
    }

    #[test]
    fn faithfulness() {
        let z3 = z(3);
        assert_eq!(is_faithful(&Bimodule::regular(&z3)), (true, true));
        let z4 = z(4);
        let m = Bimodule::scalar(&z4, &z4, AbelianGroup::cyclic(2).unwrap()).unwrap();
        assert!(!is_faithful(&m).0);
        let zero = Bimodule::scalar(&z3, &z3, AbelianGroup::trivial()).unwrap();
        assert_eq!(is_faithful(&zero), (false, false));
    }

    #[test]
    fn bad_table_ring_rejected() {
        // Z2 with 1*1 = 0 has no identity.
        let c = AbelianGroup::cyclic(2).unwrap();
        let t = Bilinear::new(c.clone(), c.clone(), c.clone(), vec![vec![vec![0]]]).unwrap();
        let err = FinRing::from_table(c.clone(), t, c.element(&[1]).unwrap()).unwrap_err();
        assert!(matches!(
            err,
            Error::Axiom {
                law: "left identity",
                ..
            }
        ));
    }
}
