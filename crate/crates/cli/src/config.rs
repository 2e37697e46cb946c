//! JSON documents accepted by the command line: ring expressions, gradings,
//! maps, and suite matrices.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use superder::abelian::{AbelianGroup, Bilinear, GroupHom};
use superder::finring::{
    product_bimodule, product_ring, triangular_ring, trivial_extension, upper_triangular, zn_ring,
    Bimodule, FinRing,
};
use superder::graded::{Degree, GradedRing};
use superder::suite::MatrixEntry;

use crate::CliError;

#[derive(Deserialize, Debug, Clone)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RingExpr {
    Zn(u64),
    Product(Box<RingExpr>, Box<RingExpr>),
    TrivialExtension {
        module: ModuleExpr,
    },
    Triangular {
        module: ModuleExpr,
    },
    UpperTriangular {
        base: Box<RingExpr>,
        n: usize,
    },
    Table {
        factors: Vec<u64>,
        products: Vec<Vec<Vec<i64>>>,
        one: Vec<i64>,
    },
}

#[derive(Deserialize, Debug, Clone)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleExpr {
    Regular(Box<RingExpr>),
    Scalar {
        left: Box<RingExpr>,
        right: Box<RingExpr>,
        factors: Vec<u64>,
    },
    /// An `(R, S)`-bimodule seen over `R×S`.
    Product(Box<ModuleExpr>),
    RowVectors {
        base: Box<RingExpr>,
        len: usize,
    },
    Table {
        left: Box<RingExpr>,
        right: Box<RingExpr>,
        factors: Vec<u64>,
        left_action: Vec<Vec<Vec<i64>>>,
        right_action: Vec<Vec<Vec<i64>>>,
    },
}

/// A map as written in a document: generator images of an additive map
/// (with an optional degree) or generator-pair images of a biadditive map.
#[derive(Deserialize, Debug, Clone)]
#[serde(untagged, deny_unknown_fields)]
pub enum MapDoc {
    Additive {
        images: Vec<Vec<i64>>,
        #[serde(default)]
        degree: Option<u8>,
    },
    Biadditive {
        pair_images: Vec<Vec<Vec<i64>>>,
    },
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub ring: RingExpr,
    #[serde(default)]
    pub grading: Option<Vec<bool>>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapDoc>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    entries: Vec<MatrixEntryDoc>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct MatrixEntryDoc {
    name: String,
    ring: RingExpr,
}

/// A loaded configuration.
pub struct Config {
    pub ring: Arc<FinRing>,
    pub graded: GradedRing,
    pub maps: BTreeMap<String, MapDoc>,
}

pub enum LoadedMap {
    Additive {
        map: GroupHom,
        degree: Option<Degree>,
    },
    Biadditive(Bilinear),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn build_ring(expr: &RingExpr, bound: u64) -> Result<Arc<FinRing>, CliError> {
    let ring = match expr {
        RingExpr::Zn(n) => zn_ring(*n)?,
        RingExpr::Product(r, s) => product_ring(&build_ring(r, bound)?, &build_ring(s, bound)?),
        RingExpr::TrivialExtension { module } => {
            let m = build_module(module, bound)?;
            trivial_extension(m.left(), &m)?
        }
        RingExpr::Triangular { module } => {
            let m = build_module(module, bound)?;
            triangular_ring(m.left(), &m, m.right())?
        }
        RingExpr::UpperTriangular { base, n } => {
            let base = build_ring(base, bound)?;
            let order = (base.order() as f64).powi((*n * (*n + 1) / 2) as i32);
            if order > bound as f64 {
                return Err(too_big("upper triangular ring", order as u128, bound));
            }
            upper_triangular(&base, *n)?
        }
        RingExpr::Table {
            factors,
            products,
            one,
        } => {
            let carrier = AbelianGroup::new(factors.clone())?;
            within(&carrier, bound)?;
            let table = Bilinear::new(
                carrier.clone(),
                carrier.clone(),
                carrier.clone(),
                products.clone(),
            )?;
            let one = carrier.element(one)?;
            FinRing::from_table(carrier, table, one)?
        }
    };
    within(ring.carrier(), bound)?;
    Ok(ring)
}

pub fn build_module(expr: &ModuleExpr, bound: u64) -> Result<Arc<Bimodule>, CliError> {
    let m = match expr {
        ModuleExpr::Regular(r) => Bimodule::regular(&build_ring(r, bound)?),
        ModuleExpr::Scalar {
            left,
            right,
            factors,
        } => {
            let carrier = AbelianGroup::new(factors.clone())?;
            Bimodule::scalar(
                &build_ring(left, bound)?,
                &build_ring(right, bound)?,
                carrier,
            )?
        }
        ModuleExpr::Product(inner) => product_bimodule(&build_module(inner, bound)?),
        ModuleExpr::RowVectors { base, len } => {
            Bimodule::row_vectors(&build_ring(base, bound)?, *len)?
        }
        ModuleExpr::Table {
            left,
            right,
            factors,
            left_action,
            right_action,
        } => {
            let (l, r) = (build_ring(left, bound)?, build_ring(right, bound)?);
            let carrier = AbelianGroup::new(factors.clone())?;
            within(&carrier, bound)?;
            let la = Bilinear::new(
                l.carrier().clone(),
                carrier.clone(),
                carrier.clone(),
                left_action.clone(),
            )?;
            let ra = Bilinear::new(
                carrier.clone(),
                r.carrier().clone(),
                carrier.clone(),
                right_action.clone(),
            )?;
            Bimodule::from_tables(&l, &r, carrier, la, ra)?
        }
    };
    within(m.carrier(), bound)?;
    Ok(m)
}

fn too_big(what: &str, size: u128, bound: u64) -> CliError {
    CliError::from(superder::Error::BoundExceeded {
        what: what.to_string(),
        size,
        bound,
    })
}

fn within(g: &AbelianGroup, bound: u64) -> Result<(), CliError> {
    if g.order() > bound as u128 {
        return Err(too_big(&format!("group {g}"), g.order(), bound));
    }
    Ok(())
}

pub fn load_config(path: &Path, bound: u64) -> Result<Config, CliError> {
    let doc: ConfigDoc = parse(path, &read(path)?)?;
    let ring = build_ring(&doc.ring, bound)?;
    let graded = match doc.grading {
        Some(mask) => GradedRing::from_mask(&ring, mask)?,
        None => GradedRing::standard(&ring),
    };
    Ok(Config {
        ring,
        graded,
        maps: doc.maps,
    })
}

/// `@name` refers to a map in the configuration; anything else is a file.
pub fn load_map(spec: &str, config: &Config) -> Result<LoadedMap, CliError> {
    let doc = match spec.strip_prefix('@') {
        Some(name) => config.maps.get(name).cloned().ok_or_else(|| {
            CliError::Input(format!("no map named {name:?} in the configuration"))
        })?,
        None => {
            let path = Path::new(spec);
            parse(path, &read(path)?)?
        }
    };
    let c = config.ring.carrier();
    Ok(match doc {
        MapDoc::Additive { images, degree } => LoadedMap::Additive {
            map: GroupHom::new(c.clone(), c.clone(), images)?,
            degree: degree.map(Degree::from_u8).transpose()?,
        },
        MapDoc::Biadditive { pair_images } => {
            LoadedMap::Biadditive(Bilinear::new(c.clone(), c.clone(), c.clone(), pair_images)?)
        }
    })
}

/// Entries are built without a size cap; oversized ones are skipped by the
/// suite with a notice instead of failing the whole matrix.
pub fn load_matrix(path: &Path) -> Result<Vec<MatrixEntry>, CliError> {
    let doc: MatrixDoc = parse(path, &read(path)?)?;
    doc.entries
        .iter()
        .map(|e| {
            Ok(MatrixEntry::new(
                e.name.clone(),
                build_ring(&e.ring, u64::MAX)?,
            ))
        })
        .collect()
}
