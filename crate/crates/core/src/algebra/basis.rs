use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::elimination::{primitive, Echelon, RatRow};
use super::relations::piece_relations;
use super::DiagramVector;
use crate::diagram::{enumerate_with, Diagram, EnumerateOptions, Piece};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Bumped whenever a sign or ordering convention changes; stale cache files
/// are ignored.
pub const CONVENTIONS_VERSION: u32 = 1;
const CACHE_FORMAT: &str = "jacobi-basis";
const CACHE_VERSION: u32 = 1;

/// A basis of one graded piece modulo IHX/STU, with reduction data.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    piece: Piece,
    columns: Vec<Diagram>,
    index: HashMap<Diagram, usize>,
    reduced: BTreeMap<usize, RatRow>,
    basis: Vec<usize>,
}

pub fn compute_basis(piece: Piece) -> Result<QuotientBasis> {
    compute_basis_with(piece, &EnumerateOptions::default())
}

pub fn compute_basis_with(piece: Piece, opts: &EnumerateOptions) -> Result<QuotientBasis> {
    let mut columns = Vec::new();
    for g in piece.gradings() {
        columns.extend(enumerate_with(piece.space(), g, opts)?.into_iter().map(|c| c.diagram));
    }
    columns.sort();
    let index: HashMap<Diagram, usize> = columns.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();

    let mut echelon = Echelon::default();
    for r in piece_relations(piece, opts)?.relations {
        let row: RatRow = r
            .terms()
            .map(|(d, c)| {
                index
                    .get(d)
                    .map(|&j| (j, c.clone()))
                    .ok_or_else(|| Error::Grading(format!("relation term outside {piece}")))
            })
            .collect::<Result<_>>()?;
        echelon.insert(primitive(&row));
    }
    Ok(QuotientBasis::from_parts(piece, columns, echelon.reduced()))
}

impl QuotientBasis {
    fn from_parts(piece: Piece, columns: Vec<Diagram>, reduced: BTreeMap<usize, RatRow>) -> Self {
        let index = columns.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let basis: Vec<usize> = (0..columns.len()).filter(|j| !reduced.contains_key(j)).collect();
        QuotientBasis {
            piece,
            columns,
            index,
            reduced,
            basis,
        }
    }

    pub fn piece(&self) -> Piece {
        self.piece
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// All enumerated diagrams of the piece, in coordinate order.
    pub fn columns(&self) -> &[Diagram] {
        &self.columns
    }

    pub fn basis_diagrams(&self) -> Vec<&Diagram> {
        self.basis.iter().map(|&j| &self.columns[j]).collect()
    }

    pub fn relation_rank(&self) -> usize {
        self.reduced.len()
    }

    /// Coordinates of `x` in the basis.
    pub fn reduce(&self, x: &DiagramVector) -> Result<Vec<Rational>> {
        if x.space() != self.piece.space() {
            return Err(Error::Grading(format!("{} vector reduced in {}", x.space(), self.piece)));
        }
        let mut full = vec![Rational::zero(); self.columns.len()];
        for (d, c) in x.terms() {
            if d.piece() != self.piece {
                return Err(Error::Grading(format!("term in {} reduced in {}", d.piece(), self.piece)));
            }
            let &j = self.index.get(d).ok_or_else(|| {
                Error::Unsupported(format!("diagram with {} free loop(s) has no coordinates in {}", d.free_loops(), self.piece))
            })?;
            full[j] += c;
        }
        for (&p, row) in &self.reduced {
            if full[p].is_zero() {
                continue;
            }
            let f = full[p].clone();
            for (j, c) in row {
                full[*j] -= &f * c;
            }
        }
        Ok(self.basis.iter().map(|&j| full[j].clone()).collect())
    }

    /// The basis vector with coordinate `i`, as a diagram vector.
    pub fn basis_vector(&self, i: usize) -> DiagramVector {
        DiagramVector::from_diagram(&self.columns[self.basis[i]])
    }

    fn to_file(&self) -> CacheFile {
        CacheFile {
            format: CACHE_FORMAT.into(),
            version: CACHE_VERSION,
            conventions: CONVENTIONS_VERSION,
            piece: self.piece,
            dimension: self.dimension(),
            columns: self.columns.clone(),
            basis: self.basis.clone(),
            pivots: self
                .reduced
                .iter()
                .map(|(&column, row)| PivotRow {
                    column,
                    entries: row.iter().map(|(j, c)| (*j, rational::format(c))).collect(),
                })
                .collect(),
        }
    }

    fn from_file(f: CacheFile) -> Result<Self> {
        let mut reduced = BTreeMap::new();
        for p in f.pivots {
            let row = p
                .entries
                .iter()
                .map(|(j, c)| Ok((*j, rational::parse(c)?)))
                .collect::<Result<RatRow>>()?;
            reduced.insert(p.column, row);
        }
        let out = Self::from_parts(f.piece, f.columns, reduced);
        if out.basis != f.basis || out.dimension() != f.dimension {
            return Err(Error::Format("inconsistent basis cache file".into()));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct PivotRow {
    column: usize,
    entries: Vec<(usize, String)>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    conventions: u32,
    piece: Piece,
    dimension: usize,
    columns: Vec<Diagram>,
    basis: Vec<usize>,
    pivots: Vec<PivotRow>,
}

/// Quotient bases by piece, memoized in memory and optionally on disk.
pub struct BasisStore {
    dir: Option<PathBuf>,
    opts: EnumerateOptions,
    memo: Mutex<HashMap<Piece, Arc<QuotientBasis>>>,
}

impl Default for BasisStore {
    fn default() -> Self {
        Self::new(None)
    }
}

impl BasisStore {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self::with_options(dir, EnumerateOptions::default())
    }

    pub fn with_options(dir: Option<PathBuf>, opts: EnumerateOptions) -> Self {
        BasisStore {
            dir,
            opts,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn options(&self) -> &EnumerateOptions {
        &self.opts
    }

    pub fn cache_path(&self, piece: Piece) -> Option<PathBuf> {
        let name = match piece {
            Piece::A { total } => format!("basis-c{CONVENTIONS_VERSION}-A-t{total}.json"),
            Piece::B { v, l } => format!("basis-c{CONVENTIONS_VERSION}-B-v{v}-l{l}.json"),
        };
        self.dir.as_ref().map(|d| d.join(name))
    }

    pub fn get(&self, piece: Piece) -> Result<Arc<QuotientBasis>> {
        if let Some(b) = self.memo.lock().unwrap().get(&piece) {
            return Ok(b.clone());
        }
        let path = self.cache_path(piece);
        let loaded = path.as_deref().and_then(|p| load(p, piece));
        let basis = match loaded {
            Some(b) => b,
            None => {
                let b = compute_basis_with(piece, &self.opts)?;
                if let Some(p) = &path {
                    store(p, &b)?;
                }
                b
            }
        };
        let basis = Arc::new(basis);
        self.memo.lock().unwrap().insert(piece, basis.clone());
        Ok(basis)
    }

    /// Coordinates of every homogeneous piece of `x`.
    pub fn reduce(&self, x: &DiagramVector) -> Result<BTreeMap<Piece, Vec<Rational>>> {
        x.pieces()
            .into_iter()
            .map(|(p, part)| Ok((p, self.get(p)?.reduce(&part)?)))
            .collect()
    }

    /// Whether `x - y` vanishes in every graded piece of the quotient.
    pub fn equal_mod_relations(&self, x: &DiagramVector, y: &DiagramVector) -> Result<bool> {
        let diff = x.sub(y)?;
        Ok(self.reduce(&diff)?.values().all(|c| c.iter().all(Zero::is_zero)))
    }
}

fn load(path: &Path, piece: Piece) -> Option<QuotientBasis> {
    let text = fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.format != CACHE_FORMAT || file.version != CACHE_VERSION || file.conventions != CONVENTIONS_VERSION || file.piece != piece {
        return None;
    }
    QuotientBasis::from_file(file).ok()
}

/// Writes next to the target and renames, so readers never see a partial file.
fn store(path: &Path, basis: &QuotientBasis) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let nonce = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    let tmp = dir.join(format!(
        ".{}.{}.{nonce}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("basis"),
        std::process::id()
    ));
    fs::write(&tmp, serde_json::to_string(&basis.to_file())?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
