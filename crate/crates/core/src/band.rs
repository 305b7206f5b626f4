//! Finite bands: transformation pairs in `T_I^(l) x T_J^(r)`, table-backed
//! bands, the band `B_G = K ∪ L` built from a Cayley-form presentation,
//! Green's relations and D-class grids.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentations::{CayleyFormPresentation, CayleyRelation, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BandError {
    #[error("index sets differ: sigma on {left_rows}/{right_rows} points, tau on {left_cols}/{right_cols} points")]
    MismatchedIndexSets { left_rows: usize, right_rows: usize, left_cols: usize, right_cols: usize },
    #[error("not a band: {0}")]
    NotABand(Counterexample),
    #[error("invalid Cayley-form presentation: {0:?}")]
    InvalidPresentation(Vec<Violation>),
    #[error("two distinct L elements induce the same transformation pair ({0} and {1})")]
    CollapsedElements(String, String),
    #[error("|B_G| = {actual} but the closed formula gives {expected}")]
    SizeFormula { actual: usize, expected: usize },
    #[error("element {0} is not in D-class {1}")]
    NotInClass(usize, usize),
    #[error("malformed band table: {0}")]
    Table(String),
}

/// A witness that a finite operation table is not a band.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Counterexample {
    NotClosed { x: usize, y: usize },
    NotIdempotent { x: usize },
    NotAssociative { x: usize, y: usize, z: usize },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::NotClosed { x, y } => write!(f, "product of {x} and {y} leaves the set"),
            Counterexample::NotIdempotent { x } => write!(f, "element {x} is not idempotent"),
            Counterexample::NotAssociative { x, y, z } => write!(f, "({x}{y}){z} != {x}({y}{z})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Transformations

/// A total map `{0..n} -> {0..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transformation(Vec<usize>);

impl Transformation {
    pub fn new(images: Vec<usize>) -> Self {
        debug_assert!(images.iter().all(|&x| x < images.len()));
        Transformation(images)
    }

    pub fn identity(n: usize) -> Self {
        Transformation((0..n).collect())
    }

    pub fn constant(n: usize, value: usize) -> Self {
        Transformation(vec![value; n])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `x -> self(first(x))`: apply `first`, then `self`.
    pub fn after(&self, first: &Transformation) -> Transformation {
        Transformation(first.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn is_idempotent(&self) -> bool {
        self.0.iter().all(|&x| self.0[x] == x)
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }

    pub fn constant_value(&self) -> Option<usize> {
        let first = *self.0.first()?;
        self.0.iter().all(|&x| x == first).then_some(first)
    }

    /// Kernel classes, each sorted, ordered by least element.
    pub fn kernel(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
        for (x, &y) in self.0.iter().enumerate() {
            match classes.iter_mut().find(|(img, _)| *img == y) {
                Some((_, c)) => c.push(x),
                None => classes.push((y, vec![x])),
            }
        }
        classes.into_iter().map(|(_, c)| c).collect()
    }
}

/// An element `(sigma, tau)` of `T_I^(l) x T_J^(r)`: `sigma` acts on the
/// left, `tau` on the right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransformationPair {
    pub sigma: Transformation,
    pub tau: Transformation,
}

impl TransformationPair {
    pub fn new(sigma: Transformation, tau: Transformation) -> Self {
        TransformationPair { sigma, tau }
    }

    /// The constant pair `e_ij`.
    pub fn constant(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        TransformationPair { sigma: Transformation::constant(rows, i), tau: Transformation::constant(cols, j) }
    }

    pub fn as_constant(&self) -> Option<(usize, usize)> {
        Some((self.sigma.constant_value()?, self.tau.constant_value()?))
    }

    pub fn is_idempotent(&self) -> bool {
        self.sigma.is_idempotent() && self.tau.is_idempotent()
    }
}

/// Product in `T_I^(l) x T_J^(r)`: `sigma = x.sigma ∘ y.sigma` (left maps
/// compose right to left) and `(j)tau = ((j)x.tau)y.tau`.
pub fn compose_pairs(x: &TransformationPair, y: &TransformationPair) -> Result<TransformationPair, BandError> {
    if x.sigma.degree() != y.sigma.degree() || x.tau.degree() != y.tau.degree() {
        return Err(BandError::MismatchedIndexSets {
            left_rows: x.sigma.degree(),
            right_rows: y.sigma.degree(),
            left_cols: x.tau.degree(),
            right_cols: y.tau.degree(),
        });
    }
    Ok(TransformationPair { sigma: x.sigma.after(&y.sigma), tau: y.tau.after(&x.tau) })
}

// ---------------------------------------------------------------------------
// Table-backed bands

/// Checks closure, idempotency and associativity of a finite table.
/// Idempotency is checked first, then closure, then all triples.
pub fn check_band(table: &[Vec<usize>]) -> Result<(), Counterexample> {
    let n = table.len();
    for (x, row) in table.iter().enumerate() {
        if row.get(x) != Some(&x) {
            return Err(Counterexample::NotIdempotent { x });
        }
    }
    for (x, row) in table.iter().enumerate() {
        if row.len() != n {
            let y = row.len().min(n);
            return Err(Counterexample::NotClosed { x, y });
        }
        if let Some(y) = row.iter().position(|&p| p >= n) {
            return Err(Counterexample::NotClosed { x, y });
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = table[x][y];
            for z in 0..n {
                if table[xy][z] != table[x][table[y][z]] {
                    return Err(Counterexample::NotAssociative { x, y, z });
                }
            }
        }
    }
    Ok(())
}

/// Checks idempotency and closure of a set of transformation pairs;
/// associativity is inherited from map composition.
pub fn check_pair_band(pairs: &[TransformationPair]) -> Result<(), Counterexample> {
    for (x, p) in pairs.iter().enumerate() {
        if !p.is_idempotent() {
            return Err(Counterexample::NotIdempotent { x });
        }
    }
    let lookup: HashMap<&TransformationPair, usize> = pairs.iter().enumerate().map(|(i, p)| (p, i)).collect();
    for (x, p) in pairs.iter().enumerate() {
        for (y, q) in pairs.iter().enumerate() {
            let ok = compose_pairs(p, q).map(|r| lookup.contains_key(&r)).unwrap_or(false);
            if !ok {
                return Err(Counterexample::NotClosed { x, y });
            }
        }
    }
    Ok(())
}

/// A finite band given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    n: usize,
    table: Vec<usize>,
    names: Vec<String>,
}

#[derive(Debug, Deserialize, Serialize)]
struct BandJson {
    n: usize,
    table: Vec<Vec<usize>>,
    #[serde(default)]
    names: Option<Vec<String>>,
}

impl Band {
    /// Builds a band from a table, checking every band axiom.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Band, BandError> {
        check_band(&table).map_err(BandError::NotABand)?;
        Ok(Self::from_checked(table))
    }

    fn from_checked(table: Vec<Vec<usize>>) -> Band {
        let n = table.len();
        Band { n, table: table.into_iter().flatten().collect(), names: (0..n).map(|i| i.to_string()).collect() }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n);
        self.names = names;
        self
    }

    /// Reads `{"n": .., "table": [[..]..], "names": [..]?}`.
    pub fn from_json(text: &str) -> Result<Band, BandError> {
        let raw: BandJson = serde_json::from_str(text).map_err(|e| BandError::Table(e.to_string()))?;
        if raw.table.len() != raw.n {
            return Err(BandError::Table(format!("n = {} but table has {} rows", raw.n, raw.table.len())));
        }
        let band = Band::from_table(raw.table)?;
        match raw.names {
            Some(names) if names.len() == band.n => Ok(band.with_names(names)),
            Some(names) => Err(BandError::Table(format!("{} names for {} elements", names.len(), band.n))),
            None => Ok(band),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BandJson { n: self.n, table: self.rows(), names: Some(self.names.clone()) }).expect("band serializes")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    /// Product of a nonempty sequence of elements.
    pub fn product(&self, xs: &[usize]) -> Option<usize> {
        let (&first, rest) = xs.split_first()?;
        Some(rest.iter().fold(first, |acc, &y| self.mul(acc, y)))
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    /// The rectangular band `m x n` with `(i,j)(k,l) = (i,l)`.
    pub fn rectangular(m: usize, n: usize) -> Band {
        let idx = |i: usize, j: usize| i * n + j;
        let mut t = vec![vec![0; m * n]; m * n];
        for i in 0..m {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..n {
                        t[idx(i, j)][idx(k, l)] = idx(i, l);
                    }
                }
            }
        }
        Self::from_checked(t)
    }

    /// Semilattice of a family of sets under intersection; the family must
    /// be closed under intersection.
    pub fn semilattice(family: &[BTreeSet<usize>]) -> Result<Band, BandError> {
        let mut t = vec![vec![0; family.len()]; family.len()];
        for (x, a) in family.iter().enumerate() {
            for (y, b) in family.iter().enumerate() {
                let meet: BTreeSet<usize> = a.intersection(b).copied().collect();
                t[x][y] = family
                    .iter()
                    .position(|s| *s == meet)
                    .ok_or_else(|| BandError::Table("family not closed under intersection".into()))?;
            }
        }
        Band::from_table(t)
    }

    pub fn direct_product(a: &Band, b: &Band) -> Band {
        let n = a.n * b.n;
        let t = (0..n).map(|x| (0..n).map(|y| a.mul(x / b.n, y / b.n) * b.n + b.mul(x % b.n, y % b.n)).collect()).collect();
        let names = (0..n).map(|x| format!("({},{})", a.name(x / b.n), b.name(x % b.n))).collect();
        Self::from_checked(t).with_names(names)
    }

    /// The subband generated by `gens`, together with the indices in `self`
    /// of its elements (sorted).
    pub fn generated_by(&self, gens: &[usize]) -> (Band, Vec<usize>) {
        let mut members: BTreeSet<usize> = gens.iter().copied().collect();
        let mut queue: VecDeque<usize> = members.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            let current: Vec<usize> = members.iter().copied().collect();
            for y in current {
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if members.insert(p) {
                        queue.push_back(p);
                    }
                }
            }
        }
        let elems: Vec<usize> = members.into_iter().collect();
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let t = elems.iter().map(|&x| elems.iter().map(|&y| pos[&self.mul(x, y)]).collect()).collect();
        let names = elems.iter().map(|&e| self.names[e].clone()).collect();
        (Self::from_checked(t).with_names(names), elems)
    }
}

// ---------------------------------------------------------------------------
// Index sets and B_G

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndexBase {
    Zero,
    Gen(usize),
    Infinity,
}

/// One of the symbols `0`, `a`, `inf` (possibly primed, except `inf`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSymbol {
    pub base: IndexBase,
    pub primed: bool,
}

/// `I = A_0 ∪ A_0'` and `J = A_0 ∪ {inf}` in the fixed order
/// `0, A, 0', A'` and `0, A, inf`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSets {
    pub rows: Vec<IndexSymbol>,
    pub cols: Vec<IndexSymbol>,
    gen_names: Vec<String>,
}

impl IndexSets {
    pub fn new(gen_names: Vec<String>) -> Self {
        let n = gen_names.len();
        let a0 = |primed: bool| {
            std::iter::once(IndexSymbol { base: IndexBase::Zero, primed })
                .chain((0..n).map(move |a| IndexSymbol { base: IndexBase::Gen(a), primed }))
        };
        let rows = a0(false).chain(a0(true)).collect();
        let cols = a0(false).chain(std::iter::once(IndexSymbol { base: IndexBase::Infinity, primed: false })).collect();
        IndexSets { rows, cols, gen_names }
    }

    pub fn num_gens(&self) -> usize {
        self.gen_names.len()
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn zero_row(&self) -> usize {
        0
    }

    pub fn zero_prime_row(&self) -> usize {
        self.num_gens() + 1
    }

    pub fn gen_row(&self, a: usize) -> usize {
        1 + a
    }

    pub fn gen_prime_row(&self, a: usize) -> usize {
        self.num_gens() + 2 + a
    }

    pub fn gen_col(&self, a: usize) -> usize {
        1 + a
    }

    pub fn infinity_col(&self) -> usize {
        self.num_gens() + 1
    }

    /// Position of `x ∈ A_0` (0 for the zero symbol) within `A_0`.
    pub fn a0_position(base: IndexBase) -> Option<usize> {
        match base {
            IndexBase::Zero => Some(0),
            IndexBase::Gen(a) => Some(a + 1),
            IndexBase::Infinity => None,
        }
    }

    pub fn is_primed_row(&self, i: usize) -> bool {
        self.rows[i].primed
    }

    pub fn symbol_label(&self, s: IndexSymbol) -> String {
        let base = match s.base {
            IndexBase::Zero => "0".to_string(),
            IndexBase::Gen(a) => self.gen_names[a].clone(),
            IndexBase::Infinity => "inf".to_string(),
        };
        if s.primed {
            format!("{base}'")
        } else {
            base
        }
    }

    pub fn row_label(&self, i: usize) -> String {
        self.symbol_label(self.rows[i])
    }

    pub fn col_label(&self, j: usize) -> String {
        self.symbol_label(self.cols[j])
    }

    pub fn row_labels(&self) -> Vec<String> {
        (0..self.rows.len()).map(|i| self.row_label(i)).collect()
    }

    pub fn col_labels(&self) -> Vec<String> {
        (0..self.cols.len()).map(|j| self.col_label(j)).collect()
    }

    pub fn parse_row(&self, label: &str) -> Option<usize> {
        (0..self.rows.len()).find(|&i| self.row_label(i) == label)
    }

    pub fn parse_col(&self, label: &str) -> Option<usize> {
        (0..self.cols.len()).find(|&j| self.col_label(j) == label)
    }
}

/// Which part of `B_G` an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ElementLabel {
    K { row: usize, col: usize },
    Z,
    G { gen: usize },
    Gbar { gen: usize },
    R { relation: usize, a: usize, b: usize, c: usize },
}

impl ElementLabel {
    pub fn is_k(&self) -> bool {
        matches!(self, ElementLabel::K { .. })
    }

    /// Rendering in the word syntax: `K(i,j)`, `L(Z)`, `L(G:a)`,
    /// `L(Gbar:a)`, `L(R:a,b,c)`.
    pub fn render(&self, idx: &IndexSets) -> String {
        let g = |a: usize| idx.gen_names()[a].clone();
        match *self {
            ElementLabel::K { row, col } => format!("K({},{})", idx.row_label(row), idx.col_label(col)),
            ElementLabel::Z => "L(Z)".into(),
            ElementLabel::G { gen } => format!("L(G:{})", g(gen)),
            ElementLabel::Gbar { gen } => format!("L(Gbar:{})", g(gen)),
            ElementLabel::R { a, b, c, .. } => format!("L(R:{},{},{})", g(a), g(b), g(c)),
        }
    }
}

/// The band `B_G = K ∪ L` together with its transformation realisation.
///
/// Elements are numbered with `K` first in row-major order over `I x J`,
/// then `L` as `Z`, `G(a)` for `a ∈ A`, `Gbar(a)` for `a ∈ A`, and one
/// `R(ρ)` per relation.
#[derive(Debug, Clone)]
pub struct BgBand {
    presentation: CayleyFormPresentation,
    index_sets: IndexSets,
    pairs: Vec<TransformationPair>,
    labels: Vec<ElementLabel>,
    band: Band,
}

/// `(2|A|+2)(|A|+2) + 1 + 2|A| + |R|`.
pub fn bg_size_formula(num_gens: usize, num_relations: usize) -> usize {
    (2 * num_gens + 2) * (num_gens + 2) + 1 + 2 * num_gens + num_relations
}

fn l_element(idx: &IndexSets, unprimed_image: usize, primed_image: usize, infinity_image: usize) -> TransformationPair {
    let n = idx.num_gens();
    let sigma: Vec<usize> = (0..2 * n + 2).map(|i| if i <= n { unprimed_image } else { primed_image }).collect();
    let tau: Vec<usize> = (0..n + 2).map(|j| if j == idx.infinity_col() { infinity_image } else { j }).collect();
    TransformationPair::new(Transformation::new(sigma), Transformation::new(tau))
}

/// Constructs `B_G` from a Cayley-form presentation. Duplicate relation
/// triples are removed first; any other violation is an error.
pub fn build_bg(p: &CayleyFormPresentation) -> Result<BgBand, BandError> {
    let violations: Vec<Violation> = p.validate().into_iter().filter(|v| !v.is_warning()).collect();
    if !violations.is_empty() {
        return Err(BandError::InvalidPresentation(violations));
    }
    let p = p.deduplicated();
    let idx = IndexSets::new(p.names());
    let n = idx.num_gens();
    let (rows, cols) = (idx.rows.len(), idx.cols.len());

    let mut pairs = Vec::new();
    let mut labels = Vec::new();
    for row in 0..rows {
        for col in 0..cols {
            pairs.push(TransformationPair::constant(rows, cols, row, col));
            labels.push(ElementLabel::K { row, col });
        }
    }
    let zero = idx.zero_row();
    let zero_p = idx.zero_prime_row();
    pairs.push(l_element(&idx, zero, zero_p, 0));
    labels.push(ElementLabel::Z);
    for a in 0..n {
        pairs.push(l_element(&idx, zero, idx.gen_prime_row(a), idx.gen_col(a)));
        labels.push(ElementLabel::G { gen: a });
    }
    for a in 0..n {
        pairs.push(l_element(&idx, idx.gen_row(a), idx.gen_prime_row(a), 0));
        labels.push(ElementLabel::Gbar { gen: a });
    }
    for (r, &CayleyRelation { a, b, c }) in p.relations.iter().enumerate() {
        pairs.push(l_element(&idx, idx.gen_row(b), idx.gen_prime_row(c), idx.gen_col(a)));
        labels.push(ElementLabel::R { relation: r, a, b, c });
    }

    let mut lookup: HashMap<TransformationPair, usize> = HashMap::new();
    for (i, pr) in pairs.iter().enumerate() {
        if let Some(&j) = lookup.get(pr) {
            return Err(BandError::CollapsedElements(labels[j].render(&idx), labels[i].render(&idx)));
        }
        lookup.insert(pr.clone(), i);
    }
    let expected = bg_size_formula(n, p.relations.len());
    if pairs.len() != expected {
        return Err(BandError::SizeFormula { actual: pairs.len(), expected });
    }

    let mut table = vec![vec![0; pairs.len()]; pairs.len()];
    for (x, px) in pairs.iter().enumerate() {
        for (y, py) in pairs.iter().enumerate() {
            let prod = compose_pairs(px, py)?;
            table[x][y] = *lookup.get(&prod).ok_or(BandError::NotABand(Counterexample::NotClosed { x, y }))?;
        }
    }
    for (x, row) in table.iter().enumerate() {
        if row[x] != x {
            return Err(BandError::NotABand(Counterexample::NotIdempotent { x }));
        }
    }
    let names = labels.iter().map(|l| l.render(&idx)).collect();
    let band = Band::from_checked(table).with_names(names);
    Ok(BgBand { presentation: p, index_sets: idx, pairs, labels, band })
}

impl BgBand {
    pub fn band(&self) -> &Band {
        &self.band
    }

    pub fn presentation(&self) -> &CayleyFormPresentation {
        &self.presentation
    }

    pub fn index_sets(&self) -> &IndexSets {
        &self.index_sets
    }

    pub fn pairs(&self) -> &[TransformationPair] {
        &self.pairs
    }

    pub fn labels(&self) -> &[ElementLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn k_shape(&self) -> (usize, usize) {
        (self.index_sets.rows.len(), self.index_sets.cols.len())
    }

    pub fn k_len(&self) -> usize {
        let (r, c) = self.k_shape();
        r * c
    }

    pub fn l_elements(&self) -> std::ops::Range<usize> {
        self.k_len()..self.len()
    }

    pub fn k_element(&self, row: usize, col: usize) -> usize {
        row * self.k_shape().1 + col
    }

    pub fn k_cell(&self, x: usize) -> Option<(usize, usize)> {
        match self.labels.get(x)? {
            ElementLabel::K { row, col } => Some((*row, *col)),
            _ => None,
        }
    }

    pub fn is_k(&self, x: usize) -> bool {
        x < self.k_len()
    }

    pub fn formula_size(&self) -> usize {
        bg_size_formula(self.index_sets.num_gens(), self.presentation.relations.len())
    }

    pub fn element_by_label(&self, label: &ElementLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Parses an element in the word syntax (`K(a',inf)`, `L(G:a)`, ...).
    pub fn parse_element(&self, text: &str) -> Option<usize> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        self.band.names().iter().position(|n| *n == t)
    }

    /// The grid of `K` with rows and columns in index-set order and the
    /// base `e_{0,0}` in the corner.
    pub fn k_grid(&self, green: &GreenStructure) -> Result<DClassGrid, BandError> {
        let base = self.k_element(0, 0);
        let d = green.d_class_of(base);
        let grid = dclass_grid(&self.band, green, d, base)?;
        debug_assert!((0..grid.nrows()).all(|r| (0..grid.ncols()).all(|c| grid.cell(r, c) == self.k_element(r, c))));
        Ok(grid.with_labels(self.index_sets.row_labels(), self.index_sets.col_labels()))
    }
}

// ---------------------------------------------------------------------------
// Green's relations

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreenStructure {
    r_class_of: Vec<usize>,
    l_class_of: Vec<usize>,
    d_class_of: Vec<usize>,
    pub r_classes: Vec<Vec<usize>>,
    pub l_classes: Vec<Vec<usize>>,
    pub d_classes: Vec<Vec<usize>>,
    /// `geq[a][b]` iff `D_a >= D_b` in the semilattice order.
    geq: Vec<Vec<bool>>,
}

fn classes_from(n: usize, related: impl Fn(usize, usize) -> bool) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let members: Vec<usize> = (x..n).filter(|&y| class_of[y] == usize::MAX && related(x, y)).collect();
        for &y in &members {
            class_of[y] = id;
        }
        classes.push(members);
    }
    (class_of, classes)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Green's relations of a band, via `x R y ⟺ xy = y ∧ yx = x` and
/// `x L y ⟺ xy = x ∧ yx = y`; D is the join of R and L.
pub fn green_classes(b: &Band) -> GreenStructure {
    let n = b.len();
    let (r_class_of, r_classes) = classes_from(n, |x, y| b.mul(x, y) == y && b.mul(y, x) == x);
    let (l_class_of, l_classes) = classes_from(n, |x, y| b.mul(x, y) == x && b.mul(y, x) == y);

    let mut parent: Vec<usize> = (0..n).collect();
    for classes in [&r_classes, &l_classes] {
        for c in classes {
            for &y in &c[1..] {
                let (ra, rb) = (find(&mut parent, c[0]), find(&mut parent, y));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let (d_class_of, d_classes) = classes_from(n, |x, y| roots[x] == roots[y]);

    let k = d_classes.len();
    let mut geq = vec![vec![false; k]; k];
    for a in 0..k {
        for bb in 0..k {
            let (x, y) = (d_classes[a][0], d_classes[bb][0]);
            geq[a][bb] = d_class_of[b.mul(x, y)] == bb && d_class_of[b.mul(y, x)] == bb;
        }
    }
    GreenStructure { r_class_of, l_class_of, d_class_of, r_classes, l_classes, d_classes, geq }
}

impl GreenStructure {
    pub fn r_class_of(&self, x: usize) -> usize {
        self.r_class_of[x]
    }

    pub fn l_class_of(&self, x: usize) -> usize {
        self.l_class_of[x]
    }

    pub fn d_class_of(&self, x: usize) -> usize {
        self.d_class_of[x]
    }

    pub fn num_d_classes(&self) -> usize {
        self.d_classes.len()
    }

    pub fn d_geq(&self, a: usize, b: usize) -> bool {
        self.geq[a][b]
    }

    pub fn d_strictly_above(&self, a: usize, b: usize) -> bool {
        a != b && self.geq[a][b]
    }

    /// R-classes contained in D-class `d`.
    pub fn r_classes_in(&self, d: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.d_classes[d].iter().map(|&x| self.r_class_of[x]).collect();
        set.into_iter().collect()
    }

    pub fn l_classes_in(&self, d: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.d_classes[d].iter().map(|&x| self.l_class_of[x]).collect();
        set.into_iter().collect()
    }

    /// D-classes with nothing strictly below them.
    pub fn minimal_d_classes(&self) -> Vec<usize> {
        (0..self.num_d_classes()).filter(|&a| !(0..self.num_d_classes()).any(|b| self.d_strictly_above(a, b))).collect()
    }
}

/// A D-class laid out as an `I x J` grid of idempotents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DClassGrid {
    pub d_class: usize,
    cells: Vec<Vec<usize>>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    #[serde(skip)]
    position: HashMap<usize, (usize, usize)>,
}

impl DClassGrid {
    pub fn nrows(&self) -> usize {
        self.cells.len()
    }

    pub fn ncols(&self) -> usize {
        self.cells.first().map_or(0, |r| r.len())
    }

    pub fn cell(&self, r: usize, c: usize) -> usize {
        self.cells[r][c]
    }

    pub fn position(&self, x: usize) -> Option<(usize, usize)> {
        self.position.get(&x).copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.position.contains_key(&x)
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Self {
        assert_eq!(rows.len(), self.nrows());
        assert_eq!(cols.len(), self.ncols());
        self.row_labels = rows;
        self.col_labels = cols;
        self
    }
}

/// Lays out D-class `d` as a grid with `base` at cell `(0, 0)`. The other
/// rows (R-classes) and columns (L-classes) follow in order of their least
/// element.
pub fn dclass_grid(b: &Band, green: &GreenStructure, d: usize, base: usize) -> Result<DClassGrid, BandError> {
    if base >= b.len() || green.d_class_of(base) != d {
        return Err(BandError::NotInClass(base, d));
    }
    let mut rows = green.r_classes_in(d);
    let mut cols = green.l_classes_in(d);
    rows.sort_by_key(|&r| (r != green.r_class_of(base), green.r_classes[r][0]));
    cols.sort_by_key(|&c| (c != green.l_class_of(base), green.l_classes[c][0]));

    let row_rep = |r: usize| if r == green.r_class_of(base) { base } else { green.r_classes[r][0] };
    let col_rep = |c: usize| if c == green.l_class_of(base) { base } else { green.l_classes[c][0] };
    let mut cells = vec![vec![0; cols.len()]; rows.len()];
    let mut position = HashMap::new();
    for (ri, &r) in rows.iter().enumerate() {
        for (ci, &c) in cols.iter().enumerate() {
            let x = b.mul(row_rep(r), col_rep(c));
            if green.r_class_of(x) != r || green.l_class_of(x) != c {
                return Err(BandError::NotABand(Counterexample::NotAssociative { x: row_rep(r), y: col_rep(c), z: x }));
            }
            cells[ri][ci] = x;
            position.insert(x, (ri, ci));
        }
    }
    let row_labels = (0..rows.len()).map(|i| i.to_string()).collect();
    let col_labels = (0..cols.len()).map(|j| j.to_string()).collect();
    Ok(DClassGrid { d_class: d, cells, row_labels, col_labels, position })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q8() -> CayleyFormPresentation {
        CayleyFormPresentation::from_names(&["a", "b", "c"], &[("a", "b", "c"), ("b", "c", "a"), ("c", "a", "b")]).unwrap()
    }

    fn trivial() -> CayleyFormPresentation {
        CayleyFormPresentation::from_names(&["u"], &[("u", "u", "u")]).unwrap()
    }

    #[test]
    fn rectangular_law_for_constants() {
        let x = TransformationPair::constant(4, 3, 1, 2);
        let y = TransformationPair::constant(4, 3, 3, 0);
        assert_eq!(compose_pairs(&x, &y).unwrap(), TransformationPair::constant(4, 3, 1, 0));
    }

    #[test]
    fn mismatched_degrees_rejected() {
        let x = TransformationPair::constant(4, 3, 1, 2);
        let y = TransformationPair::constant(3, 3, 1, 2);
        assert!(matches!(compose_pairs(&x, &y), Err(BandError::MismatchedIndexSets { .. })));
    }

    #[test]
    fn zero_element_acts_on_k() {
        let bg = build_bg(&q8()).unwrap();
        let idx = bg.index_sets();
        let z = bg.element_by_label(&ElementLabel::Z).unwrap();
        let (a, b) = (idx.gen_row(0), idx.gen_col(1));
        let e_ab = bg.k_element(a, b);
        // left action sends A_0 to 0
        assert_eq!(bg.band().mul(z, e_ab), bg.k_element(0, b));
        // right action fixes A_0
        assert_eq!(bg.band().mul(e_ab, z), e_ab);
        // pointwise composition agrees with the table
        let prod = compose_pairs(&bg.pairs()[e_ab], &bg.pairs()[z]).unwrap();
        assert_eq!(prod, bg.pairs()[e_ab]);
    }

    #[test]
    fn sizes_match_formula() {
        let bg = build_bg(&q8()).unwrap();
        assert_eq!(bg.len(), 50);
        assert_eq!(bg.k_shape(), (8, 5));
        assert_eq!(bg.l_elements().len(), 10);

        let bg = build_bg(&trivial()).unwrap();
        assert_eq!(bg.len(), 16);
        assert_eq!(bg.k_shape(), (4, 3));
        assert_eq!(bg.l_elements().len(), 4);

        let free = CayleyFormPresentation::from_names::<&str>(&["a", "b"], &[]).unwrap();
        let bg = build_bg(&free).unwrap();
        assert_eq!(bg.len(), 29);
        assert!(!bg.labels().iter().any(|l| matches!(l, ElementLabel::R { .. })));
    }

    #[test]
    fn l_elements_satisfy_kernel_and_image_conditions() {
        let bg = build_bg(&q8()).unwrap();
        let idx = bg.index_sets();
        let n = idx.num_gens();
        for x in bg.l_elements() {
            let p = &bg.pairs()[x];
            assert!(p.is_idempotent());
            assert_eq!(p.sigma.kernel(), vec![(0..=n).collect::<Vec<_>>(), (n + 1..2 * n + 2).collect()]);
            assert_eq!(p.tau.image(), (0..=n).collect());
            assert!((0..=n).all(|j| p.tau.apply(j) == j));
        }
    }

    #[test]
    fn multiplication_laws() {
        let bg = build_bg(&q8()).unwrap();
        let b = bg.band();
        for e in bg.l_elements() {
            for f in bg.l_elements() {
                assert_eq!(b.mul(e, f), e);
            }
        }
        for x in 0..bg.len() {
            assert_eq!(b.mul(x, x), x);
            for k in 0..bg.k_len() {
                assert!(bg.is_k(b.mul(x, k)) && bg.is_k(b.mul(k, x)));
            }
        }
        assert!(check_pair_band(bg.pairs()).is_ok());
    }

    #[test]
    fn check_band_finds_counterexamples() {
        let mut pairs: Vec<TransformationPair> =
            (0..2).flat_map(|i| (0..2).map(move |j| TransformationPair::constant(2, 2, i, j))).collect();
        assert!(check_pair_band(&pairs).is_ok());
        pairs.push(TransformationPair::new(Transformation::new(vec![1, 0]), Transformation::identity(2)));
        assert_eq!(check_pair_band(&pairs), Err(Counterexample::NotIdempotent { x: 4 }));

        assert!(check_band(&[vec![0]]).is_ok());
        // idempotent, closed, not associative
        let t = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert!(matches!(check_band(&t), Err(Counterexample::NotAssociative { .. })));
        assert_eq!(check_band(&[vec![0, 5], vec![0, 1]]), Err(Counterexample::NotClosed { x: 0, y: 1 }));
    }

    #[test]
    fn green_structure_of_bg() {
        let bg = build_bg(&q8()).unwrap();
        let g = green_classes(bg.band());
        assert_eq!(g.num_d_classes(), 2);
        let k = g.d_class_of(0);
        let l = g.d_class_of(bg.k_len());
        assert_eq!(g.d_classes[k].len(), 40);
        assert_eq!(g.d_classes[l].len(), 10);
        assert_eq!(g.r_classes_in(k).len(), 8);
        assert_eq!(g.l_classes_in(k).len(), 5);
        assert_eq!(g.r_classes_in(l).len(), 10);
        assert_eq!(g.l_classes_in(l).len(), 1);
        assert!(g.d_strictly_above(l, k));
        assert!(!g.d_geq(k, l));
    }

    #[test]
    fn one_element_band() {
        let b = Band::from_table(vec![vec![0]]).unwrap();
        let g = green_classes(&b);
        assert_eq!(g.num_d_classes(), 1);
        assert!(g.d_geq(0, 0));
        assert!(!g.d_strictly_above(0, 0));
    }

    #[test]
    fn k_grid_layout_and_rectangular_law() {
        let bg = build_bg(&q8()).unwrap();
        let green = green_classes(bg.band());
        let grid = bg.k_grid(&green).unwrap();
        assert_eq!((grid.nrows(), grid.ncols()), (8, 5));
        assert_eq!(grid.cell(0, 0), bg.k_element(0, 0));
        assert_eq!(grid.row_labels, vec!["0", "a", "b", "c", "0'", "a'", "b'", "c'"]);
        assert_eq!(grid.col_labels, vec!["0", "a", "b", "c", "inf"]);
        let b = bg.band();
        for i in 0..8 {
            for j in 0..5 {
                for k in 0..8 {
                    for l in 0..5 {
                        assert_eq!(b.mul(grid.cell(i, j), grid.cell(k, l)), grid.cell(i, l));
                    }
                }
            }
        }
        let l = green.d_class_of(bg.k_len());
        let lgrid = dclass_grid(b, &green, l, bg.k_len() + 3).unwrap();
        assert_eq!(lgrid.ncols(), 1);
        assert_eq!(lgrid.nrows(), 10);
        assert_eq!(lgrid.cell(0, 0), bg.k_len() + 3);
        assert!(dclass_grid(b, &green, l, 0).is_err());
    }

    #[test]
    fn constructed_bands() {
        let r = Band::rectangular(2, 3);
        assert_eq!(green_classes(&r).num_d_classes(), 1);
        let family: Vec<BTreeSet<usize>> = vec![BTreeSet::new(), [0].into(), [1].into(), [0, 1].into()];
        let s = Band::semilattice(&family).unwrap();
        assert_eq!(green_classes(&s).num_d_classes(), 4);
        let p = Band::direct_product(&r, &s);
        assert!(check_band(&p.rows()).is_ok());
        assert_eq!(green_classes(&p).num_d_classes(), 4);
        let (sub, elems) = p.generated_by(&[0, 7]);
        assert!(check_band(&sub.rows()).is_ok());
        assert_eq!(sub.len(), elems.len());
    }

    #[test]
    fn json_roundtrip() {
        let r = Band::rectangular(2, 2);
        let text = r.to_json().to_string();
        assert_eq!(Band::from_json(&text).unwrap(), r);
        assert!(Band::from_json(r#"{"n":2,"table":[[0,0],[1,0]]}"#).is_err());
    }
}
