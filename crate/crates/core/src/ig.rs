//! Presentations attached to the free idempotent generated semigroup
//! `IG(E)` of a band: its defining semigroup presentation over basic pairs,
//! and the group presentation of the maximal subgroup at a grid cell.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::band::{Band, BgBand, DClassGrid, ElementLabel};
use crate::presentations::{GenSymbol, GroupPresentation, Letter, Relation, Word};
use crate::squares::{SingularSquare, SquareKind};

/// `{e, f}` is basic iff `{ef, fe} ∩ {e, f}` is nonempty.
pub fn is_basic_pair(b: &Band, e: usize, f: usize) -> bool {
    let (ef, fe) = (b.mul(e, f), b.mul(f, e));
    ef == e || ef == f || fe == e || fe == f
}

/// A semigroup presentation whose relations read `e · f = g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<(usize, usize, usize)>,
}

impl SemigroupPresentation {
    pub fn to_text(&self) -> String {
        let mut out = format!("generators {}\n", self.generators.join(" "));
        for &(e, f, g) in &self.relations {
            out.push_str(&format!("{} . {} = {}\n", self.generators[e], self.generators[f], self.generators[g]));
        }
        out
    }
}

/// `IG(E) = <E | e·f = ef for every ordered basic pair (e, f)>`.
pub fn ig_presentation(b: &Band) -> SemigroupPresentation {
    let mut relations = Vec::new();
    let mut seen = HashSet::new();
    for e in 0..b.len() {
        for f in 0..b.len() {
            if is_basic_pair(b, e, f) && seen.insert((e, f)) {
                relations.push((e, f, b.mul(e, f)));
            }
        }
    }
    SemigroupPresentation { generators: b.names().to_vec(), relations }
}

/// The generator `f_ij` for grid cell `(row, col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FGen {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum RelationSource {
    /// `f_{i,base col} = 1`.
    BaseColumn { row: usize },
    /// `f_{base row,j} = 1`.
    BaseRow { col: usize },
    /// `f_ij^-1 f_il = f_kj^-1 f_kl` for a singular square.
    Square { rows: (usize, usize), cols: (usize, usize), kinds: Vec<SquareKind>, witnesses: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IgRelation {
    pub lhs: Word,
    pub rhs: Word,
    pub source: RelationSource,
}

/// `B_G`-specific data needed to replay the proof's elimination order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BgContext {
    pub gen_names: Vec<String>,
    pub labels: Vec<ElementLabel>,
}

/// Presentation of the maximal subgroup at a base cell: generators `f_ij`
/// numbered row-major, relations from the base row/column and from
/// singular squares.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IgPresentation {
    pub nrows: usize,
    pub ncols: usize,
    pub base: (usize, usize),
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub generators: Vec<FGen>,
    pub relations: Vec<IgRelation>,
    pub bg: Option<BgContext>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IgError {
    #[error("base cell ({0}, {1}) lies outside the grid")]
    BaseOutsideGrid(usize, usize),
    #[error("square ({0}, {1}; {2}, {3}) lies outside the grid")]
    SquareOutsideGrid(usize, usize, usize, usize),
}

fn safe_label(label: &str) -> String {
    label.replace('\'', "_p")
}

impl IgPresentation {
    pub fn gen_index(&self, row: usize, col: usize) -> usize {
        row * self.ncols + col
    }

    pub fn gen_cell(&self, g: usize) -> (usize, usize) {
        (g / self.ncols, g % self.ncols)
    }

    /// `f(row,col)` using the grid labels.
    pub fn display_name(&self, g: usize) -> String {
        let (r, c) = self.gen_cell(g);
        format!("f({},{})", self.row_labels[r], self.col_labels[c])
    }

    pub fn display_names(&self) -> Vec<String> {
        (0..self.generators.len()).map(|g| self.display_name(g)).collect()
    }

    /// Names valid in the presentation grammar (`f_0_p_a` for `f(0',a)`),
    /// made unique by appending underscores.
    pub fn grammar_names(&self) -> Vec<String> {
        let mut used = HashSet::new();
        (0..self.generators.len())
            .map(|g| {
                let (r, c) = self.gen_cell(g);
                let mut name = format!("f_{}_{}", safe_label(&self.row_labels[r]), safe_label(&self.col_labels[c]));
                while !used.insert(name.clone()) {
                    name.push('_');
                }
                name
            })
            .collect()
    }

    pub fn line1_count(&self) -> usize {
        self.relations.iter().filter(|r| !matches!(r.source, RelationSource::Square { .. })).count()
    }

    pub fn line2_count(&self) -> usize {
        self.relations.len() - self.line1_count()
    }

    pub fn to_group_presentation(&self) -> GroupPresentation {
        GroupPresentation {
            generators: self.grammar_names().into_iter().map(GenSymbol::user).collect(),
            relations: self.relations.iter().map(|r| Relation::new(r.lhs.clone(), r.rhs.clone())).collect(),
        }
    }
}

/// Builds the maximal-subgroup presentation at `base` from the grid and
/// its singular squares. The base row and column play the role of the
/// distinguished index `1`. Square relations are stored as
/// `f_ij^-1 f_il = f_kj^-1 f_kl` and deduplicated up to cyclic permutation
/// and inversion of the relator.
pub fn maximal_subgroup_presentation(
    grid: &DClassGrid,
    squares: &[SingularSquare],
    base: (usize, usize),
) -> Result<IgPresentation, IgError> {
    let (nrows, ncols) = (grid.nrows(), grid.ncols());
    if base.0 >= nrows || base.1 >= ncols {
        return Err(IgError::BaseOutsideGrid(base.0, base.1));
    }
    let g = |r: usize, c: usize| r * ncols + c;
    let generators = (0..nrows).flat_map(|row| (0..ncols).map(move |col| FGen { row, col })).collect();

    let mut relations = Vec::new();
    let mut trivial = HashSet::new();
    for row in 0..nrows {
        if trivial.insert(g(row, base.1)) {
            relations.push(IgRelation { lhs: Word::gen(g(row, base.1)), rhs: Word::empty(), source: RelationSource::BaseColumn { row } });
        }
    }
    for col in 0..ncols {
        if trivial.insert(g(base.0, col)) {
            relations.push(IgRelation { lhs: Word::gen(g(base.0, col)), rhs: Word::empty(), source: RelationSource::BaseRow { col } });
        }
    }

    let mut by_key: HashMap<Word, usize> = HashMap::new();
    for s in squares {
        if s.k >= nrows || s.l >= ncols {
            return Err(IgError::SquareOutsideGrid(s.i, s.k, s.j, s.l));
        }
        let lhs = Word::from_letters(vec![Letter::neg(g(s.i, s.j)), Letter::pos(g(s.i, s.l))]);
        let rhs = Word::from_letters(vec![Letter::neg(g(s.k, s.j)), Letter::pos(g(s.k, s.l))]);
        let key = lhs.concat(&rhs.inverse()).relator_key();
        match by_key.get(&key) {
            Some(&idx) => {
                if let RelationSource::Square { kinds, witnesses, .. } = &mut relations[idx].source {
                    if !kinds.contains(&s.kind) {
                        kinds.push(s.kind);
                    }
                    for w in &s.witnesses {
                        if !witnesses.contains(w) {
                            witnesses.push(*w);
                        }
                    }
                    witnesses.sort_unstable();
                }
            }
            None => {
                by_key.insert(key, relations.len());
                relations.push(IgRelation {
                    lhs,
                    rhs,
                    source: RelationSource::Square {
                        rows: (s.i, s.k),
                        cols: (s.j, s.l),
                        kinds: vec![s.kind],
                        witnesses: s.witnesses.clone(),
                    },
                });
            }
        }
    }
    Ok(IgPresentation {
        nrows,
        ncols,
        base,
        row_labels: grid.row_labels.clone(),
        col_labels: grid.col_labels.clone(),
        generators,
        relations,
        bg: None,
    })
}

impl BgBand {
    /// The maximal-subgroup presentation at `e_{0,0}` with the `B_G`
    /// context attached.
    pub fn maximal_subgroup_presentation(&self, grid: &DClassGrid, squares: &[SingularSquare]) -> Result<IgPresentation, IgError> {
        let mut p = maximal_subgroup_presentation(grid, squares, (0, 0))?;
        p.bg = Some(BgContext { gen_names: self.index_sets().gen_names().to_vec(), labels: self.labels().to_vec() });
        Ok(p)
    }
}
