//! The structure of `IG(B_G)`: a left-zero class `Lbar` over the top
//! elements plus a completely simple ideal `Kbar`, realised as a Rees
//! matrix semigroup over `G` with sandwich entries `p_{j,i} = a_ij^-1`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::band::{Band, BgBand, DClassGrid};
use crate::group::GroupOracle;
use crate::presentations::Word;
use crate::tietze::GridTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReesError {
    #[error("grid table is {0}x{1} but the band grid is {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("sandwich entry p({col},{row}) is not the identity")]
    NotNormalized { row: usize, col: usize },
    #[error("cell ({row},{col}) does not embed as an idempotent")]
    NotIdempotent { row: usize, col: usize },
    #[error("element {0} is not in the band")]
    UnknownElement(usize),
    #[error("empty word")]
    EmptyWord,
    #[error("cannot parse letter '{0}'")]
    BadLetter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IgNormalForm {
    Lbar { element: usize },
    Kbar { row: usize, group: Word, col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IgEquality {
    Equal,
    NotEqual,
    /// Both words lie in the same cell of `Kbar`; equality holds iff
    /// `lhs = rhs` in `G`.
    ReducesTo {
        lhs: Word,
        rhs: Word,
    },
}

#[derive(Debug, Clone)]
pub struct ReesModel {
    band: Band,
    grid: DClassGrid,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// `entries[i][j] = a_ij`, canonical.
    pub entries: Vec<Vec<Word>>,
    /// `sandwich[j][i] = p_{j,i} = a_ij^-1`, canonical.
    pub sandwich: Vec<Vec<Word>>,
    pub group: GroupOracle,
}

/// Builds the model and checks normalization and idempotency of every
/// embedded cell.
pub fn build_rees_model(t: &GridTable, o: GroupOracle, bg: &BgBand, grid: &DClassGrid) -> Result<ReesModel, ReesError> {
    let (nr, nc) = (t.entries.len(), t.entries.first().map_or(0, |r| r.len()));
    if (nr, nc) != (grid.nrows(), grid.ncols()) {
        return Err(ReesError::ShapeMismatch(nr, nc, grid.nrows(), grid.ncols()));
    }
    let entries: Vec<Vec<Word>> = t.entries.iter().map(|row| row.iter().map(|w| o.canonical(w)).collect()).collect();
    let sandwich = (0..nc).map(|j| (0..nr).map(|i| o.inverse(&entries[i][j])).collect()).collect();
    let m = ReesModel {
        band: bg.band().clone(),
        grid: grid.clone(),
        row_labels: t.row_labels.clone(),
        col_labels: t.col_labels.clone(),
        entries,
        sandwich,
        group: o,
    };
    for i in 0..nr {
        if m.group.is_identity(&m.sandwich[0][i]) != Some(true) {
            return Err(ReesError::NotNormalized { row: i, col: 0 });
        }
    }
    for j in 0..nc {
        if m.group.is_identity(&m.sandwich[j][0]) != Some(true) {
            return Err(ReesError::NotNormalized { row: 0, col: j });
        }
    }
    for i in 0..nr {
        for j in 0..nc {
            let a = &m.entries[i][j];
            let aa = m.group.multiply(&m.group.multiply(a, &m.sandwich[j][i]), a);
            if m.group.is_identity(&aa.concat(&a.inverse())) != Some(true) {
                return Err(ReesError::NotIdempotent { row: i, col: j });
            }
        }
    }
    Ok(m)
}

impl ReesModel {
    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    pub fn ncols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    pub fn band(&self) -> &Band {
        &self.band
    }

    pub fn grid(&self) -> &DClassGrid {
        &self.grid
    }

    /// `(i,g,j)(k,h,l) = (i, g p_{j,k} h, l)`; `Lbar` values are left zeros.
    pub fn multiply(&self, x: &IgNormalForm, y: &IgNormalForm) -> IgNormalForm {
        match (x, y) {
            (IgNormalForm::Kbar { row, group: g, col: j }, IgNormalForm::Kbar { row: k, group: h, col }) => {
                let gp = self.group.multiply(g, &self.sandwich[*j][*k]);
                IgNormalForm::Kbar { row: *row, group: self.group.multiply(&gp, h), col: *col }
            }
            (IgNormalForm::Lbar { .. }, IgNormalForm::Lbar { .. }) => x.clone(),
            _ => panic!("mixed Lbar/Kbar products need the band; use ig_normal_form"),
        }
    }

    fn iota(&self, i: usize, j: usize) -> IgNormalForm {
        IgNormalForm::Kbar { row: i, group: self.entries[i][j].clone(), col: j }
    }

    /// Cells `(i, j')` with `e_{ij'} e = e_{ij'}`, in column order: the
    /// witnesses `g` for rewriting `e f` with `f` in row `i`.
    pub fn left_witnesses(&self, e: usize, i: usize) -> Vec<usize> {
        (0..self.ncols()).filter(|&c| self.band.mul(self.grid.cell(i, c), e) == self.grid.cell(i, c)).collect()
    }

    /// Rows `i'` with `e e_{i'j} = e_{i'j}`, in row order.
    pub fn right_witnesses(&self, e: usize, j: usize) -> Vec<usize> {
        (0..self.nrows()).filter(|&r| self.band.mul(e, self.grid.cell(r, j)) == self.grid.cell(r, j)).collect()
    }

    /// `e f = e g f = h f` with `g = e_{i,c}`, `h = e g`.
    fn left_rewrite(&self, e: usize, f: (usize, usize), c: usize) -> IgNormalForm {
        let h = self.band.mul(e, self.grid.cell(f.0, c));
        let (hi, hj) = self.grid.position(h).expect("L acts on K");
        self.multiply(&self.iota(hi, hj), &self.iota(f.0, f.1))
    }

    /// `x e = x g e = x h` with `g = e_{r,j}` for `x` in column `j`,
    /// `h = g e`.
    fn right_rewrite(&self, x: &IgNormalForm, e: usize, r: usize) -> IgNormalForm {
        let IgNormalForm::Kbar { col, .. } = x else { return x.clone() };
        let h = self.band.mul(self.grid.cell(r, *col), e);
        let (hi, hj) = self.grid.position(h).expect("L acts on K");
        self.multiply(x, &self.iota(hi, hj))
    }

    /// `Lbar(e)` for `e` above `K`, `Kbar(i, a_ij, j)` for `e = e_ij`.
    pub fn embed_idempotent(&self, e: usize) -> Result<IgNormalForm, ReesError> {
        if e >= self.band.len() {
            return Err(ReesError::UnknownElement(e));
        }
        Ok(match self.grid.position(e) {
            Some((i, j)) => self.iota(i, j),
            None => IgNormalForm::Lbar { element: e },
        })
    }

    /// Normal form of a product of band elements in `IG(B_G)`. Witnesses
    /// for the rewrites are chosen by `pick` from the candidate lists.
    fn normal_form_by(&self, w: &[usize], pick: &dyn Fn(&[usize]) -> usize) -> Result<IgNormalForm, ReesError> {
        let (&first, _) = w.split_first().ok_or(ReesError::EmptyWord)?;
        if let Some(&bad) = w.iter().find(|&&x| x >= self.band.len()) {
            return Err(ReesError::UnknownElement(bad));
        }
        let Some(p) = w.iter().position(|&x| self.grid.contains(x)) else {
            return Ok(IgNormalForm::Lbar { element: first });
        };
        let f = self.grid.position(w[p]).expect("K letter");
        let mut acc = if p == 0 {
            self.iota(f.0, f.1)
        } else {
            // the L prefix is left zero, so it collapses to its first letter
            let c = pick(&self.left_witnesses(first, f.0));
            self.left_rewrite(first, f, c)
        };
        for &x in &w[p + 1..] {
            acc = match self.grid.position(x) {
                Some((i, j)) => self.multiply(&acc, &self.iota(i, j)),
                None => {
                    let IgNormalForm::Kbar { col, .. } = &acc else { unreachable!() };
                    let r = pick(&self.right_witnesses(x, *col));
                    self.right_rewrite(&acc, x, r)
                }
            };
        }
        Ok(acc)
    }

    /// Normal form with the smallest witness in index order.
    pub fn ig_normal_form(&self, w: &[usize]) -> Result<IgNormalForm, ReesError> {
        self.normal_form_by(w, &|c| c[0])
    }

    /// All normal forms obtainable from different witness choices (the
    /// `k`-th candidate, clamped, for every `k`). They all coincide.
    pub fn normal_forms_all_witnesses(&self, w: &[usize]) -> Result<Vec<IgNormalForm>, ReesError> {
        let width = self.nrows().max(self.ncols());
        (0..width).map(|k| self.normal_form_by(w, &move |c: &[usize]| c[k.min(c.len() - 1)])).collect()
    }

    pub fn ig_equal(&self, w1: &[usize], w2: &[usize]) -> Result<IgEquality, ReesError> {
        let (x, y) = (self.ig_normal_form(w1)?, self.ig_normal_form(w2)?);
        Ok(match (&x, &y) {
            (IgNormalForm::Lbar { element: a }, IgNormalForm::Lbar { element: b }) => {
                if a == b {
                    IgEquality::Equal
                } else {
                    IgEquality::NotEqual
                }
            }
            (IgNormalForm::Kbar { row: i, group: g, col: j }, IgNormalForm::Kbar { row: k, group: h, col: l }) => {
                if (i, j) != (k, l) {
                    IgEquality::NotEqual
                } else if g == h {
                    IgEquality::Equal
                } else if self.group.is_finite() {
                    IgEquality::NotEqual
                } else {
                    IgEquality::ReducesTo { lhs: g.clone(), rhs: h.clone() }
                }
            }
            _ => IgEquality::NotEqual,
        })
    }

    /// The band element a normal form projects to.
    pub fn project(&self, x: &IgNormalForm) -> usize {
        match x {
            IgNormalForm::Lbar { element } => *element,
            IgNormalForm::Kbar { row, col, .. } => self.grid.cell(*row, *col),
        }
    }

    /// The H-class `{(i, g, j)}` in finite mode.
    pub fn h_class(&self, i: usize, j: usize) -> Option<Vec<IgNormalForm>> {
        Some(self.group.elements()?.into_iter().map(|g| IgNormalForm::Kbar { row: i, group: g, col: j }).collect())
    }

    pub fn render(&self, x: &IgNormalForm) -> String {
        NormalFormDisplay { model: self, form: x }.to_string()
    }

    pub fn render_equality(&self, e: &IgEquality) -> String {
        let names = self.group.generators();
        match e {
            IgEquality::Equal => "equal".to_string(),
            IgEquality::NotEqual => "not-equal".to_string(),
            IgEquality::ReducesTo { lhs, rhs } => format!("reduces-to {} =? {}", lhs.render(names), rhs.render(names)),
        }
    }
}

struct NormalFormDisplay<'a> {
    model: &'a ReesModel,
    form: &'a IgNormalForm,
}

impl fmt::Display for NormalFormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.model;
        match self.form {
            IgNormalForm::Lbar { element } => write!(f, "Lbar({})", m.band.name(*element)),
            IgNormalForm::Kbar { row, group, col } => {
                write!(f, "Kbar({}, {}, {})", m.row_labels[*row], group.render(m.group.generators()), m.col_labels[*col])
            }
        }
    }
}

/// Splits a word like `K(0,a) K(a',inf)` or `L(Z)*K(0,0)` into band
/// elements.
pub fn parse_band_word(bg: &BgBand, text: &str) -> Result<Vec<usize>, ReesError> {
    let mut letters = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            c if depth == 0 && (c.is_whitespace() || c == '*' || c == '.') => {
                if !cur.is_empty() {
                    letters.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        letters.push(cur);
    }
    if letters.is_empty() {
        return Err(ReesError::EmptyWord);
    }
    letters.iter().map(|l| bg.parse_element(l).ok_or_else(|| ReesError::BadLetter(l.clone()))).collect()
}
