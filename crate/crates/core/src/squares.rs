//! Action maps of elements above a D-class and singular squares.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::band::{Band, DClassGrid, GreenStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SquareError {
    #[error("element {0} is not strictly above the grid's D-class")]
    NotAbove(usize),
    #[error("element {f} acts inconsistently on the grid at cell ({row}, {col})")]
    Inconsistent { f: usize, row: usize, col: usize },
    #[error("degenerate square: rows ({0}, {1}), columns ({2}, {3})")]
    Degenerate(usize, usize, usize, usize),
    #[error("index out of range for the grid")]
    OutOfRange,
}

/// The maps induced by `f` on the rows and columns of a grid:
/// `f·e_ij = e_{σ(i),j}` and `e_ij·f = e_{i,(j)τ}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionMaps {
    pub witness: usize,
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SquareKind {
    LeftRight,
    UpDown,
}

/// A singular square `(i,k;j,l)` with `i < k`, `j < l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularSquare {
    pub i: usize,
    pub k: usize,
    pub j: usize,
    pub l: usize,
    pub kind: SquareKind,
    pub witnesses: Vec<usize>,
}

impl SingularSquare {
    pub fn rows(&self) -> (usize, usize) {
        (self.i, self.k)
    }

    pub fn cols(&self) -> (usize, usize) {
        (self.j, self.l)
    }
}

pub fn action_maps(b: &Band, green: &GreenStructure, f: usize, grid: &DClassGrid) -> Result<ActionMaps, SquareError> {
    if !green.d_strictly_above(green.d_class_of(f), grid.d_class) {
        return Err(SquareError::NotAbove(f));
    }
    let (nr, nc) = (grid.nrows(), grid.ncols());
    let mut sigma = vec![0; nr];
    for (i, s) in sigma.iter_mut().enumerate() {
        let (r, c) = grid.position(b.mul(f, grid.cell(i, 0))).ok_or(SquareError::NotAbove(f))?;
        if c != 0 {
            return Err(SquareError::Inconsistent { f, row: i, col: 0 });
        }
        *s = r;
        for j in 1..nc {
            if b.mul(f, grid.cell(i, j)) != grid.cell(r, j) {
                return Err(SquareError::Inconsistent { f, row: i, col: j });
            }
        }
    }
    let mut tau = vec![0; nc];
    for (j, t) in tau.iter_mut().enumerate() {
        let (r, c) = grid.position(b.mul(grid.cell(0, j), f)).ok_or(SquareError::NotAbove(f))?;
        if r != 0 {
            return Err(SquareError::Inconsistent { f, row: 0, col: j });
        }
        *t = c;
        for i in 1..nr {
            if b.mul(grid.cell(i, j), f) != grid.cell(i, c) {
                return Err(SquareError::Inconsistent { f, row: i, col: j });
            }
        }
    }
    let idem = |m: &[usize]| m.iter().all(|&x| m[x] == x);
    if !idem(&sigma) || !idem(&tau) {
        return Err(SquareError::Inconsistent { f, row: 0, col: 0 });
    }
    Ok(ActionMaps { witness: f, sigma, tau })
}

/// Condition (a): `σ(i)=i`, `σ(k)=k`, `(j)τ=(l)τ ∈ {j,l}`.
fn left_right(sigma_i: usize, sigma_k: usize, tau_j: usize, tau_l: usize, (i, k, j, l): (usize, usize, usize, usize)) -> bool {
    sigma_i == i && sigma_k == k && tau_j == tau_l && (tau_j == j || tau_j == l)
}

/// Condition (b): `σ(i)=σ(k) ∈ {i,k}`, `(j)τ=j`, `(l)τ=l`.
fn up_down(sigma_i: usize, sigma_k: usize, tau_j: usize, tau_l: usize, (i, k, j, l): (usize, usize, usize, usize)) -> bool {
    sigma_i == sigma_k && (sigma_i == i || sigma_i == k) && tau_j == j && tau_l == l
}

/// All singular squares of the grid, witnessed by elements strictly above
/// its D-class. A quadruple certified in both ways is reported once per
/// kind. Output is sorted by `(i, k, j, l, kind)`.
pub fn singular_squares(b: &Band, green: &GreenStructure, grid: &DClassGrid) -> Result<Vec<SingularSquare>, SquareError> {
    let (nr, nc) = (grid.nrows(), grid.ncols());
    let mut found: BTreeMap<(usize, usize, usize, usize, SquareKind), Vec<usize>> = BTreeMap::new();
    for f in 0..b.len() {
        if !green.d_strictly_above(green.d_class_of(f), grid.d_class) {
            continue;
        }
        let m = action_maps(b, green, f, grid)?;
        for i in 0..nr {
            for k in i + 1..nr {
                let (si, sk) = (m.sigma[i], m.sigma[k]);
                let lr_rows = si == i && sk == k;
                let ud_rows = si == sk && (si == i || si == k);
                if !lr_rows && !ud_rows {
                    continue;
                }
                for j in 0..nc {
                    for l in j + 1..nc {
                        let q = (i, k, j, l);
                        let (tj, tl) = (m.tau[j], m.tau[l]);
                        if left_right(si, sk, tj, tl, q) {
                            found.entry((i, k, j, l, SquareKind::LeftRight)).or_default().push(f);
                        }
                        if up_down(si, sk, tj, tl, q) {
                            found.entry((i, k, j, l, SquareKind::UpDown)).or_default().push(f);
                        }
                    }
                }
            }
        }
    }
    Ok(found.into_iter().map(|((i, k, j, l, kind), witnesses)| SingularSquare { i, k, j, l, kind, witnesses }).collect())
}

/// Brute-force test of whether `(i,k;j,l)` is singular. Recomputes every
/// action value from raw products and decides "strictly above" from the
/// products with the grid's base cell, without using Green's relations.
pub fn is_singular_square_oracle(b: &Band, grid: &DClassGrid, (i, k, j, l): (usize, usize, usize, usize)) -> Result<bool, SquareError> {
    if i == k || j == l {
        return Err(SquareError::Degenerate(i, k, j, l));
    }
    if i.max(k) >= grid.nrows() || j.max(l) >= grid.ncols() {
        return Err(SquareError::OutOfRange);
    }
    let base = grid.cell(0, 0);
    let row_of = |x: usize| grid.position(x).map(|p| p.0);
    let col_of = |x: usize| grid.position(x).map(|p| p.1);
    for f in 0..b.len() {
        if grid.contains(f) || !grid.contains(b.mul(f, base)) || !grid.contains(b.mul(base, f)) {
            continue;
        }
        let s_i = row_of(b.mul(f, grid.cell(i, j)));
        let s_k = row_of(b.mul(f, grid.cell(k, l)));
        let t_j = col_of(b.mul(grid.cell(i, j), f));
        let t_l = col_of(b.mul(grid.cell(k, l), f));
        let (Some(si), Some(sk), Some(tj), Some(tl)) = (s_i, s_k, t_j, t_l) else {
            continue;
        };
        if left_right(si, sk, tj, tl, (i, k, j, l)) || up_down(si, sk, tj, tl, (i, k, j, l)) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::{build_bg, green_classes, ElementLabel};
    use crate::presentations::CayleyFormPresentation;

    fn q8_setup() -> (crate::band::BgBand, GreenStructure, DClassGrid) {
        let p = CayleyFormPresentation::from_names(&["a", "b", "c"], &[("a", "b", "c"), ("b", "c", "a"), ("c", "a", "b")]).unwrap();
        let bg = build_bg(&p).unwrap();
        let green = green_classes(bg.band());
        let grid = bg.k_grid(&green).unwrap();
        (bg, green, grid)
    }

    #[test]
    fn action_of_type_z() {
        let (bg, green, grid) = q8_setup();
        let z = bg.element_by_label(&ElementLabel::Z).unwrap();
        let m = action_maps(bg.band(), &green, z, &grid).unwrap();
        assert_eq!(m.sigma, vec![0, 0, 0, 0, 4, 4, 4, 4]);
        assert_eq!(m.tau, vec![0, 1, 2, 3, 0]);
    }

    #[test]
    fn action_of_type_r() {
        let (bg, green, grid) = q8_setup();
        let idx = bg.index_sets().clone();
        // ρ = (ab, c): im σ = {b, c'}, (inf)τ = a
        let r = bg.element_by_label(&ElementLabel::R { relation: 0, a: 0, b: 1, c: 2 }).unwrap();
        let m = action_maps(bg.band(), &green, r, &grid).unwrap();
        let img: std::collections::BTreeSet<usize> = m.sigma.iter().copied().collect();
        assert_eq!(img, [idx.gen_row(1), idx.gen_prime_row(2)].into());
        assert_eq!(m.tau[idx.infinity_col()], idx.gen_col(0));
    }

    #[test]
    fn k_elements_are_not_above_k() {
        let (bg, green, grid) = q8_setup();
        assert_eq!(action_maps(bg.band(), &green, 3, &grid), Err(SquareError::NotAbove(3)));
    }

    #[test]
    fn q8_square_counts() {
        let (bg, green, grid) = q8_setup();
        let sq = singular_squares(bg.band(), &green, &grid).unwrap();
        let lr: Vec<_> = sq.iter().filter(|s| s.kind == SquareKind::LeftRight).collect();
        let ud = sq.iter().filter(|s| s.kind == SquareKind::UpDown).count();
        assert_eq!(lr.len(), 10);
        assert_eq!(ud, 72);
        for e in bg.l_elements() {
            assert_eq!(lr.iter().filter(|s| s.witnesses.contains(&e)).count(), 1);
        }
        // G(a) witnesses (0, a'; a, inf)
        let idx = bg.index_sets();
        let ga = bg.element_by_label(&ElementLabel::G { gen: 0 }).unwrap();
        let s = lr.iter().find(|s| s.witnesses == vec![ga]).unwrap();
        assert_eq!((s.i, s.k, s.j, s.l), (0, idx.gen_prime_row(0), idx.gen_col(0), idx.infinity_col()));
    }

    #[test]
    fn oracle_examples() {
        let (bg, _green, grid) = q8_setup();
        let idx = bg.index_sets();
        let b = bg.band();
        let (a, c) = (idx.gen_row(0), idx.gen_col(2));
        assert!(is_singular_square_oracle(b, &grid, (0, a, 0, c)).unwrap());
        let sq = (0, idx.gen_prime_row(0), idx.gen_col(1), idx.gen_col(2));
        assert!(!is_singular_square_oracle(b, &grid, sq).unwrap());
        assert!(matches!(is_singular_square_oracle(b, &grid, (1, 1, 0, 2)), Err(SquareError::Degenerate(..))));
    }
}
